// Generated by tools/gen_lexicon.py from resources/. Do not edit.
#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace mbti::lexicon {

inline constexpr std::string_view kStopwordsVersion = "classic-english-127 v1";
inline constexpr std::array<std::string_view, 127> kStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who",
    "whom", "this", "that", "these", "those", "am", "is", "are",
    "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the",
    "and", "but", "if", "or", "because", "as", "until", "while",
    "of", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below", "to",
    "from", "up", "down", "in", "out", "on", "off", "over",
    "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few",
    "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s",
    "t", "can", "will", "just", "don", "should", "now",
};

inline constexpr std::string_view kLemmaExceptionsVersion = "lemma-exceptions v1";
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 196>
    kLemmaExceptions = {{
        {"am", "be"},
        {"are", "be"},
        {"is", "be"},
        {"was", "be"},
        {"were", "be"},
        {"been", "be"},
        {"being", "be"},
        {"has", "have"},
        {"had", "have"},
        {"having", "have"},
        {"does", "do"},
        {"did", "do"},
        {"done", "do"},
        {"doing", "do"},
        {"goes", "go"},
        {"went", "go"},
        {"gone", "go"},
        {"going", "go"},
        {"feet", "foot"},
        {"teeth", "tooth"},
        {"geese", "goose"},
        {"mice", "mouse"},
        {"lice", "louse"},
        {"dice", "die"},
        {"oxen", "ox"},
        {"men", "man"},
        {"women", "woman"},
        {"children", "child"},
        {"people", "person"},
        {"lives", "life"},
        {"wives", "wife"},
        {"knives", "knife"},
        {"leaves", "leaf"},
        {"wolves", "wolf"},
        {"selves", "self"},
        {"halves", "half"},
        {"shelves", "shelf"},
        {"thieves", "thief"},
        {"loaves", "loaf"},
        {"criteria", "criterion"},
        {"phenomena", "phenomenon"},
        {"analyses", "analysis"},
        {"crises", "crisis"},
        {"theses", "thesis"},
        {"hypotheses", "hypothesis"},
        {"diagnoses", "diagnosis"},
        {"houses", "house"},
        {"horses", "horse"},
        {"courses", "course"},
        {"causes", "cause"},
        {"uses", "use"},
        {"cases", "case"},
        {"bases", "base"},
        {"purposes", "purpose"},
        {"responses", "response"},
        {"senses", "sense"},
        {"phrases", "phrase"},
        {"noses", "nose"},
        {"roses", "rose"},
        {"verses", "verse"},
        {"promises", "promise"},
        {"releases", "release"},
        {"exercises", "exercise"},
        {"nurses", "nurse"},
        {"doses", "dose"},
        {"closes", "close"},
        {"movies", "movie"},
        {"cookies", "cookie"},
        {"series", "series"},
        {"species", "species"},
        {"lies", "lie"},
        {"dies", "die"},
        {"ties", "tie"},
        {"used", "use"},
        {"using", "use"},
        {"died", "die"},
        {"tried", "try"},
        {"cried", "cry"},
        {"lied", "lie"},
        {"ran", "run"},
        {"saw", "see"},
        {"seen", "see"},
        {"made", "make"},
        {"said", "say"},
        {"got", "get"},
        {"gotten", "get"},
        {"took", "take"},
        {"taken", "take"},
        {"came", "come"},
        {"knew", "know"},
        {"known", "know"},
        {"thought", "think"},
        {"felt", "feel"},
        {"told", "tell"},
        {"became", "become"},
        {"brought", "bring"},
        {"began", "begin"},
        {"begun", "begin"},
        {"kept", "keep"},
        {"held", "hold"},
        {"wrote", "write"},
        {"written", "write"},
        {"stood", "stand"},
        {"heard", "hear"},
        {"meant", "mean"},
        {"met", "meet"},
        {"paid", "pay"},
        {"sat", "sit"},
        {"spoke", "speak"},
        {"spoken", "speak"},
        {"lost", "lose"},
        {"fell", "fall"},
        {"fallen", "fall"},
        {"sent", "send"},
        {"built", "build"},
        {"understood", "understand"},
        {"drew", "draw"},
        {"drawn", "draw"},
        {"broke", "break"},
        {"broken", "break"},
        {"spent", "spend"},
        {"grew", "grow"},
        {"grown", "grow"},
        {"won", "win"},
        {"taught", "teach"},
        {"bought", "buy"},
        {"caught", "catch"},
        {"fought", "fight"},
        {"sought", "seek"},
        {"ate", "eat"},
        {"eaten", "eat"},
        {"drove", "drive"},
        {"driven", "drive"},
        {"chose", "choose"},
        {"chosen", "choose"},
        {"forgot", "forget"},
        {"forgotten", "forget"},
        {"gave", "give"},
        {"given", "give"},
        {"found", "find"},
        {"sang", "sing"},
        {"sung", "sing"},
        {"swam", "swim"},
        {"threw", "throw"},
        {"thrown", "throw"},
        {"wore", "wear"},
        {"worn", "wear"},
        {"slept", "sleep"},
        {"led", "lead"},
        {"fed", "feed"},
        {"hid", "hide"},
        {"hidden", "hide"},
        {"rode", "ride"},
        {"ridden", "ride"},
        {"shook", "shake"},
        {"stole", "steal"},
        {"stolen", "steal"},
        {"woke", "wake"},
        {"woken", "wake"},
        {"dug", "dig"},
        {"flew", "fly"},
        {"flown", "fly"},
        {"better", "good"},
        {"best", "good"},
        {"something", "something"},
        {"nothing", "nothing"},
        {"anything", "anything"},
        {"everything", "everything"},
        {"thing", "thing"},
        {"things", "thing"},
        {"morning", "morning"},
        {"evening", "evening"},
        {"during", "during"},
        {"bring", "bring"},
        {"king", "king"},
        {"ring", "ring"},
        {"sing", "sing"},
        {"spring", "spring"},
        {"string", "string"},
        {"wing", "wing"},
        {"ceiling", "ceiling"},
        {"interesting", "interesting"},
        {"amazing", "amazing"},
        {"boring", "boring"},
        {"always", "always"},
        {"perhaps", "perhaps"},
        {"sometimes", "sometimes"},
        {"news", "news"},
        {"lens", "lens"},
        {"towards", "towards"},
        {"besides", "besides"},
        {"hundred", "hundred"},
        {"kindred", "kindred"},
        {"sacred", "sacred"},
        {"naked", "naked"},
        {"wicked", "wicked"},
    }};

}  // namespace mbti::lexicon
