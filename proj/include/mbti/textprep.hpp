#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "lexicon.hpp"

namespace mbti {

using TokenList = std::vector<std::string>;

namespace detail {

inline std::string read_versioned_lines(const std::string& path, std::vector<std::string>& lines) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open resource '" + path + "'");
  std::string version;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && !line.empty() && line.front() == '#') {
      const auto pos = line.find_first_not_of("# ");
      version = pos == std::string::npos ? "" : line.substr(pos);
    } else if (!line.empty() && line.front() != '#') {
      lines.push_back(line);
    }
    first = false;
  }
  return version;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline bool is_link(std::string_view token) {
  return token.find("http") != std::string_view::npos || token.find("www.") != std::string_view::npos ||
         token.find("://") != std::string_view::npos;
}

}  // namespace detail

class StopwordSet {
 public:
  StopwordSet(std::unordered_set<std::string> words, std::string version)
      : words_(std::move(words)), version_(std::move(version)) {
    if (words_.empty()) throw Error("stopword set must not be empty");
  }

  // The bundled 127-word list (resources/stopwords.txt).
  static StopwordSet classic() {
    std::unordered_set<std::string> words;
    for (auto w : lexicon::kStopwords) words.emplace(w);
    return StopwordSet(std::move(words), std::string(lexicon::kStopwordsVersion));
  }

  // One word per line; an optional leading `# <version>` line.
  static StopwordSet load(const std::string& path) {
    std::vector<std::string> lines;
    std::string version = detail::read_versioned_lines(path, lines);
    return StopwordSet(std::unordered_set<std::string>(lines.begin(), lines.end()), std::move(version));
  }

  bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::string& version() const noexcept { return version_; }

 private:
  std::unordered_set<std::string> words_;
  std::string version_;
};

// Links removed, `|||` to space, lowercased, everything but [a-z0-9' ] to
// space, whitespace collapsed. A whitespace-delimited token counts as a link
// when it contains "http", "www." or "://".
inline std::string clean(std::string_view raw) {
  std::string text;
  text.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.compare(i, kPostSeparator.size(), kPostSeparator) == 0) {
      text.push_back(' ');
      i += kPostSeparator.size() - 1;
    } else {
      text.push_back(detail::ascii_lower(raw[i]));
    }
  }

  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_ascii_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !detail::is_ascii_space(text[j])) ++j;
    if (j == i) break;
    const std::string_view token(text.data() + i, j - i);
    i = j;
    if (detail::is_link(token)) continue;
    bool pending_space = !out.empty();
    for (char c : token) {
      const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
      if (!keep) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space && out.back() != ' ') out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline TokenList tokenize(std::string_view cleaned) {
  TokenList tokens;
  std::size_t start = 0;
  while (start < cleaned.size()) {
    std::size_t end = cleaned.find(' ', start);
    if (end == std::string_view::npos) end = cleaned.size();
    if (end > start) tokens.emplace_back(cleaned.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

inline TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stops) {
  TokenList kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stops.contains(t)) kept.push_back(t);
  return kept;
}

// Rule-based English lemmatizer.
//
// One step looks the word up in the exception table; failing that it tries,
// in order: ies->y (length > 4), ses/xes/zes/ches/shes -> drop "es",
// s -> drop "s" (length > 3, not after s, u, i or an apostrophe),
// ied -> y (length > 4), then ing/ed removal when the remaining stem has at
// least 3 characters and a vowel: a doubled final consonant other than l, s,
// z is undoubled, otherwise a short consonant-vowel-consonant stem gets its
// "e" back. Words ending in "eed" keep their "ed".
//
// lemmatize() applies steps until nothing changes, which makes it idempotent.
// Rules only shorten words and every exception target is itself a fixed
// point, so the iteration terminates.
class Lemmatizer {
 public:
  Lemmatizer(std::unordered_map<std::string, std::string> exceptions, std::string version)
      : exceptions_(std::move(exceptions)), version_(std::move(version)) {}

  static Lemmatizer bundled() {
    std::unordered_map<std::string, std::string> table;
    for (const auto& [inflected, lemma] : lexicon::kLemmaExceptions)
      table.emplace(std::string(inflected), std::string(lemma));
    return Lemmatizer(std::move(table), std::string(lexicon::kLemmaExceptionsVersion));
  }

  // `inflected<TAB>lemma` per line; optional leading `# <version>` line.
  static Lemmatizer load(const std::string& path) {
    std::vector<std::string> lines;
    std::string version = detail::read_versioned_lines(path, lines);
    std::unordered_map<std::string, std::string> table;
    for (const auto& l : lines) {
      const auto tab = l.find('\t');
      if (tab == std::string::npos || tab == 0 || tab + 1 == l.size())
        throw Error("malformed lemma exception line '" + l + "' in " + path);
      table.emplace(l.substr(0, tab), l.substr(tab + 1));
    }
    return Lemmatizer(std::move(table), std::move(version));
  }

  std::string lemmatize(std::string_view token) const {
    std::string word(token);
    for (int guard = 0; guard < 64; ++guard) {
      std::string next = step(word);
      if (next == word) break;
      word = std::move(next);
    }
    return word;
  }

  std::string step(const std::string& w) const {
    if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
    const std::size_t n = w.size();
    auto ends = [&](std::string_view suf) { return n >= suf.size() && w.compare(n - suf.size(), suf.size(), suf) == 0; };

    if (ends("ies") && n > 4) return w.substr(0, n - 3) + "y";
    for (std::string_view suf : {"ses", "xes", "zes", "ches", "shes"})
      if (ends(suf) && n > suf.size()) return w.substr(0, n - 2);
    if (ends("s") && n > 3) {
      const char prev = w[n - 2];
      if (prev != 's' && prev != 'u' && prev != 'i' && prev != '\'') return w.substr(0, n - 1);
      return w;
    }
    if (ends("ied") && n > 4) return w.substr(0, n - 3) + "y";
    if (ends("ing")) return strip_verbal(w, 3);
    if (ends("ed") && !ends("eed")) return strip_verbal(w, 2);
    return w;
  }

  const std::string& version() const noexcept { return version_; }
  const std::unordered_map<std::string, std::string>& exceptions() const noexcept { return exceptions_; }

 private:
  static bool is_vowel_at(const std::string& w, std::size_t i) {
    switch (w[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return true;
      case 'y': return i > 0 && !is_vowel_at(w, i - 1);
      default: return false;
    }
  }

  static bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

  // Number of vowel-run/consonant-run pairs (Porter's measure).
  static int measure(const std::string& w) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool v = is_vowel_at(w, i);
      if (!v && prev_vowel) ++m;
      prev_vowel = v;
    }
    return m;
  }

  static bool ends_cvc(const std::string& w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    for (std::size_t i = n - 3; i < n; ++i)
      if (!is_letter(w[i])) return false;
    const char last = w[n - 1];
    return !is_vowel_at(w, n - 3) && is_vowel_at(w, n - 2) && !is_vowel_at(w, n - 1) && last != 'w' &&
           last != 'x' && last != 'y';
  }

  static std::string strip_verbal(const std::string& w, std::size_t suffix_len) {
    std::string stem = w.substr(0, w.size() - suffix_len);
    if (stem.size() < 3) return w;
    bool has_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) has_vowel = has_vowel || is_vowel_at(stem, i);
    if (!has_vowel) return w;
    const std::size_t k = stem.size();
    const char last = stem[k - 1];
    if (last == stem[k - 2] && is_letter(last) && !is_vowel_at(stem, k - 1) && last != 'l' && last != 's' &&
        last != 'z') {
      stem.pop_back();
    } else if (measure(stem) == 1 && ends_cvc(stem)) {
      stem.push_back('e');
    }
    return stem;
  }

  std::unordered_map<std::string, std::string> exceptions_;
  std::string version_;
};

struct PreprocessOptions {
  // Drops the 16 type codes after lemmatization ("intp", "entj", ...).
  bool strip_type_tokens = false;
};

// clean -> tokenize -> remove_stopwords -> lemmatize each token.
class Preprocessor {
 public:
  Preprocessor(StopwordSet stops, Lemmatizer lemmatizer, PreprocessOptions opts = {})
      : stops_(std::move(stops)), lemmatizer_(std::move(lemmatizer)), opts_(opts) {
    for (const auto& code : all_type_codes()) {
      std::string lower;
      for (char c : code) lower.push_back(detail::ascii_lower(c));
      type_tokens_.insert(lower);
    }
  }

  static Preprocessor standard(PreprocessOptions opts = {}) {
    return Preprocessor(StopwordSet::classic(), Lemmatizer::bundled(), opts);
  }

  TokenList operator()(std::string_view post) const {
    TokenList tokens = remove_stopwords(tokenize(clean(post)), stops_);
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
      std::string lemma = lemmatizer_.lemmatize(t);
      if (opts_.strip_type_tokens && type_tokens_.count(lemma)) continue;
      out.push_back(std::move(lemma));
    }
    return out;
  }

  // A user's posts joined into one document.
  TokenList document(const Record& record) const {
    TokenList doc;
    for (const auto& post : record.posts) {
      TokenList t = (*this)(post);
      doc.insert(doc.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    return doc;
  }

  const StopwordSet& stopwords() const noexcept { return stops_; }
  const Lemmatizer& lemmatizer() const noexcept { return lemmatizer_; }
  const PreprocessOptions& options() const noexcept { return opts_; }

 private:
  StopwordSet stops_;
  Lemmatizer lemmatizer_;
  PreprocessOptions opts_;
  std::unordered_set<std::string> type_tokens_;
};

inline TokenList preprocess(std::string_view post, const StopwordSet& stops) {
  return Preprocessor(stops, Lemmatizer::bundled())(post);
}

}  // namespace mbti
