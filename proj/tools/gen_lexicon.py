#!/usr/bin/env python3
"""Regenerates include/mbti/lexicon.hpp from the files under resources/."""
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent


def read(name):
    lines = (root / "resources" / name).read_text(encoding="utf-8").splitlines()
    version = lines[0].lstrip("#").strip()
    return version, [l for l in lines[1:] if l and not l.startswith("#")]


sw_version, stopwords = read("stopwords.txt")
lx_version, lemmas = read("lemma_exceptions.tsv")

out = ["// Generated by tools/gen_lexicon.py from resources/. Do not edit.",
       "#pragma once", "", "#include <array>", "#include <string_view>", "#include <utility>", "",
       "namespace mbti::lexicon {", "",
       f'inline constexpr std::string_view kStopwordsVersion = "{sw_version}";',
       f"inline constexpr std::array<std::string_view, {len(stopwords)}> kStopwords = {{"]
for i in range(0, len(stopwords), 8):
    out.append("    " + " ".join(f'"{w}",' for w in stopwords[i:i + 8]))
out += ["};", "",
        f'inline constexpr std::string_view kLemmaExceptionsVersion = "{lx_version}";',
        f"inline constexpr std::array<std::pair<std::string_view, std::string_view>, {len(lemmas)}>",
        "    kLemmaExceptions = {{"]
for l in lemmas:
    a, b = l.split("\t")
    out.append(f'        {{"{a}", "{b}"}},')
out += ["    }};", "", "}  // namespace mbti::lexicon", ""]
(root / "include" / "mbti" / "lexicon.hpp").write_text("\n".join(out), encoding="utf-8")
