#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "error.hpp"
#include "textprep.hpp"

namespace mbti {

struct TypeDistribution {
  std::map<std::string, std::size_t> type_counts;  // all 16 codes, zeros included
  std::map<char, std::size_t> letter_counts;       // I E N S T F J P
  std::size_t total = 0;

  double type_proportion(const std::string& code) const {
    return static_cast<double>(type_counts.at(code)) / static_cast<double>(total);
  }
  double letter_proportion(char letter) const {
    return static_cast<double>(letter_counts.at(letter)) / static_cast<double>(total);
  }
};

inline TypeDistribution type_distribution(const Dataset& ds) {
  if (ds.records.empty()) throw Error("type_distribution: empty dataset");
  TypeDistribution dist;
  for (const auto& code : all_type_codes()) dist.type_counts[code] = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    dist.letter_counts[kPositiveLetter[k]] = 0;
    dist.letter_counts[kNegativeLetter[k]] = 0;
  }
  for (const auto& r : ds.records) {
    ++dist.type_counts.at(r.type_code);
    for (char c : r.type_code) ++dist.letter_counts.at(c);
  }
  dist.total = ds.size();
  return dist;
}

// A filter is a full type code ("INTP") or one axis letter ("I").
inline bool matches_filter(const std::string& type_code, const std::string& filter) {
  if (filter.size() == 4) {
    if (!is_valid_type_code(filter)) throw Error("unknown type filter '" + filter + "'");
    return type_code == filter;
  }
  if (filter.size() == 1) {
    for (std::size_t k = 0; k < 4; ++k)
      if (filter[0] == kPositiveLetter[k] || filter[0] == kNegativeLetter[k]) return type_code[k] == filter[0];
  }
  throw Error("unknown type filter '" + filter + "' (expected a type code or one of IENSTFJP)");
}

using TermCounts = std::vector<std::pair<std::string, std::size_t>>;

// Descending count, lexicographic tie-break, at most top_k entries. `docs`
// holds the preprocessed tokens of each record, aligned with ds.records.
inline TermCounts term_frequencies(const Dataset& ds, const std::vector<TokenList>& docs,
                                   const std::optional<std::string>& filter, std::size_t top_k) {
  if (top_k < 1) throw Error("term_frequencies: top_k must be >= 1");
  if (docs.size() != ds.size()) throw Error("term_frequencies: token lists do not match the dataset");
  if (filter) matches_filter("INTJ", *filter);  // validate before scanning
  std::unordered_map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (filter && !matches_filter(ds.records[i].type_code, *filter)) continue;
    for (const auto& t : docs[i]) ++counts[t];
  }
  TermCounts ranked(counts.begin(), counts.end());
  const std::size_t keep = std::min(top_k, ranked.size());
  auto by_rank = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), by_rank);
  ranked.resize(keep);
  return ranked;
}

inline TermCounts term_frequencies(const Dataset& ds, const Preprocessor& prep, const std::optional<std::string>& filter,
                                   std::size_t top_k) {
  std::vector<TokenList> docs;
  docs.reserve(ds.size());
  for (const auto& r : ds.records) docs.push_back(prep.document(r));
  return term_frequencies(ds, docs, filter, top_k);
}

}  // namespace mbti
