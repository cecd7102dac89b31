#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace mbti {

// The four binary axes, in type-code letter order.
enum class Dimension : std::uint8_t { IE = 0, NS = 1, TF = 2, JP = 3 };

inline constexpr std::array<Dimension, 4> kDimensions = {Dimension::IE, Dimension::NS,
                                                        Dimension::TF, Dimension::JP};

// Letter for label 1 and label 0 on each axis: I/E, N/S, T/F, J/P.
inline constexpr std::array<char, 4> kPositiveLetter = {'I', 'N', 'T', 'J'};
inline constexpr std::array<char, 4> kNegativeLetter = {'E', 'S', 'F', 'P'};

inline constexpr std::string_view dimension_name(Dimension d) {
  constexpr std::array<std::string_view, 4> names = {"IE", "NS", "TF", "JP"};
  return names[static_cast<std::size_t>(d)];
}

inline Dimension parse_dimension(std::string_view s) {
  for (Dimension d : kDimensions)
    if (dimension_name(d) == s) return d;
  throw Error("unknown dimension '" + std::string(s) + "' (expected IE, NS, TF or JP)");
}

inline bool is_valid_type_code(std::string_view code) {
  if (code.size() != 4) return false;
  for (std::size_t k = 0; k < 4; ++k)
    if (code[k] != kPositiveLetter[k] && code[k] != kNegativeLetter[k]) return false;
  return true;
}

// All 16 codes, ordered by the binary tuple (ie, ns, tf, jp) read as a
// 4-bit number with ie as the high bit: ESFP first, INTJ last.
inline std::array<std::string, 16> all_type_codes() {
  std::array<std::string, 16> codes;
  for (unsigned bits = 0; bits < 16; ++bits) {
    std::string c(4, ' ');
    for (std::size_t k = 0; k < 4; ++k)
      c[k] = ((bits >> (3 - k)) & 1U) ? kPositiveLetter[k] : kNegativeLetter[k];
    codes[bits] = c;
  }
  return codes;
}

struct Record {
  std::string type_code;
  std::vector<std::string> posts;
};

struct Dataset {
  std::vector<Record> records;
  std::string source_path;

  std::size_t size() const noexcept { return records.size(); }
};

// 1 = I, N, T, J; 0 = E, S, F, P.
struct DimensionLabels {
  std::uint8_t ie = 0;
  std::uint8_t ns = 0;
  std::uint8_t tf = 0;
  std::uint8_t jp = 0;

  std::uint8_t operator[](Dimension d) const noexcept {
    switch (d) {
      case Dimension::IE: return ie;
      case Dimension::NS: return ns;
      case Dimension::TF: return tf;
      case Dimension::JP: return jp;
    }
    return 0;
  }
  std::uint8_t& operator[](Dimension d) noexcept {
    switch (d) {
      case Dimension::IE: return ie;
      case Dimension::NS: return ns;
      case Dimension::TF: return tf;
      case Dimension::JP: break;
    }
    return jp;
  }

  friend bool operator==(const DimensionLabels&, const DimensionLabels&) = default;
};

inline DimensionLabels extract_labels(std::string_view type_code) {
  if (!is_valid_type_code(type_code))
    throw Error("invalid MBTI type code '" + std::string(type_code) + "'");
  DimensionLabels labels;
  for (Dimension d : kDimensions) {
    const auto k = static_cast<std::size_t>(d);
    labels[d] = type_code[k] == kPositiveLetter[k] ? 1 : 0;
  }
  return labels;
}

inline std::string compose_type(const DimensionLabels& labels) {
  std::string code(4, ' ');
  for (Dimension d : kDimensions) {
    const auto k = static_cast<std::size_t>(d);
    code[k] = labels[d] ? kPositiveLetter[k] : kNegativeLetter[k];
  }
  return code;
}

// Binary label vector for one axis over the whole dataset.
inline std::vector<std::uint8_t> dimension_labels(const Dataset& ds, Dimension d) {
  std::vector<std::uint8_t> y;
  y.reserve(ds.size());
  for (const auto& r : ds.records) y.push_back(extract_labels(r.type_code)[d]);
  return y;
}

namespace detail {

// Reads one RFC 4180 record. Quoted fields may hold commas, doubled quotes
// and line breaks. Returns false at clean end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                            std::size_t row) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any = false;
  char ch = 0;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      if (!field.empty() || field_was_quoted)
        throw ParseError("unexpected quote inside unquoted field", row);
      in_quotes = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r' && !field_was_quoted) field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else if (ch == '\r' && field_was_quoted) {
      // CR after a closing quote; the LF follows.
    } else {
      if (field_was_quoted)
        throw ParseError("characters after closing quote", row);
      field.push_back(ch);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", row);
  if (!any) return false;
  if (!field.empty() && field.back() == '\r' && !field_was_quoted) field.pop_back();
  fields.push_back(std::move(field));
  return true;
}

}  // namespace detail

inline constexpr std::string_view kPostSeparator = "|||";

inline std::vector<std::string> split_posts(std::string_view joined) {
  std::vector<std::string> posts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = joined.find(kPostSeparator, start);
    if (pos == std::string_view::npos) {
      posts.emplace_back(joined.substr(start));
      return posts;
    }
    posts.emplace_back(joined.substr(start, pos - start));
    start = pos + kPostSeparator.size();
  }
}

// Parses `type,posts` CSV text. Row numbers in errors count data rows from 1.
inline Dataset parse_dataset(std::istream& in, std::string source = "<stream>") {
  if (in.peek() == std::char_traits<char>::eof()) throw Error(source + ": empty file");

  // UTF-8 byte order mark
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
    if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF))
      throw ParseError("invalid byte sequence at start of header", 0);
  }

  std::vector<std::string> fields;
  if (!detail::read_csv_record(in, fields, 0)) throw Error(source + ": empty file");
  if (fields.size() != 2 || fields[0] != "type" || fields[1] != "posts")
    throw ParseError("expected header 'type,posts'", 0);

  Dataset ds;
  ds.source_path = std::move(source);
  std::size_t row = 1;
  while (detail::read_csv_record(in, fields, row)) {
    if (fields.size() == 1 && fields[0].empty()) {
      ++row;
      continue;  // blank line
    }
    if (fields.size() != 2)
      throw ParseError("expected 2 fields, found " + std::to_string(fields.size()), row);
    if (!is_valid_type_code(fields[0]))
      throw ParseError("invalid MBTI type code '" + fields[0] + "'", row);
    ds.records.push_back(Record{fields[0], split_posts(fields[1])});
    ++row;
  }
  if (ds.records.empty()) throw Error(ds.source_path + ": no data rows");
  return ds;
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset '" + path + "'");
  return parse_dataset(in, path);
}

struct Split {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double ratio = 0.75;
};

inline std::size_t train_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

// Seeded Fisher-Yates shuffle of 0..n-1, cut at floor(ratio * n).
inline Split split_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (n < 2) throw Error("split needs at least 2 records, got " + std::to_string(n));
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error("split ratio must lie in (0, 1), got " + std::to_string(ratio));
  auto idx = iota_indices(n);
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t cut = train_count(n, ratio);
  Split s;
  s.train_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test_indices.assign(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  s.seed = seed;
  s.ratio = ratio;
  return s;
}

inline Split split(const Dataset& ds, double ratio, std::uint64_t seed) {
  return split_indices(ds.size(), ratio, seed);
}

// Stratified by full type code. Each stratum is shuffled with the shared
// generator; per-stratum train quotas use largest remainders so the train
// set still has exactly floor(ratio * n) rows.
inline Split split_stratified(const Dataset& ds, double ratio, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n < 2) throw Error("split needs at least 2 records, got " + std::to_string(n));
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error("split ratio must lie in (0, 1), got " + std::to_string(ratio));

  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < n; ++i) strata[ds.records[i].type_code].push_back(i);

  Rng rng(seed);
  struct Quota {
    std::vector<std::size_t>* members;
    std::size_t take;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (auto& [code, members] : strata) {
    rng.shuffle(members);
    const double exact = ratio * static_cast<double>(members.size());
    const auto take = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({&members, take, exact - static_cast<double>(take)});
    assigned += take;
  }
  const std::size_t target = train_count(n, ratio);
  std::vector<std::size_t> order = iota_indices(quotas.size());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].remainder > quotas[b].remainder;
  });
  for (std::size_t k = 0; assigned < target && k < order.size(); ++k) {
    auto& q = quotas[order[k]];
    if (q.take < q.members->size()) {
      ++q.take;
      ++assigned;
    }
  }

  Split s;
  s.seed = seed;
  s.ratio = ratio;
  for (const auto& q : quotas) {
    s.train_indices.insert(s.train_indices.end(), q.members->begin(),
                           q.members->begin() + static_cast<std::ptrdiff_t>(q.take));
    s.test_indices.insert(s.test_indices.end(),
                          q.members->begin() + static_cast<std::ptrdiff_t>(q.take),
                          q.members->end());
  }
  return s;
}

}  // namespace mbti
