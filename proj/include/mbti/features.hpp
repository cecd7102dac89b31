#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "textprep.hpp"

namespace mbti {

// Term -> index map. Indices run 1..size() by descending corpus frequency,
// ties broken lexicographically; 0 is reserved for padding.
class Vocabulary {
 public:
  static constexpr int kFormatVersion = 1;

  Vocabulary() = default;

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t total_docs() const noexcept { return total_docs_; }
  std::optional<std::size_t> max_terms() const noexcept { return max_terms_; }

  // 0 when the term is out of vocabulary.
  std::uint32_t index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    return it == index_.end() ? 0 : it->second;
  }
  const std::string& term(std::uint32_t index) const { return terms_.at(index - 1); }
  std::size_t doc_freq(std::uint32_t index) const { return doc_freq_.at(index - 1); }
  std::size_t doc_freq(std::string_view term) const {
    const auto i = index_of(term);
    return i == 0 ? 0 : doc_freq(i);
  }

  // `# mbti-vocab v1 total_docs=N` then `term<TAB>index<TAB>doc_freq` rows.
  std::string to_tsv() const {
    std::ostringstream os;
    os << "# mbti-vocab v" << kFormatVersion << " total_docs=" << total_docs_ << '\n';
    for (std::size_t i = 0; i < terms_.size(); ++i) os << terms_[i] << '\t' << (i + 1) << '\t' << doc_freq_[i] << '\n';
    return os.str();
  }

  static Vocabulary from_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("vocabulary: empty input");
    int version = 0;
    std::size_t total = 0;
    if (std::sscanf(line.c_str(), "# mbti-vocab v%d total_docs=%zu", &version, &total) != 2)
      throw Error("vocabulary: malformed header '" + line + "'");
    if (version != kFormatVersion)
      throw Error("vocabulary: unsupported version " + std::to_string(version) + " (expected " +
                  std::to_string(kFormatVersion) + ")");
    Vocabulary v;
    v.total_docs_ = total;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) throw Error("vocabulary: malformed line " + std::to_string(line_no));
      std::string term = line.substr(0, t1);
      const auto index = std::stoul(line.substr(t1 + 1, t2 - t1 - 1));
      const auto df = std::stoull(line.substr(t2 + 1));
      if (index != v.terms_.size() + 1)
        throw Error("vocabulary: index gap at line " + std::to_string(line_no));
      v.index_.emplace(term, static_cast<std::uint32_t>(index));
      v.terms_.push_back(std::move(term));
      v.doc_freq_.push_back(df);
    }
    return v;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write vocabulary '" + path + "'");
    out << to_tsv();
  }

  static Vocabulary load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open vocabulary '" + path + "'");
    return from_tsv(in);
  }

  // FNV-1a 64 over the TSV serialization; identifies the vocabulary a model
  // was trained against.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_tsv()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  friend Vocabulary build_vocab(const std::vector<TokenList>& corpus, std::optional<std::size_t> max_terms);

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t total_docs_ = 0;
  std::optional<std::size_t> max_terms_;
};

inline Vocabulary build_vocab(const std::vector<TokenList>& corpus, std::optional<std::size_t> max_terms = std::nullopt) {
  if (corpus.empty()) throw Error("build_vocab: empty corpus");
  struct Counts {
    std::size_t freq = 0;
    std::size_t docs = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Counts> counts;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d]) {
      auto& c = counts[t];
      ++c.freq;
      if (c.last_doc != d) {
        ++c.docs;
        c.last_doc = d;
      }
    }
  }
  std::vector<std::pair<std::string, Counts>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.freq != b.second.freq) return a.second.freq > b.second.freq;
    return a.first < b.first;
  });
  if (max_terms && ranked.size() > *max_terms) ranked.resize(*max_terms);

  Vocabulary v;
  v.total_docs_ = corpus.size();
  v.max_terms_ = max_terms;
  v.terms_.reserve(ranked.size());
  for (auto& [term, c] : ranked) {
    v.index_.emplace(term, static_cast<std::uint32_t>(v.terms_.size() + 1));
    v.terms_.push_back(term);
    v.doc_freq_.push_back(c.docs);
  }
  return v;
}

// Sparse row keyed by 1-based vocabulary index, sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

enum class FeatureKind { Counts, TfIdf };

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::size_t n_cols = 0;  // vocabulary size; valid indices are 1..n_cols
  FeatureKind kind = FeatureKind::Counts;

  std::size_t size() const noexcept { return rows.size(); }
};

inline SparseVector bow_vector(const TokenList& tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens)
    if (const auto i = vocab.index_of(t)) counts[i] += 1.0;
  return SparseVector(counts.begin(), counts.end());
}

inline FeatureMatrix bow_matrix(const std::vector<TokenList>& docs, const Vocabulary& vocab) {
  FeatureMatrix m;
  m.n_cols = vocab.size();
  m.kind = FeatureKind::Counts;
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(bow_vector(d, vocab));
  return m;
}

// Smoothed idf: ln((1 + N) / (1 + df)) + 1.
inline double idf(const Vocabulary& vocab, std::uint32_t index) {
  const auto n = static_cast<double>(vocab.total_docs());
  const auto df = static_cast<double>(vocab.doc_freq(index));
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

inline SparseVector tfidf_row(const SparseVector& counts, const Vocabulary& vocab) {
  SparseVector row;
  row.reserve(counts.size());
  double sq = 0.0;
  for (const auto& [i, tf] : counts) {
    const double w = tf * idf(vocab, i);
    row.emplace_back(i, w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& e : row) e.second /= norm;
  }
  return row;
}

inline FeatureMatrix tfidf_transform(const FeatureMatrix& counts, const Vocabulary& vocab) {
  if (counts.kind != FeatureKind::Counts) throw Error("tfidf_transform: input must hold raw counts");
  FeatureMatrix m;
  m.n_cols = counts.n_cols;
  m.kind = FeatureKind::TfIdf;
  m.rows.reserve(counts.size());
  for (const auto& r : counts.rows) m.rows.push_back(tfidf_row(r, vocab));
  return m;
}

// Fixed-width integer rows, pre-padded with 0 and pre-truncated.
struct SequenceBatch {
  std::vector<std::int32_t> data;
  std::size_t rows = 0;
  std::size_t max_len = 0;

  SequenceBatch() = default;
  SequenceBatch(std::size_t n, std::size_t len) : data(n * len, 0), rows(n), max_len(len) {}

  std::span<std::int32_t> row(std::size_t i) { return {data.data() + i * max_len, max_len}; }
  std::span<const std::int32_t> row(std::size_t i) const { return {data.data() + i * max_len, max_len}; }

  SequenceBatch select(std::span<const std::size_t> indices) const {
    SequenceBatch out(indices.size(), max_len);
    for (std::size_t k = 0; k < indices.size(); ++k) std::ranges::copy(row(indices[k]), out.row(k).begin());
    return out;
  }
};

inline std::vector<std::int32_t> encode_sequence(const TokenList& tokens, const Vocabulary& vocab, std::size_t max_len) {
  if (max_len == 0) throw Error("encode_sequence: max_len must be >= 1");
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens)
    if (const auto i = vocab.index_of(t)) ids.push_back(static_cast<std::int32_t>(i));
  std::vector<std::int32_t> out(max_len, 0);
  const std::size_t keep = std::min(ids.size(), max_len);
  std::copy(ids.end() - static_cast<std::ptrdiff_t>(keep), ids.end(), out.end() - static_cast<std::ptrdiff_t>(keep));
  return out;
}

inline SequenceBatch encode_batch(const std::vector<TokenList>& docs, const Vocabulary& vocab, std::size_t max_len) {
  SequenceBatch b(docs.size(), max_len);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto row = encode_sequence(docs[i], vocab, max_len);
    std::ranges::copy(row, b.row(i).begin());
  }
  return b;
}

}  // namespace mbti
