#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace nsrag {

/// Sparse term-weight vector; ordered keys keep serialization stable.
using SparseVector = std::map<std::string, double>;

/// Corpus statistics backing Okapi BM25 weights (k1=1.2, b=0.75).
/// Tokenization is the engine tokenizer, lowercased.
struct Bm25Stats {
  std::int64_t doc_count = 0;
  double avgdl = 0.0;
  std::unordered_map<std::string, std::int64_t> doc_freq;

  double idf(const std::string& term) const;
};

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

Bm25Stats build_bm25_stats(const std::vector<std::string>& documents);

/// Saturated, idf-scaled term weights; the inner product of a document
/// vector with a query vector equals the classical BM25 score.
SparseVector encode_bm25_document(const std::string& text, const Bm25Stats& stats);

/// Raw query term counts restricted to the corpus vocabulary.
SparseVector encode_bm25_query(const std::string& text, const Bm25Stats& stats);

double sparse_inner_product(const SparseVector& a, const SparseVector& b);

}  // namespace nsrag
