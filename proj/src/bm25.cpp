#include "nsrag/bm25.hpp"

#include <cmath>
#include <unordered_set>

#include "nsrag/tokenizer.hpp"

namespace nsrag {

double Bm25Stats::idf(const std::string& term) const {
  auto it = doc_freq.find(term);
  std::int64_t df = it == doc_freq.end() ? 0 : it->second;
  double n = static_cast<double>(doc_count);
  return std::log(1.0 + (n - static_cast<double>(df) + 0.5) / (static_cast<double>(df) + 0.5));
}

Bm25Stats build_bm25_stats(const std::vector<std::string>& documents) {
  Bm25Stats stats;
  stats.doc_count = static_cast<std::int64_t>(documents.size());
  std::int64_t total_len = 0;
  for (const auto& doc : documents) {
    auto tokens = tokenize(doc, /*lowercase=*/true);
    total_len += static_cast<std::int64_t>(tokens.size());
    std::unordered_set<std::string> seen;
    for (auto& t : tokens) seen.insert(std::move(t));
    for (const auto& t : seen) stats.doc_freq[t]++;
  }
  stats.avgdl = stats.doc_count > 0
                    ? static_cast<double>(total_len) / static_cast<double>(stats.doc_count)
                    : 1.0;
  if (stats.avgdl <= 0) stats.avgdl = 1.0;
  return stats;
}

SparseVector encode_bm25_document(const std::string& text, const Bm25Stats& stats) {
  auto tokens = tokenize(text, /*lowercase=*/true);
  std::unordered_map<std::string, std::int64_t> tf;
  for (auto& t : tokens) tf[std::move(t)]++;

  double dl = static_cast<double>(tokens.size());
  double norm = kBm25K1 * (1.0 - kBm25B + kBm25B * dl / stats.avgdl);
  SparseVector vec;
  for (const auto& [term, count] : tf) {
    double f = static_cast<double>(count);
    vec[term] = stats.idf(term) * (f * (kBm25K1 + 1.0)) / (f + norm);
  }
  return vec;
}

SparseVector encode_bm25_query(const std::string& text, const Bm25Stats& stats) {
  SparseVector vec;
  for (const auto& t : tokenize(text, /*lowercase=*/true)) {
    if (stats.doc_freq.count(t)) vec[t] += 1.0;
  }
  return vec;
}

double sparse_inner_product(const SparseVector& a, const SparseVector& b) {
  const SparseVector& small = a.size() <= b.size() ? a : b;
  const SparseVector& large = a.size() <= b.size() ? b : a;
  double dot = 0;
  for (const auto& [term, weight] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += weight * it->second;
  }
  return dot;
}

}  // namespace nsrag
