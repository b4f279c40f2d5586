#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsrag/bm25.hpp"
#include "nsrag/database.hpp"
#include "nsrag/filter.hpp"
#include "nsrag/table.hpp"

namespace nsrag {

inline constexpr int kSearchLimitCap = 30;
inline constexpr int kDefaultSearchLimit = 5;

/// One encoded cell: its vector, the text payload (empty for image
/// entries), and the provenance triplet plus metadata filter fields.
struct VectorEntry {
  SparseVector sparse;        // bm25 collections
  std::vector<float> dense;   // dense collections
  std::string text;
  std::string pdf_id;
  int page_number = -1;
  std::string table_name;
  std::string column_name;
  std::string primary_key;
};

enum class EncoderKind { Bm25, DenseApi, ImageDenseApi };
enum class Modality { Text, Image };
enum class Metric { InnerProduct, Cosine };

struct Collection {
  std::string name;
  std::string description;
  Modality modality = Modality::Text;
  EncoderKind encoder = EncoderKind::Bm25;
  std::string model_id;
  Metric metric = Metric::InnerProduct;
  Bm25Stats stats;  // bm25 only
  std::vector<VectorEntry> entries;
};

struct SearchRequest {
  std::string collection_name;
  std::string query;
  std::string table_name;
  std::string column_name;
  std::string filter;
  int limit = kDefaultSearchLimit;
};

/// Collections of sparse and dense vectors over encodable cells with
/// filtered exact top-K search. Immutable after encoding; concurrent
/// searches are safe.
class VectorStore {
 public:
  /// Embeds query text for dense collections; model id is the collection's.
  using TextEmbedder = std::function<std::vector<float>(const std::string& model,
                                                        const std::string& text)>;

  /// The paper's four collections: BM25 sparse, two dense text models, and
  /// one dense image model.
  static VectorStore with_default_collections();

  void add_collection(Collection collection);
  const Collection* find_collection(const std::string& name) const;
  const std::vector<Collection>& collections() const { return collections_; }

  /// Provenance triplets must resolve in `db`; duplicates are rejected.
  std::int64_t insert_entries(const std::string& collection, std::vector<VectorEntry> entries,
                              Database* db = nullptr);

  void set_bm25_stats(const std::string& collection, Bm25Stats stats);
  void set_text_embedder(TextEmbedder embedder) { embedder_ = std::move(embedder); }

  /// Exact rank-then-truncate search. Candidates are the entries whose
  /// (table_name, column_name) match the request and whose filter holds;
  /// ranked by metric descending, ties broken by primary_key (then table,
  /// column) ascending; at most min(limit, hard cap) rows.
  ResultTable search(const SearchRequest& request, const SchemaCatalog& catalog) const;

  std::string render_schema_prompt(const SchemaCatalog& catalog) const;

  void save(const std::string& path) const;
  static VectorStore load(const std::string& path);

 private:
  Collection* find_mutable(const std::string& name);

  std::vector<Collection> collections_;
  TextEmbedder embedder_;
};

/// Column names of the search result table, in order.
extern const char* const kSearchResultColumns[7];

}  // namespace nsrag
