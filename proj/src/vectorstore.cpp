#include "nsrag/vectorstore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

using json = nlohmann::ordered_json;

std::string triplet_key(const VectorEntry& e) {
  return e.table_name + "\x1f" + e.column_name + "\x1f" + e.primary_key;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.empty() || b.empty() || a.size() != b.size()) return 0.0;
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); i++) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

const char* const kSearchResultColumns[7] = {"text",        "pdf_id",      "page_number",
                                             "table_name",  "column_name", "primary_key",
                                             "score"};

VectorStore VectorStore::with_default_collections() {
  VectorStore store;
  store.add_collection(Collection{
      "text_bm25_en",
      "This collection is used to store the sparse embeddings generated by the BM25 model for "
      "all encodable text content in another relational database. The semantic search is based "
      "on field `vector` with metric inner-product (IP).",
      Modality::Text, EncoderKind::Bm25, "bm25", Metric::InnerProduct, {}, {}});
  store.add_collection(Collection{
      "text_sentence_transformers_all_minilm_l6_v2",
      "This collection is used to store the embeddings generated by the sentence transformer "
      "all-MiniLM-L6-v2 for all encodable text content in another relational database. The "
      "semantic search is based on field `vector` with metric COSINE.",
      Modality::Text, EncoderKind::DenseApi, "sentence-transformers/all-MiniLM-L6-v2",
      Metric::Cosine, {}, {}});
  store.add_collection(Collection{
      "text_bge_large_en_v1_5",
      "This collection is used to store the embeddings generated by the model bge-large-en-v1.5 "
      "for all encodable text content in another relational database. The semantic search is "
      "based on field `vector` with metric COSINE.",
      Modality::Text, EncoderKind::DenseApi, "BAAI/bge-large-en-v1.5", Metric::Cosine, {}, {}});
  store.add_collection(Collection{
      "image_clip_vit_base_patch32",
      "This collection is used to store the embeddings generated by the model "
      "clip-vit-base-patch32 for cropped page regions referenced by encodable bounding_box "
      "columns. The text payload is empty; the semantic search is based on field `vector` with "
      "metric COSINE.",
      Modality::Image, EncoderKind::ImageDenseApi, "openai/clip-vit-base-patch32", Metric::Cosine,
      {}, {}});
  return store;
}

void VectorStore::add_collection(Collection collection) {
  if (find_collection(collection.name)) {
    raise(ErrorKind::DuplicateEntry, "collection " + collection.name + " already exists");
  }
  collections_.push_back(std::move(collection));
}

const Collection* VectorStore::find_collection(const std::string& name) const {
  for (const auto& c : collections_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Collection* VectorStore::find_mutable(const std::string& name) {
  for (auto& c : collections_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::int64_t VectorStore::insert_entries(const std::string& collection,
                                         std::vector<VectorEntry> entries, Database* db) {
  Collection* col = find_mutable(collection);
  if (!col) raise(ErrorKind::UnknownCollection, collection);

  std::set<std::string> seen;
  for (const auto& e : col->entries) seen.insert(triplet_key(e));
  for (auto& entry : entries) {
    std::string key = triplet_key(entry);
    if (!seen.insert(key).second) {
      raise(ErrorKind::DuplicateEntry,
            "entry (" + entry.table_name + ", " + entry.column_name + ", " + entry.primary_key +
                ") already exists in " + collection);
    }
    if (db) {
      try {
        db->resolve_cell(entry.table_name, entry.column_name, entry.primary_key);
      } catch (const Error& e2) {
        if (e2.kind() == ErrorKind::NotFound) {
          raise(ErrorKind::DanglingProvenance,
                "provenance triplet (" + entry.table_name + ", " + entry.column_name + ", " +
                    entry.primary_key + ") does not resolve in the relational store");
        }
        throw;
      }
    }
    col->entries.push_back(std::move(entry));
  }
  return static_cast<std::int64_t>(entries.size());
}

void VectorStore::set_bm25_stats(const std::string& collection, Bm25Stats stats) {
  Collection* col = find_mutable(collection);
  if (!col) raise(ErrorKind::UnknownCollection, collection);
  col->stats = std::move(stats);
}

ResultTable VectorStore::search(const SearchRequest& request, const SchemaCatalog& catalog) const {
  const Collection* col = find_collection(request.collection_name);
  if (!col) {
    raise(ErrorKind::UnknownCollection,
          "collection '" + request.collection_name + "' does not exist in the vectorstore");
  }
  if (!catalog.is_encodable(request.table_name, request.column_name)) {
    raise(ErrorKind::NotEncodablePair,
          "(" + request.table_name + ", " + request.column_name + ") is not an encodable pair");
  }
  auto filter = parse_filter(request.filter);

  // Query vector through the collection's encoder.
  SparseVector query_sparse;
  std::vector<float> query_dense;
  if (col->encoder == EncoderKind::Bm25) {
    query_sparse = encode_bm25_query(request.query, col->stats);
  } else {
    if (!embedder_) {
      raise(ErrorKind::NotSupported,
            "collection " + col->name + " needs a dense text encoder, none is configured");
    }
    query_dense = embedder_(col->model_id, request.query);
  }

  std::vector<std::pair<double, const VectorEntry*>> scored;
  for (const auto& entry : col->entries) {
    if (entry.table_name != request.table_name || entry.column_name != request.column_name) {
      continue;
    }
    FilterContext ctx{entry.pdf_id, entry.page_number, entry.table_name,
                      entry.column_name, entry.primary_key, entry.text};
    if (!evaluate_filter(*filter, ctx)) continue;
    double score = col->encoder == EncoderKind::Bm25
                       ? sparse_inner_product(query_sparse, entry.sparse)
                       : cosine(query_dense, entry.dense);
    scored.emplace_back(score, &entry);
  }

  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second->primary_key != b.second->primary_key) {
      return a.second->primary_key < b.second->primary_key;
    }
    if (a.second->table_name != b.second->table_name) {
      return a.second->table_name < b.second->table_name;
    }
    return a.second->column_name < b.second->column_name;
  });

  int limit = std::min(request.limit, kSearchLimitCap);
  if (limit < 1) raise(ErrorKind::InvalidLimit, "limit must be a positive integer");

  ResultTable table;
  table.column_names.assign(std::begin(kSearchResultColumns), std::end(kSearchResultColumns));
  for (const auto& [score, entry] : scored) {
    if (static_cast<int>(table.rows.size()) >= limit) {
      table.truncated = true;
      break;
    }
    table.rows.push_back({Value(entry->text), Value(entry->pdf_id), Value(entry->page_number),
                          Value(entry->table_name), Value(entry->column_name),
                          Value(entry->primary_key), Value(score)});
  }
  return table;
}

namespace {

struct OperatorDoc {
  const char* symbol;
  const char* example;
  const char* description;
};

constexpr OperatorDoc kOperators[] = {
    {"and", "expr1 and expr2", "True if both expr1 and expr2 are true."},
    {"or", "expr1 or expr2", "True if either expr1 or expr2 is true."},
    {"not", "not expr", "True if expr is false."},
    {"==", "a == b", "True if the two operands are equal."},
    {"!=", "a != b", "True if the two operands are not equal."},
    {"<", "a < b", "True if a is strictly smaller than b."},
    {"<=", "a <= b", "True if a is smaller than or equal to b."},
    {">", "a > b", "True if a is strictly greater than b."},
    {">=", "a >= b", "True if a is greater than or equal to b."},
    {"in", "a in [v1, v2]", "True if a equals one element of the list."},
    {"not in", "a not in [v1, v2]", "True if a equals no element of the list."},
    {"+", "a + b", "Add the two operands."},
    {"-", "a - b", "Subtract the second operand from the first."},
    {"*", "a * b", "Multiply the two operands."},
    {"/", "a / b", "Divide the first operand by the second."},
};

const char* dtype_for(const Collection& col) {
  return col.encoder == EncoderKind::Bm25 ? "SPARSE_FLOAT_VECTOR" : "FLOAT_VECTOR";
}

const char* vector_desc(const Collection& col) {
  switch (col.encoder) {
    case EncoderKind::Bm25: return "attained by BM25 model";
    case EncoderKind::DenseApi: return "attained by the collection's text embedding model";
    case EncoderKind::ImageDenseApi: return "attained by the collection's image embedding model";
  }
  return "";
}

}  // namespace

std::string VectorStore::render_schema_prompt(const SchemaCatalog& catalog) const {
  std::string out = "The vectorstore schema for " + catalog.db_name +
                    " is as follows. You can try collections with different encoding models or "
                    "modalities:\n";
  json cols = json::array();
  for (const auto& col : collections_) {
    json fields = json::array();
    fields.push_back({{"name", "vector"}, {"dtype", dtype_for(col)}, {"desc", vector_desc(col)}});
    fields.push_back({{"name", "text"},
                      {"dtype", "VARCHAR"},
                      {"desc", col.modality == Modality::Image
                                   ? "empty for image entries; the source cell is a bounding box"
                                   : "cell value from the database"}});
    fields.push_back(
        {{"name", "pdf_id"}, {"dtype", "VARCHAR"}, {"desc", "unique id of the PDF file"}});
    fields.push_back({{"name", "page_number"},
                      {"dtype", "INT16"},
                      {"desc", "source page of the `text` field (-1 if not tied to a page)"}});
    fields.push_back(
        {{"name", "table_name"}, {"dtype", "VARCHAR"}, {"desc", "source table of `text` field"}});
    fields.push_back({{"name", "column_name"},
                      {"dtype", "VARCHAR"},
                      {"desc", "source column of `text` field"}});
    fields.push_back({{"name", "primary_key"},
                      {"dtype", "VARCHAR"},
                      {"desc", "primary key value for the row that contains the `text` field in "
                               "the relational database"}});
    cols.push_back(
        {{"collection_name", col.name}, {"description", col.description}, {"fields", fields}});
  }
  out += cols.dump(4);
  out +=
      "\n\nHere are all encodable (table_name, column_name) tuples from the corresponding " +
      catalog.db_name +
      " database, where the encoded vector entries are sourced. Different columns together "
      "provide multiple perspectives for vector search.\n[";
  for (size_t i = 0; i < catalog.encodable.size(); i++) {
    const auto& [t, c] = catalog.encodable[i];
    if (i) out += ", ";
    out += "(\"" + t + "\", \"" + c + "\")";
  }
  out +=
      "]\n\nHere are the operators that you can use in the `filter` parameter for "
      "RetrieveFromVectorstore action:\n";
  json ops = json::array();
  for (const auto& op : kOperators) {
    ops.push_back(
        {{"symbol", op.symbol}, {"example", op.example}, {"description", op.description}});
  }
  out += ops.dump(4);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void VectorStore::save(const std::string& path) const {
  json root;
  root["collections"] = json::array();
  for (const auto& col : collections_) {
    json jc;
    jc["name"] = col.name;
    jc["description"] = col.description;
    jc["modality"] = col.modality == Modality::Text ? "text" : "image";
    jc["encoder"] = col.encoder == EncoderKind::Bm25
                        ? "bm25"
                        : col.encoder == EncoderKind::DenseApi ? "dense-api" : "image-dense-api";
    jc["model_id"] = col.model_id;
    jc["metric"] = col.metric == Metric::InnerProduct ? "ip" : "cosine";
    if (col.encoder == EncoderKind::Bm25) {
      json stats;
      stats["doc_count"] = col.stats.doc_count;
      stats["avgdl"] = col.stats.avgdl;
      json df = json::object();
      for (const auto& [term, n] : std::map<std::string, std::int64_t>(col.stats.doc_freq.begin(),
                                                                       col.stats.doc_freq.end())) {
        df[term] = n;
      }
      stats["doc_freq"] = df;
      jc["stats"] = stats;
    }
    jc["entries"] = json::array();
    for (const auto& e : col.entries) {
      json je;
      if (col.encoder == EncoderKind::Bm25) {
        json sparse = json::object();
        for (const auto& [term, w] : e.sparse) sparse[term] = w;
        je["sparse"] = sparse;
      } else {
        je["dense"] = e.dense;
      }
      je["text"] = e.text;
      je["pdf_id"] = e.pdf_id;
      je["page_number"] = e.page_number;
      je["table_name"] = e.table_name;
      je["column_name"] = e.column_name;
      je["primary_key"] = e.primary_key;
      jc["entries"].push_back(std::move(je));
    }
    root["collections"].push_back(std::move(jc));
  }
  std::ofstream out(path);
  if (!out) raise(ErrorKind::StorageUnavailable, "cannot write vector index to " + path);
  out << root.dump();
}

VectorStore VectorStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::StorageUnavailable, "cannot read vector index from " + path);
  json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, path + ": " + e.what());
  }
  VectorStore store;
  for (const auto& jc : root["collections"]) {
    Collection col;
    col.name = jc.value("name", "");
    col.description = jc.value("description", "");
    col.modality = jc.value("modality", "text") == "image" ? Modality::Image : Modality::Text;
    std::string enc = jc.value("encoder", "bm25");
    col.encoder = enc == "bm25" ? EncoderKind::Bm25
                  : enc == "dense-api" ? EncoderKind::DenseApi
                                       : EncoderKind::ImageDenseApi;
    col.model_id = jc.value("model_id", "");
    col.metric = jc.value("metric", "ip") == "cosine" ? Metric::Cosine : Metric::InnerProduct;
    if (jc.contains("stats")) {
      col.stats.doc_count = jc["stats"].value("doc_count", 0);
      col.stats.avgdl = jc["stats"].value("avgdl", 1.0);
      for (auto it = jc["stats"]["doc_freq"].begin(); it != jc["stats"]["doc_freq"].end(); ++it) {
        col.stats.doc_freq[it.key()] = it.value().get<std::int64_t>();
      }
    }
    for (const auto& je : jc["entries"]) {
      VectorEntry e;
      if (je.contains("sparse")) {
        for (auto it = je["sparse"].begin(); it != je["sparse"].end(); ++it) {
          e.sparse[it.key()] = it.value().get<double>();
        }
      }
      if (je.contains("dense")) e.dense = je["dense"].get<std::vector<float>>();
      e.text = je.value("text", "");
      e.pdf_id = je.value("pdf_id", "");
      e.page_number = je.value("page_number", -1);
      e.table_name = je.value("table_name", "");
      e.column_name = je.value("column_name", "");
      e.primary_key = je.value("primary_key", "");
      col.entries.push_back(std::move(e));
    }
    store.collections_.push_back(std::move(col));
  }
  return store;
}

}  // namespace nsrag
