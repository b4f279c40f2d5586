#pragma once

#include <string>
#include <vector>

#include "nsrag/database.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/vectorstore.hpp"

namespace nsrag {

struct EncodeConfig {
  /// Collection names to build; empty means all four defaults.
  std::vector<std::string> collections;
  /// Where populate() stored page rasters (for cropping image cells).
  std::string raster_dir;
  /// When true, dense vectors come from the deterministic stand-in
  /// projection instead of the gateway's embedding endpoint.
  bool standin_embeddings = true;
};

/// Stage-two pipeline: enumerate encodable cells, build BM25 statistics,
/// embed text and cropped-image payloads, and insert one vector entry per
/// cell into each requested collection.
VectorStore build_vector_store(Database& db, Gateway& gateway, const EncodeConfig& cfg);

/// Wire the store's query-time text embedder to the gateway or stand-in.
void attach_text_embedder(VectorStore& store, Gateway& gateway, bool standin);

}  // namespace nsrag
