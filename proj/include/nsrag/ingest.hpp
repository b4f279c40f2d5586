#pragma once

#include <string>

#include "nsrag/bundle.hpp"
#include "nsrag/chunking.hpp"
#include "nsrag/database.hpp"
#include "nsrag/summaries.hpp"

namespace nsrag {

/// Deterministic UUID-shaped id derived from a seed string; keeps repeated
/// ingests of the same bundle byte-identical.
std::string deterministic_uuid(const std::string& seed);

/// Populates all eight tables from a validated bundle and copies page
/// rasters under raster_dir/<paper_id>/page_<n>.png. Returns the paper id.
/// The whole population is transactional.
std::string populate(Database& db, const DocumentBundle& bundle, const ChunkingConfig& cfg,
                     const SummarySet& summaries, const std::string& raster_dir);

/// Raster location used by populate and the image viewer.
std::string raster_path(const std::string& raster_dir, const std::string& paper_id,
                        int page_number);

}  // namespace nsrag
