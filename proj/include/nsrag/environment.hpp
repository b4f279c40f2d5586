#pragma once

#include <string>

#include "nsrag/action.hpp"
#include "nsrag/database.hpp"
#include "nsrag/observation.hpp"
#include "nsrag/vectorstore.hpp"

namespace nsrag {

struct EnvironmentConfig {
  ObservationFormat observation_format = ObservationFormat::Json;
  int per_turn_token_budget = kDefaultTurnTokenBudget;
  int sql_row_cap = 50;
  int sql_timeout_ms = 5000;
  bool vision_capable = false;
  std::string raster_dir;
};

/// Executes validated actions against the stores and renders observations.
/// step() never throws: every failure becomes an error observation. One
/// instance per episode; instances share the read-only stores.
class Environment {
 public:
  Environment(Database& db, const VectorStore* store, EnvironmentConfig cfg)
      : db_(db), store_(store), cfg_(std::move(cfg)) {}

  Observation step(const Action& action);

  /// Page crop as a base64 PNG; the empty box means the whole page.
  Observation view_image(const std::string& paper_id, int page_number,
                         const std::vector<double>& bounding_box);

  const EnvironmentConfig& config() const { return cfg_; }
  const SchemaCatalog& db_catalog() const { return db_.catalog(); }
  const VectorStore* store() const { return store_; }
  Database& db() { return db_; }

 private:
  Observation table_observation(ResultTable table);
  Observation error_observation(const std::string& message);

  Database& db_;
  const VectorStore* store_;
  EnvironmentConfig cfg_;
};

}  // namespace nsrag
