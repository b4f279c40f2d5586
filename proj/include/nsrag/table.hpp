#pragma once

#include <string>
#include <vector>

#include "nsrag/value.hpp"

namespace nsrag {

/// Tabular carrier for SQL results and vector-search hits.
struct ResultTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<Value>> rows;
  bool truncated = false;
};

}  // namespace nsrag
