#pragma once

#include <optional>
#include <string>

#include "nsrag/table.hpp"
#include "nsrag/value.hpp"

namespace nsrag {

enum class ObservationFormat { Markdown, Json, String, Html };

const char* to_string(ObservationFormat fmt);
std::optional<ObservationFormat> observation_format_from_string(const std::string& name);

inline constexpr int kDefaultTurnTokenBudget = 5000;
inline constexpr int kImageObservationTokens = 1000;

/// What one executed action returned: a table, an image, a scalar, an
/// error message, or the terminal marker for GenerateAnswer. `rendered`
/// is the budget-truncated text handed back to the agent.
struct Observation {
  enum class Kind { Table, Image, Scalar, Error, Terminal };
  Kind kind = Kind::Error;
  ResultTable table;
  std::string image_png_base64;
  std::string scalar;
  std::string error;
  std::optional<Value> answer;  // terminal only
  std::string rendered;
  std::int64_t token_count = 0;
};

/// Bit-exact tabular rendering: markdown (+---+ grid, centered cells),
/// json (one object per row), string (right-aligned columns), html
/// (dataframe-style table); each followed by the footer line
/// "In total, {n} rows are displayed in {FORMAT} format.".
std::string format_observation(const ResultTable& table, ObservationFormat fmt);

/// Identity under the budget; otherwise cut at the last line boundary that
/// fits and append a truncation marker line. The budget counts the kept
/// content, not the marker.
std::string truncate_tokens(const std::string& text, int budget = kDefaultTurnTokenBudget);

}  // namespace nsrag
