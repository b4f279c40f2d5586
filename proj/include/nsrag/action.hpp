#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nsrag/value.hpp"

namespace nsrag {

enum class ActionType {
  RetrieveFromVectorstore,
  RetrieveFromDatabase,
  ViewImage,
  CalculateExpr,
  GenerateAnswer,
};

const char* to_string(ActionType type);

struct RetrieveFromVectorstore {
  std::string query;
  std::string collection_name;
  std::string table_name;
  std::string column_name;
  std::string filter;
  std::int64_t limit = 5;
  bool operator==(const RetrieveFromVectorstore&) const = default;
};

struct RetrieveFromDatabase {
  std::string sql;
  bool operator==(const RetrieveFromDatabase&) const = default;
};

struct ViewImage {
  std::string paper_id;
  std::int64_t page_number = 1;
  std::vector<double> bounding_box;  // empty, or [x0, y0, w, h]
  bool operator==(const ViewImage&) const = default;
};

struct CalculateExpr {
  std::string expr;
  bool operator==(const CalculateExpr&) const = default;
};

struct GenerateAnswer {
  Value answer;
  bool operator==(const GenerateAnswer&) const = default;
};

/// Tagged union of the five agent actions.
struct Action {
  std::variant<RetrieveFromVectorstore, RetrieveFromDatabase, ViewImage, CalculateExpr,
               GenerateAnswer>
      v;

  ActionType type() const { return static_cast<ActionType>(v.index()); }
  const char* name() const { return to_string(type()); }
  bool operator==(const Action&) const = default;

  template <typename T>
  const T& as() const {
    return std::get<T>(v);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
};

inline const char* to_string(ActionType type) {
  switch (type) {
    case ActionType::RetrieveFromVectorstore: return "RetrieveFromVectorstore";
    case ActionType::RetrieveFromDatabase: return "RetrieveFromDatabase";
    case ActionType::ViewImage: return "ViewImage";
    case ActionType::CalculateExpr: return "CalculateExpr";
    case ActionType::GenerateAnswer: return "GenerateAnswer";
  }
  return "";
}

}  // namespace nsrag
