#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsrag {

enum class LogicalType {
  Text,
  Integer,
  Float,
  Uuid,
  TextArray,
  IntArray,
  Int4Array,
};

/// Type name as rendered in the schema prompt (VARCHAR, INT[4], ...).
const char* type_name(LogicalType type);
std::optional<LogicalType> type_from_name(const std::string& name);

struct ColumnDef {
  std::string name;
  LogicalType type;
  std::string description;
};

struct ForeignKeyDef {
  std::string column;
  std::string foreign_table;
  std::string foreign_column;
};

struct TableDef {
  std::string name;
  std::string description;
  std::vector<ColumnDef> columns;
  std::string primary_key;
  std::vector<ForeignKeyDef> foreign_keys;

  const ColumnDef* find_column(const std::string& name) const;
};

/// The universal document schema: eight tables plus the registry of
/// encodable (table, column) pairs whose cells get vectorized.
struct SchemaCatalog {
  std::string db_name;
  std::string db_description;
  std::vector<TableDef> tables;
  std::vector<std::pair<std::string, std::string>> encodable;

  const TableDef* find_table(const std::string& name) const;
  bool is_encodable(const std::string& table, const std::string& column) const;
};

/// The fixed catalog for parsed research papers.
SchemaCatalog default_catalog();

/// CREATE-statement rendering with block comments carrying table and
/// column descriptions, primary keys, and foreign keys.
std::string render_schema_prompt(const SchemaCatalog& catalog);

/// Minimal inventory recovered by parse_schema_prompt, used to check that
/// the rendered prompt is faithful to the catalog.
struct ParsedSchema {
  struct Table {
    std::string name;
    std::vector<std::pair<std::string, std::string>> columns;  // (name, type name)
    std::string primary_key;
    std::vector<ForeignKeyDef> foreign_keys;
  };
  std::vector<Table> tables;
};

/// Lightweight reader for the prompt text produced by render_schema_prompt.
ParsedSchema parse_schema_prompt(const std::string& text);

}  // namespace nsrag
