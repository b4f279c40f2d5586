#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nsrag/schema.hpp"
#include "nsrag/table.hpp"
#include "nsrag/value.hpp"

struct sqlite3;

namespace nsrag {

/// One encodable cell pulled from the store, with the provenance triplet
/// and the metadata fields carried into the vector index.
struct EncodableCell {
  std::string table_name;
  std::string column_name;
  std::string primary_key;
  std::string pdf_id;
  int page_number = -1;  // -1 when the owning table has no page
  Value payload;         // text, or a 4-int list for bounding_box columns
};

/// The relational store: owns the universal schema, row storage, and
/// read-only SQL execution on top of an embedded SQLite database.
class Database {
 public:
  using RowMap = std::map<std::string, Value>;

  /// Opens (creating if needed) a read-write store and initializes the
  /// schema. Idempotent on a store that already carries this schema;
  /// rejects files whose tables have a different shape.
  static Database open(const std::string& path);

  /// Opens an existing store for concurrent read-only SQL sessions.
  static Database open_readonly(const std::string& path);

  Database(Database&&) noexcept;
  Database& operator=(Database&&) noexcept;
  ~Database();

  const SchemaCatalog& catalog() const { return catalog_; }

  std::int64_t insert_rows(const std::string& table, const std::vector<RowMap>& rows);

  /// Executes a read-only statement. Statements containing mutation verbs
  /// are rejected up front; everything the engine itself flags as writing
  /// is rejected as well. Rows beyond row_cap are dropped with
  /// truncated=true.
  ResultTable execute_readonly_sql(const std::string& sql, int row_cap = 50,
                                   int timeout_ms = 5000);

  /// One record per non-null cell of every encodable column.
  std::vector<EncodableCell> enumerate_encodable_cells();

  /// The inverse of the vector-store provenance mapping.
  Value resolve_cell(const std::string& table, const std::string& column,
                     const std::string& primary_key);

  bool has_paper(const std::string& paper_id);
  std::int64_t count_rows(const std::string& table);

  void begin_transaction();
  void commit();
  void rollback();

 private:
  explicit Database(sqlite3* db, bool writable);
  void init_schema();
  void verify_schema();

  sqlite3* db_ = nullptr;
  bool writable_ = false;
  SchemaCatalog catalog_;
};

/// Serialize an array value the way array-typed columns are stored:
/// bracketed, comma-separated, strings double-quoted.
std::string render_array_cell(const Value& list);
/// Parse the stored array text back into a list value.
Value parse_array_cell(const std::string& text);

}  // namespace nsrag
