#include "nsrag/database.hpp"

#include <sqlite3.h>

#include <cctype>
#include <chrono>
#include <sstream>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

class Stmt {
 public:
  Stmt(sqlite3* db, const std::string& sql) : db_(db) {
    int rc = sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr);
    if (rc != SQLITE_OK) {
      raise(ErrorKind::SqlSyntax, sqlite3_errmsg(db));
    }
  }
  ~Stmt() {
    if (stmt_) sqlite3_finalize(stmt_);
  }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  sqlite3_stmt* get() { return stmt_; }
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    if (rc == SQLITE_INTERRUPT || sqlite3_errcode(db_) == SQLITE_INTERRUPT) {
      raise(ErrorKind::SqlTimeout, "query exceeded the execution time limit");
    }
    int ext = sqlite3_extended_errcode(db_);
    if (ext == SQLITE_CONSTRAINT_PRIMARYKEY || ext == SQLITE_CONSTRAINT_UNIQUE) {
      raise(ErrorKind::DuplicatePrimaryKey, sqlite3_errmsg(db_));
    }
    if (ext == SQLITE_CONSTRAINT_FOREIGNKEY) {
      raise(ErrorKind::DanglingForeignKey, sqlite3_errmsg(db_));
    }
    raise(ErrorKind::SqlSyntax, sqlite3_errmsg(db_));
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

void exec_or_throw(sqlite3* db, const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown sqlite error";
    sqlite3_free(err);
    raise(ErrorKind::SqlSyntax, msg);
  }
}

const char* sqlite_type_name(LogicalType t) {
  switch (t) {
    case LogicalType::Integer: return "INTEGER";
    case LogicalType::Float: return "REAL";
    default: return "TEXT";
  }
}

Value column_value(sqlite3_stmt* stmt, int i) {
  switch (sqlite3_column_type(stmt, i)) {
    case SQLITE_INTEGER: return Value(static_cast<std::int64_t>(sqlite3_column_int64(stmt, i)));
    case SQLITE_FLOAT: return Value(sqlite3_column_double(stmt, i));
    case SQLITE_TEXT:
      return Value(std::string(reinterpret_cast<const char*>(sqlite3_column_text(stmt, i))));
    case SQLITE_BLOB: return Value(std::string("<blob>"));
    default: return Value::null();
  }
}

bool is_array_type(LogicalType t) {
  return t == LogicalType::TextArray || t == LogicalType::IntArray ||
         t == LogicalType::Int4Array;
}

// Cell text stored for an array column must itself parse as that array type.
void check_array_value(const std::string& table, const ColumnDef& col, const Value& v) {
  if (!v.is_list()) {
    raise(ErrorKind::TypeMismatch,
          table + "." + col.name + " expects an array value, got " + v.to_literal_text());
  }
  const auto& list = v.as_list();
  if (col.type == LogicalType::Int4Array && list.size() != 4) {
    raise(ErrorKind::TypeMismatch,
          table + "." + col.name + " expects exactly 4 integers, got " + v.to_literal_text());
  }
  for (const auto& e : list) {
    if (col.type == LogicalType::TextArray && !e.is_string()) {
      raise(ErrorKind::TypeMismatch, table + "." + col.name + " expects string elements");
    }
    if (col.type != LogicalType::TextArray && !e.is_int()) {
      raise(ErrorKind::TypeMismatch, table + "." + col.name + " expects integer elements");
    }
  }
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
};

int progress_callback(void* ctx) {
  auto* deadline = static_cast<Deadline*>(ctx);
  return std::chrono::steady_clock::now() > deadline->at ? 1 : 0;
}

}  // namespace

std::string render_array_cell(const Value& list) { return list.to_literal_text(); }

Value parse_array_cell(const std::string& text) {
  auto v = parse_python_literal(text);
  if (!v || !v->is_list()) {
    raise(ErrorKind::TypeMismatch, "stored cell is not an array: " + text);
  }
  return *v;
}

Database::Database(sqlite3* db, bool writable) : db_(db), writable_(writable) {
  catalog_ = default_catalog();
}

Database::Database(Database&& other) noexcept
    : db_(other.db_), writable_(other.writable_), catalog_(std::move(other.catalog_)) {
  other.db_ = nullptr;
}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    db_ = other.db_;
    writable_ = other.writable_;
    catalog_ = std::move(other.catalog_);
    other.db_ = nullptr;
  }
  return *this;
}

Database::~Database() {
  if (db_) sqlite3_close(db_);
}

Database Database::open(const std::string& path) {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(path.c_str(), &raw,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                           nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = raw ? sqlite3_errmsg(raw) : "cannot open database";
    if (raw) sqlite3_close(raw);
    raise(ErrorKind::StorageUnavailable, path + ": " + msg);
  }
  Database db(raw, true);
  exec_or_throw(raw, "PRAGMA foreign_keys = ON;");
  db.init_schema();
  return db;
}

Database Database::open_readonly(const std::string& path) {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(path.c_str(), &raw, SQLITE_OPEN_READONLY | SQLITE_OPEN_FULLMUTEX,
                           nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = raw ? sqlite3_errmsg(raw) : "cannot open database";
    if (raw) sqlite3_close(raw);
    raise(ErrorKind::StorageUnavailable, path + ": " + msg);
  }
  Database db(raw, false);
  db.verify_schema();
  return db;
}

void Database::init_schema() {
  // If any catalog table already exists, the whole schema must match.
  bool any_exists = false;
  {
    Stmt stmt(db_, "SELECT count(*) FROM sqlite_master WHERE type='table'");
    stmt.step();
    any_exists = sqlite3_column_int64(stmt.get(), 0) > 0;
  }
  if (any_exists) {
    verify_schema();
    return;
  }
  for (const auto& table : catalog_.tables) {
    std::ostringstream ddl;
    ddl << "CREATE TABLE IF NOT EXISTS " << table.name << " (";
    for (const auto& col : table.columns) {
      ddl << col.name << " " << sqlite_type_name(col.type) << ", ";
    }
    ddl << "PRIMARY KEY (" << table.primary_key << ")";
    for (const auto& fk : table.foreign_keys) {
      ddl << ", FOREIGN KEY (" << fk.column << ") REFERENCES " << fk.foreign_table << "("
          << fk.foreign_column << ")";
    }
    ddl << ");";
    exec_or_throw(db_, ddl.str());
  }
}

void Database::verify_schema() {
  for (const auto& table : catalog_.tables) {
    Stmt stmt(db_, "PRAGMA table_info(" + table.name + ")");
    std::vector<std::string> names;
    while (stmt.step()) {
      names.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), 1)));
    }
    if (names.size() != table.columns.size()) {
      raise(ErrorKind::SchemaMismatch,
            "table " + table.name + " has " + std::to_string(names.size()) + " columns, expected " +
                std::to_string(table.columns.size()));
    }
    for (size_t i = 0; i < names.size(); i++) {
      if (names[i] != table.columns[i].name) {
        raise(ErrorKind::SchemaMismatch,
              "table " + table.name + " column " + std::to_string(i) + " is " + names[i] +
                  ", expected " + table.columns[i].name);
      }
    }
  }
}

std::int64_t Database::insert_rows(const std::string& table, const std::vector<RowMap>& rows) {
  const TableDef* def = catalog_.find_table(table);
  if (!def) raise(ErrorKind::UnknownTable, table);
  if (rows.empty()) return 0;

  std::ostringstream sql;
  sql << "INSERT INTO " << table << " (";
  for (size_t i = 0; i < def->columns.size(); i++) {
    sql << (i ? ", " : "") << def->columns[i].name;
  }
  sql << ") VALUES (";
  for (size_t i = 0; i < def->columns.size(); i++) sql << (i ? ", ?" : "?");
  sql << ")";

  exec_or_throw(db_, "SAVEPOINT insert_rows;");
  try {
    Stmt stmt(db_, sql.str());
    for (const auto& row : rows) {
      for (const auto& [name, value] : row) {
        if (!def->find_column(name)) {
          raise(ErrorKind::UnknownColumn, table + "." + name);
        }
      }
      sqlite3_reset(stmt.get());
      sqlite3_clear_bindings(stmt.get());
      for (size_t i = 0; i < def->columns.size(); i++) {
        const auto& col = def->columns[i];
        auto it = row.find(col.name);
        int idx = static_cast<int>(i) + 1;
        if (it == row.end() || it->second.is_null()) {
          if (col.name == def->primary_key) {
            raise(ErrorKind::TypeMismatch, table + " row is missing its primary key");
          }
          for (const auto& fk : def->foreign_keys) {
            if (fk.column == col.name) {
              raise(ErrorKind::TypeMismatch,
                    table + " row is missing the required column " + col.name);
            }
          }
          sqlite3_bind_null(stmt.get(), idx);
          continue;
        }
        const Value& v = it->second;
        switch (col.type) {
          case LogicalType::Integer:
            if (!v.is_int()) {
              raise(ErrorKind::TypeMismatch,
                    table + "." + col.name + " expects an integer, got " + v.to_literal_text());
            }
            sqlite3_bind_int64(stmt.get(), idx, v.as_int());
            break;
          case LogicalType::Float:
            if (!v.is_number()) {
              raise(ErrorKind::TypeMismatch,
                    table + "." + col.name + " expects a number, got " + v.to_literal_text());
            }
            sqlite3_bind_double(stmt.get(), idx, v.as_double());
            break;
          case LogicalType::Text:
          case LogicalType::Uuid:
            if (!v.is_string()) {
              raise(ErrorKind::TypeMismatch,
                    table + "." + col.name + " expects text, got " + v.to_literal_text());
            }
            sqlite3_bind_text(stmt.get(), idx, v.as_string().c_str(), -1, SQLITE_TRANSIENT);
            break;
          default: {
            check_array_value(table, col, v);
            std::string cell = render_array_cell(v);
            sqlite3_bind_text(stmt.get(), idx, cell.c_str(), -1, SQLITE_TRANSIENT);
          }
        }
      }
      stmt.step();
    }
  } catch (...) {
    exec_or_throw(db_, "ROLLBACK TO insert_rows; RELEASE insert_rows;");
    throw;
  }
  exec_or_throw(db_, "RELEASE insert_rows;");
  return static_cast<std::int64_t>(rows.size());
}

namespace {

// The spec's mutation verbs, matched as whole words case-insensitively.
bool contains_mutation_verb(const std::string& sql, std::string* verb_out) {
  static const char* kVerbs[] = {"insert", "update", "delete", "drop", "alter", "create"};
  std::string word;
  auto flush = [&](bool at_end) {
    if (word.empty()) return false;
    for (const char* verb : kVerbs) {
      if (word == verb) {
        *verb_out = word;
        return true;
      }
    }
    word.clear();
    (void)at_end;
    return false;
  };
  for (char raw : sql) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || c == '_') {
      word += static_cast<char>(std::tolower(c));
    } else if (flush(false)) {
      return true;
    }
  }
  return flush(true);
}

}  // namespace

ResultTable Database::execute_readonly_sql(const std::string& sql, int row_cap, int timeout_ms) {
  if (sql.find_first_not_of(" \t\r\n") == std::string::npos) {
    raise(ErrorKind::SqlSyntax, "empty SQL statement");
  }
  std::string verb;
  if (contains_mutation_verb(sql, &verb)) {
    raise(ErrorKind::MutationRejected,
          "statement contains the mutation verb '" + verb + "'; only read-only SQL is allowed");
  }
  Stmt stmt(db_, sql);
  if (!sqlite3_stmt_readonly(stmt.get())) {
    raise(ErrorKind::MutationRejected, "statement is not read-only");
  }

  Deadline deadline{std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms)};
  sqlite3_progress_handler(db_, 1000, progress_callback, &deadline);

  ResultTable result;
  int cols = sqlite3_column_count(stmt.get());
  for (int i = 0; i < cols; i++) {
    const char* name = sqlite3_column_name(stmt.get(), i);
    result.column_names.push_back(name ? name : "");
  }
  try {
    while (stmt.step()) {
      if (row_cap >= 0 && static_cast<int>(result.rows.size()) >= row_cap) {
        result.truncated = true;
        break;
      }
      std::vector<Value> row;
      row.reserve(cols);
      for (int i = 0; i < cols; i++) row.push_back(column_value(stmt.get(), i));
      result.rows.push_back(std::move(row));
    }
  } catch (...) {
    sqlite3_progress_handler(db_, 0, nullptr, nullptr);
    throw;
  }
  sqlite3_progress_handler(db_, 0, nullptr, nullptr);
  return result;
}

namespace {

// How each table resolves the provenance metadata of its cells.
struct ProvenanceSpec {
  const char* pdf_column;          // null when the pk column itself is the pdf id
  const char* page_column;         // single page number column, or null
  const char* page_array_column;   // page_numbers array column, or null
};

ProvenanceSpec provenance_for(const std::string& table) {
  if (table == "metadata") return {nullptr, nullptr, nullptr};
  if (table == "pages") return {"paper_id", "page_number", nullptr};
  if (table == "sections") return {"paper_id", nullptr, "page_numbers"};
  if (table == "chunks") return {"paper_id", nullptr, "page_numbers"};
  if (table == "reference") return {"paper_id", nullptr, nullptr};
  return {"paper_id", "page_number", nullptr};  // images, tables, equations
}

}  // namespace

std::vector<EncodableCell> Database::enumerate_encodable_cells() {
  std::vector<EncodableCell> cells;
  for (const auto& [table, column] : catalog_.encodable) {
    const TableDef* def = catalog_.find_table(table);
    ProvenanceSpec prov = provenance_for(table);

    std::ostringstream sql;
    sql << "SELECT " << def->primary_key << ", " << column;
    if (prov.pdf_column) sql << ", " << prov.pdf_column;
    if (prov.page_column) sql << ", " << prov.page_column;
    if (prov.page_array_column) sql << ", " << prov.page_array_column;
    sql << " FROM " << table << " WHERE " << column << " IS NOT NULL ORDER BY rowid";

    Stmt stmt(db_, sql.str());
    while (stmt.step()) {
      EncodableCell cell;
      cell.table_name = table;
      cell.column_name = column;
      cell.primary_key = column_value(stmt.get(), 0).to_text();
      int next = 2;
      cell.pdf_id = prov.pdf_column ? column_value(stmt.get(), next++).to_text()
                                    : cell.primary_key;
      if (prov.page_column) {
        Value page = column_value(stmt.get(), next++);
        cell.page_number = page.is_null() ? -1 : static_cast<int>(page.as_int());
      } else if (prov.page_array_column) {
        Value pages = column_value(stmt.get(), next++);
        cell.page_number = -1;
        if (pages.is_string()) {
          Value list = parse_array_cell(pages.as_string());
          if (!list.as_list().empty()) {
            cell.page_number = static_cast<int>(list.as_list().front().as_int());
          }
        }
      }
      Value raw = column_value(stmt.get(), 1);
      const ColumnDef* col_def = def->find_column(column);
      cell.payload = col_def->type == LogicalType::Int4Array && raw.is_string()
                         ? parse_array_cell(raw.as_string())
                         : raw;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

Value Database::resolve_cell(const std::string& table, const std::string& column,
                             const std::string& primary_key) {
  const TableDef* def = catalog_.find_table(table);
  if (!def) raise(ErrorKind::NotFound, "unknown table " + table);
  const ColumnDef* col = def->find_column(column);
  if (!col) raise(ErrorKind::NotFound, "unknown column " + table + "." + column);

  Stmt stmt(db_, "SELECT " + column + " FROM " + table + " WHERE " + def->primary_key + " = ?");
  sqlite3_bind_text(stmt.get(), 1, primary_key.c_str(), -1, SQLITE_TRANSIENT);
  if (!stmt.step()) {
    raise(ErrorKind::NotFound, "no row in " + table + " with key " + primary_key);
  }
  Value v = column_value(stmt.get(), 0);
  if (is_array_type(col->type) && v.is_string()) return parse_array_cell(v.as_string());
  return v;
}

bool Database::has_paper(const std::string& paper_id) {
  Stmt stmt(db_, "SELECT 1 FROM metadata WHERE paper_id = ?");
  sqlite3_bind_text(stmt.get(), 1, paper_id.c_str(), -1, SQLITE_TRANSIENT);
  return stmt.step();
}

std::int64_t Database::count_rows(const std::string& table) {
  if (!catalog_.find_table(table)) raise(ErrorKind::UnknownTable, table);
  Stmt stmt(db_, "SELECT count(*) FROM " + table);
  stmt.step();
  return sqlite3_column_int64(stmt.get(), 0);
}

void Database::begin_transaction() { exec_or_throw(db_, "BEGIN;"); }
void Database::commit() { exec_or_throw(db_, "COMMIT;"); }
void Database::rollback() { exec_or_throw(db_, "ROLLBACK;"); }

}  // namespace nsrag
