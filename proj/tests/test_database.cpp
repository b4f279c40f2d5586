#include <doctest.h>

#include "nsrag/database.hpp"
#include "nsrag/errors.hpp"
#include "support.hpp"

using namespace nsrag;
using test_support::TempDir;

namespace {

Database memory_db() { return Database::open(":memory:"); }

Database::RowMap metadata_row(const std::string& id, const std::string& title) {
  return {
      {"paper_id", Value(id)},       {"title", Value(title)},
      {"abstract", Value("An abstract.")}, {"pub_year", Value(2024)},
      {"conference_abbreviation", Value("ACL")},
  };
}

}  // namespace

TEST_CASE("schema initialization is idempotent") {
  TempDir dir;
  std::string path = dir.str("store.sqlite");
  {
    Database db = Database::open(path);
    CHECK(db.count_rows("metadata") == 0);
  }
  Database again = Database::open(path);  // second open is a no-op
  CHECK(again.count_rows("pages") == 0);
  CHECK(again.catalog().tables.size() == 8);
}

TEST_CASE("insert validates tables, columns, types, and keys") {
  Database db = memory_db();
  CHECK(db.insert_rows("metadata", {metadata_row("p1", "First")}) == 1);

  CHECK_THROWS_WITH_AS(db.insert_rows("nope", {{}}), doctest::Contains("nope"), Error);
  CHECK_THROWS_AS(db.insert_rows("metadata", {{{"paper_id", Value("x")},
                                               {"wrong_column", Value("v")}}}),
                  Error);
  CHECK_THROWS_AS(db.insert_rows("metadata", {{{"paper_id", Value("x")},
                                               {"pub_year", Value("not-a-number")}}}),
                  Error);

  // duplicate primary key
  try {
    db.insert_rows("metadata", {metadata_row("p1", "Dup")});
    FAIL("expected duplicate-primary-key");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicatePrimaryKey);
  }

  // dangling foreign key
  try {
    db.insert_rows("chunks", {{{"chunk_id", Value("c1")},
                               {"paper_id", Value("ghost")},
                               {"chunk_number", Value(1)},
                               {"text_content", Value("text")},
                               {"page_numbers", Value(Value::List{Value(1)})}}});
    FAIL("expected dangling-foreign-key");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DanglingForeignKey);
  }
}

TEST_CASE("failed batch insert leaves no partial rows") {
  Database db = memory_db();
  db.insert_rows("metadata", {metadata_row("p1", "First")});
  std::vector<Database::RowMap> batch = {metadata_row("p2", "Second"),
                                         metadata_row("p1", "Duplicate")};
  CHECK_THROWS_AS(db.insert_rows("metadata", batch), Error);
  CHECK(db.count_rows("metadata") == 1);
}

TEST_CASE("read-only SQL guard") {
  Database db = memory_db();
  test_support::populate_acl_fixture(db);

  ResultTable r = db.execute_readonly_sql(
      "select title, pub_year from metadata where conference_abbreviation = 'ACL' limit 3;");
  CHECK(r.column_names == std::vector<std::string>{"title", "pub_year"});
  CHECK(r.rows.size() == 3);
  CHECK(r.rows[0][1].as_int() == 2023);

  try {
    db.execute_readonly_sql("drop table metadata");
    FAIL("expected mutation-rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MutationRejected);
  }
  // word-boundary matching: created_at is a column name, not the verb
  CHECK_THROWS_AS(db.execute_readonly_sql("select created_at from metadata"), Error);

  try {
    db.execute_readonly_sql("selct 1");
    FAIL("expected sql-syntax-error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SqlSyntax);
    CHECK(std::string(e.what()).find("syntax") != std::string::npos);
  }

  CHECK(db.execute_readonly_sql("select count(*) from pages").rows[0][0].as_int() == 0);

  // the store is unchanged by any of the attempts above
  CHECK(db.count_rows("metadata") == 3);
}

TEST_CASE("row cap truncates and is monotone") {
  Database db = memory_db();
  std::vector<Database::RowMap> rows;
  for (int i = 0; i < 20; i++) {
    rows.push_back(metadata_row("p" + std::to_string(100 + i), "Paper " + std::to_string(i)));
  }
  db.insert_rows("metadata", rows);

  ResultTable small = db.execute_readonly_sql("select paper_id from metadata order by paper_id", 5);
  ResultTable large =
      db.execute_readonly_sql("select paper_id from metadata order by paper_id", 12);
  CHECK(small.rows.size() == 5);
  CHECK(small.truncated);
  CHECK(large.rows.size() == 12);
  for (size_t i = 0; i < small.rows.size(); i++) {
    CHECK(small.rows[i] == large.rows[i]);  // prefix property
  }
  ResultTable all = db.execute_readonly_sql("select paper_id from metadata", 50);
  CHECK(all.rows.size() == 20);
  CHECK_FALSE(all.truncated);
}

TEST_CASE("resolve_cell and enumerate_encodable_cells") {
  Database db = memory_db();
  db.insert_rows("metadata", {metadata_row("p1", "First")});
  db.insert_rows("pages", {{{"page_id", Value("pg1")},
                            {"paper_id", Value("p1")},
                            {"page_number", Value(1)},
                            {"page_content", Value("page one text")},
                            {"page_width", Value(100)},
                            {"page_height", Value(100)}},
                           {{"page_id", Value("pg2")},
                            {"paper_id", Value("p1")},
                            {"page_number", Value(2)},
                            {"page_content", Value("page two text")},
                            {"page_width", Value(100)},
                            {"page_height", Value(100)}}});
  std::vector<Database::RowMap> chunks;
  for (int i = 1; i <= 3; i++) {
    chunks.push_back({{"chunk_id", Value("c" + std::to_string(i))},
                      {"paper_id", Value("p1")},
                      {"chunk_number", Value(i)},
                      {"text_content", Value("chunk " + std::to_string(i))},
                      {"page_numbers", Value(Value::List{Value(1), Value(2)})}});
  }
  db.insert_rows("chunks", chunks);
  db.insert_rows("images", {{{"image_id", Value("img1")},
                             {"paper_id", Value("p1")},
                             {"page_number", Value(1)},
                             {"image_caption", Value("A plot")},
                             {"bounding_box",
                              Value(Value::List{Value(10), Value(20), Value(100), Value(50)})}}});

  CHECK(db.resolve_cell("chunks", "text_content", "c2").as_string() == "chunk 2");
  try {
    db.resolve_cell("chunks", "text_content", "missing");
    FAIL("expected not-found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
  }

  auto cells = db.enumerate_encodable_cells();
  int chunk_cells = 0, box_cells = 0;
  std::set<std::string> triplets;
  for (const auto& cell : cells) {
    CHECK(triplets
              .insert(cell.table_name + "/" + cell.column_name + "/" + cell.primary_key)
              .second);
    CHECK(cell.pdf_id == "p1");
    if (cell.table_name == "chunks" && cell.column_name == "text_content") {
      chunk_cells++;
      CHECK(cell.page_number == 1);  // first covered page
    }
    if (cell.column_name == "bounding_box") {
      box_cells++;
      REQUIRE(cell.payload.is_list());
      CHECK(cell.payload.as_list().size() == 4);
      CHECK(cell.payload.as_list()[0].as_int() == 10);
      CHECK(cell.page_number == 1);
    }
    // round-trip through resolve_cell
    Value resolved = db.resolve_cell(cell.table_name, cell.column_name, cell.primary_key);
    CHECK(resolved == cell.payload);
  }
  CHECK(chunk_cells == 3);
  CHECK(box_cells == 1);

  // metadata rows have no page
  for (const auto& cell : cells) {
    if (cell.table_name == "metadata") CHECK(cell.page_number == -1);
  }

  Database empty = memory_db();
  CHECK(empty.enumerate_encodable_cells().empty());
}
