#include <doctest.h>

#include <set>

#include "nsrag/schema.hpp"

using namespace nsrag;

TEST_CASE("catalog carries the eight tables") {
  SchemaCatalog cat = default_catalog();
  std::set<std::string> names;
  for (const auto& t : cat.tables) names.insert(t.name);
  CHECK(names == std::set<std::string>{"metadata", "pages", "sections", "chunks", "images",
                                       "tables", "equations", "reference"});
  for (const auto& t : cat.tables) {
    const ColumnDef* pk = t.find_column(t.primary_key);
    REQUIRE(pk != nullptr);
    CHECK(pk->type == LogicalType::Uuid);
  }
}

TEST_CASE("encodable registry matches the checklist") {
  SchemaCatalog cat = default_catalog();
  CHECK(cat.encodable.size() == 19);
  CHECK(cat.is_encodable("chunks", "text_content"));
  CHECK(cat.is_encodable("metadata", "abstract"));
  CHECK(cat.is_encodable("images", "bounding_box"));
  CHECK(cat.is_encodable("tables", "bounding_box"));
  CHECK_FALSE(cat.is_encodable("metadata", "pub_year"));
  CHECK_FALSE(cat.is_encodable("pages", "page_number"));
  for (const auto& [table, column] : cat.encodable) {
    const TableDef* t = cat.find_table(table);
    REQUIRE(t != nullptr);
    CHECK(t->find_column(column) != nullptr);
  }
}

TEST_CASE("array columns use the array logical types") {
  SchemaCatalog cat = default_catalog();
  CHECK(cat.find_table("images")->find_column("bounding_box")->type == LogicalType::Int4Array);
  CHECK(cat.find_table("tables")->find_column("bounding_box")->type == LogicalType::Int4Array);
  CHECK(cat.find_table("metadata")->find_column("authors")->type == LogicalType::TextArray);
  CHECK(cat.find_table("chunks")->find_column("page_numbers")->type == LogicalType::IntArray);
}

TEST_CASE("schema prompt carries CREATE statements and descriptions") {
  SchemaCatalog cat = default_catalog();
  std::string prompt = render_schema_prompt(cat);
  CHECK(prompt.find("CREATE TABLE IF NOT EXISTS metadata") != std::string::npos);
  CHECK(prompt.find("The title of this paper.") != std::string::npos);
  CHECK(prompt.find("/* database ai_research:") != std::string::npos);
  CHECK(prompt.find("INT[4]") != std::string::npos);

  for (const auto& t : cat.tables) {
    std::string stmt = "CREATE TABLE IF NOT EXISTS " + t.name + " (";
    size_t first = prompt.find(stmt);
    REQUIRE(first != std::string::npos);
    CHECK(prompt.find(stmt, first + 1) == std::string::npos);
  }
}

TEST_CASE("schema prompt parses back to the same inventory") {
  SchemaCatalog cat = default_catalog();
  ParsedSchema parsed = parse_schema_prompt(render_schema_prompt(cat));
  REQUIRE(parsed.tables.size() == cat.tables.size());
  for (size_t i = 0; i < cat.tables.size(); i++) {
    const auto& expected = cat.tables[i];
    const auto& got = parsed.tables[i];
    CHECK(got.name == expected.name);
    CHECK(got.primary_key == expected.primary_key);
    REQUIRE(got.columns.size() == expected.columns.size());
    for (size_t c = 0; c < expected.columns.size(); c++) {
      CHECK(got.columns[c].first == expected.columns[c].name);
      CHECK(got.columns[c].second == type_name(expected.columns[c].type));
    }
    REQUIRE(got.foreign_keys.size() == expected.foreign_keys.size());
    for (size_t f = 0; f < expected.foreign_keys.size(); f++) {
      CHECK(got.foreign_keys[f].column == expected.foreign_keys[f].column);
      CHECK(got.foreign_keys[f].foreign_table == expected.foreign_keys[f].foreign_table);
    }
  }
}
