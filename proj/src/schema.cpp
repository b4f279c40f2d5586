#include "nsrag/schema.hpp"

#include <sstream>

#include "nsrag/errors.hpp"

namespace nsrag {

const char* type_name(LogicalType type) {
  switch (type) {
    case LogicalType::Text: return "VARCHAR";
    case LogicalType::Integer: return "INTEGER";
    case LogicalType::Float: return "FLOAT";
    case LogicalType::Uuid: return "UUID";
    case LogicalType::TextArray: return "VARCHAR[]";
    case LogicalType::IntArray: return "INT[]";
    case LogicalType::Int4Array: return "INT[4]";
  }
  return "VARCHAR";
}

std::optional<LogicalType> type_from_name(const std::string& name) {
  if (name == "VARCHAR") return LogicalType::Text;
  if (name == "INTEGER") return LogicalType::Integer;
  if (name == "FLOAT") return LogicalType::Float;
  if (name == "UUID") return LogicalType::Uuid;
  if (name == "VARCHAR[]") return LogicalType::TextArray;
  if (name == "INT[]") return LogicalType::IntArray;
  if (name == "INT[4]") return LogicalType::Int4Array;
  return std::nullopt;
}

const ColumnDef* TableDef::find_column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const TableDef* SchemaCatalog::find_table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

bool SchemaCatalog::is_encodable(const std::string& table, const std::string& column) const {
  for (const auto& [t, c] : encodable) {
    if (t == table && c == column) return true;
  }
  return false;
}

SchemaCatalog default_catalog() {
  SchemaCatalog cat;
  cat.db_name = "ai_research";
  cat.db_description =
      "This database contains information about AI research papers. Each PDF file is "
      "represented or parsed via different views, e.g., pages, sections, figures, tables, and "
      "references. We also extract the concrete content inside each concrete element via OCR.";

  auto fk_paper = ForeignKeyDef{"paper_id", "metadata", "paper_id"};

  cat.tables.push_back(TableDef{
      "metadata",
      "This table stores metadata about each paper.",
      {
          {"paper_id", LogicalType::Uuid, "A unique identifier for this paper."},
          {"title", LogicalType::Text, "The title of this paper."},
          {"abstract", LogicalType::Text, "The abstract of this paper."},
          {"authors", LogicalType::TextArray, "The list of author names of this paper."},
          {"pub_year", LogicalType::Integer, "The year when this paper was published."},
          {"conference_full", LogicalType::Text,
           "The full name of the conference where this paper was published."},
          {"conference_abbreviation", LogicalType::Text,
           "The abbreviation of the conference where this paper was published."},
          {"bibtex", LogicalType::Text, "The bibtex of this paper."},
          {"tldr", LogicalType::Text,
           "A brief summary of the paper's main idea or findings generated by LLM based on title "
           "and abstract."},
      },
      "paper_id",
      {}});

  cat.tables.push_back(TableDef{
      "pages",
      "This table stores each rendered page of the PDF file with its parsed text.",
      {
          {"page_id", LogicalType::Uuid, "A unique identifier for this page."},
          {"paper_id", LogicalType::Uuid, "The paper which this page belongs to."},
          {"page_number", LogicalType::Integer, "The page number, starting from 1."},
          {"page_content", LogicalType::Text, "The content of the page."},
          {"page_summary", LogicalType::Text,
           "A brief summary of the page content, generated by LLM, focusing on key information "
           "and describing the page content."},
          {"page_width", LogicalType::Integer, "The pixel width of the rendered page image."},
          {"page_height", LogicalType::Integer, "The pixel height of the rendered page image."},
      },
      "page_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "sections",
      "This table stores the sections parsed from the paper.",
      {
          {"section_id", LogicalType::Uuid, "A unique identifier for this section."},
          {"paper_id", LogicalType::Uuid, "The paper which this section belongs to."},
          {"section_number", LogicalType::Integer,
           "The ordinal position of the section in the paper, starting from 1."},
          {"section_title", LogicalType::Text, "The title of the current section."},
          {"section_content", LogicalType::Text, "The text content of the current section."},
          {"section_summary", LogicalType::Text,
           "A brief summary of the section content generated by LLM, focusing on key information "
           "and describing the section content."},
          {"page_numbers", LogicalType::IntArray, "The page numbers that this section spans."},
      },
      "section_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "chunks",
      "This table stores fixed-length text chunks split from the concatenated page texts.",
      {
          {"chunk_id", LogicalType::Uuid, "A unique identifier for this chunk."},
          {"paper_id", LogicalType::Uuid, "The paper which this chunk belongs to."},
          {"chunk_number", LogicalType::Integer,
           "The ordinal position of the chunk in the paper, starting from 1."},
          {"text_content", LogicalType::Text, "The text content of the current chunk."},
          {"page_numbers", LogicalType::IntArray, "The page numbers that this chunk covers."},
      },
      "chunk_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "images",
      "This table stores figures extracted from the paper.",
      {
          {"image_id", LogicalType::Uuid, "A unique identifier for this figure."},
          {"paper_id", LogicalType::Uuid, "The paper which this figure belongs to."},
          {"page_number", LogicalType::Integer, "The page number where this figure is located."},
          {"image_caption", LogicalType::Text,
           "The caption of this image, empty string if not found."},
          {"image_summary", LogicalType::Text,
           "A brief summary of the image, generated by LLM, focusing on key information and "
           "describing the image."},
          {"bounding_box", LogicalType::Int4Array,
           "The bounding box of the figure in the format [x_0, y_0, w, h], where (x_0, y_0) "
           "represents the coordinates of the top-left corner and (w, h) represents the width "
           "and height which are used to determine the shape of the rectangle. The cropped image "
           "is encoded."},
      },
      "image_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "tables",
      "This table stores tables extracted from the paper.",
      {
          {"table_id", LogicalType::Uuid, "A unique identifier for this table."},
          {"paper_id", LogicalType::Uuid, "The paper which this table belongs to."},
          {"page_number", LogicalType::Integer, "The page number where this table is located."},
          {"table_caption", LogicalType::Text,
           "Caption of the table, showing key information of the table."},
          {"table_content", LogicalType::Text, "The content of the table in html format."},
          {"table_summary", LogicalType::Text,
           "A brief summary of the table content generated by LLM, focusing on key information "
           "and describing the table content."},
          {"bounding_box", LogicalType::Int4Array,
           "The bounding box of the table in the format [x_0, y_0, w, h], where (x_0, y_0) "
           "represents the coordinates of the top-left corner and (w, h) represents the width "
           "and height. The cropped image is encoded."},
      },
      "table_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "equations",
      "This table stores equations extracted from the paper.",
      {
          {"equation_id", LogicalType::Uuid, "A unique identifier for this equation."},
          {"paper_id", LogicalType::Uuid, "The paper which this equation belongs to."},
          {"page_number", LogicalType::Integer,
           "The page number where this equation is located."},
          {"equation_content", LogicalType::Text, "Content of the equation in latex format."},
      },
      "equation_id",
      {fk_paper}});

  cat.tables.push_back(TableDef{
      "reference",
      "This table stores the bibliography entries of the paper.",
      {
          {"reference_id", LogicalType::Uuid, "A unique identifier for this reference."},
          {"paper_id", LogicalType::Uuid, "The paper which this reference belongs to."},
          {"reference_number", LogicalType::Integer,
           "The ordinal position of the reference in the bibliography, starting from 1."},
          {"reference_content", LogicalType::Text, "Text content of each reference."},
      },
      "reference_id",
      {fk_paper}});

  cat.encodable = {
      {"metadata", "title"},
      {"metadata", "abstract"},
      {"metadata", "bibtex"},
      {"metadata", "tldr"},
      {"pages", "page_content"},
      {"pages", "page_summary"},
      {"images", "image_caption"},
      {"images", "image_summary"},
      {"images", "bounding_box"},
      {"tables", "table_caption"},
      {"tables", "table_content"},
      {"tables", "table_summary"},
      {"tables", "bounding_box"},
      {"sections", "section_title"},
      {"sections", "section_content"},
      {"sections", "section_summary"},
      {"chunks", "text_content"},
      {"equations", "equation_content"},
      {"reference", "reference_content"},
  };
  return cat;
}

namespace {

// Block comments wrap at ~100 columns with a 4-space continuation indent.
std::string wrap_comment(const std::string& prefix, const std::string& body) {
  std::string text = prefix + body + " */";
  constexpr size_t kWidth = 100;
  std::string out;
  size_t line_start = 0;
  size_t last_space = std::string::npos;
  for (size_t i = 0; i < text.size(); i++) {
    if (text[i] == ' ') last_space = i;
    if (i - line_start >= kWidth && last_space != std::string::npos && last_space > line_start) {
      out.append(text, line_start, last_space - line_start);
      out += "\n    ";
      line_start = last_space + 1;
      last_space = std::string::npos;
    }
  }
  out.append(text, line_start, text.size() - line_start);
  return out;
}

}  // namespace

std::string render_schema_prompt(const SchemaCatalog& catalog) {
  std::ostringstream out;
  out << wrap_comment("/* database " + catalog.db_name + ": ", catalog.db_description) << "\n";
  for (const auto& table : catalog.tables) {
    out << wrap_comment("/* table " + table.name + ": ", table.description) << "\n";
    out << "CREATE TABLE IF NOT EXISTS " << table.name << " (\n";
    for (const auto& col : table.columns) {
      out << "    " << col.name << " " << type_name(col.type) << ", -- " << col.description
          << "\n";
    }
    out << "    PRIMARY KEY (" << table.primary_key << ")";
    for (const auto& fk : table.foreign_keys) {
      out << ",\n    FOREIGN KEY (" << fk.column << ") REFERENCES " << fk.foreign_table << "("
          << fk.foreign_column << ")";
    }
    out << "\n);\n";
  }
  return out.str();
}

ParsedSchema parse_schema_prompt(const std::string& text) {
  ParsedSchema parsed;
  std::istringstream in(text);
  std::string line;
  ParsedSchema::Table* current = nullptr;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    std::string t = trim(line);
    constexpr const char* kCreate = "CREATE TABLE IF NOT EXISTS ";
    if (t.rfind(kCreate, 0) == 0) {
      size_t name_end = t.find(' ', std::string(kCreate).size());
      std::string name = t.substr(std::string(kCreate).size(),
                                  name_end - std::string(kCreate).size());
      parsed.tables.push_back({name, {}, "", {}});
      current = &parsed.tables.back();
      continue;
    }
    if (!current) continue;
    if (t.rfind("PRIMARY KEY (", 0) == 0) {
      size_t close = t.find(')');
      current->primary_key = t.substr(13, close - 13);
      continue;
    }
    if (t.rfind("FOREIGN KEY (", 0) == 0) {
      size_t close = t.find(')');
      std::string col = t.substr(13, close - 13);
      size_t ref = t.find("REFERENCES ");
      std::string rest = t.substr(ref + 11);
      size_t open = rest.find('(');
      size_t close2 = rest.find(')');
      current->foreign_keys.push_back(
          {col, rest.substr(0, open), rest.substr(open + 1, close2 - open - 1)});
      continue;
    }
    if (t.rfind(");", 0) == 0 || t == ")") {
      current = nullptr;
      continue;
    }
    // Column line: "name TYPE, -- description"
    size_t comment = t.find(" -- ");
    std::string decl = comment == std::string::npos ? t : t.substr(0, comment);
    decl = trim(decl);
    if (!decl.empty() && decl.back() == ',') decl.pop_back();
    size_t sp = decl.find(' ');
    if (sp == std::string::npos) continue;
    current->columns.emplace_back(decl.substr(0, sp), decl.substr(sp + 1));
  }
  return parsed;
}

}  // namespace nsrag
