#include "nsrag/ingest.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

std::uint64_t fnv1a_seeded(const std::string& data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Value int_list(const std::vector<int>& xs) {
  Value::List list;
  for (int x : xs) list.emplace_back(static_cast<std::int64_t>(x));
  return Value(std::move(list));
}

Value text_list(const std::vector<std::string>& xs) {
  Value::List list;
  for (const auto& x : xs) list.emplace_back(x);
  return Value(std::move(list));
}

Value box_value(const std::array<int, 4>& box) {
  Value::List list;
  for (int x : box) list.emplace_back(static_cast<std::int64_t>(x));
  return Value(std::move(list));
}

std::string at(const std::vector<std::string>& xs, size_t i) {
  return i < xs.size() ? xs[i] : std::string();
}

}  // namespace

std::string deterministic_uuid(const std::string& seed) {
  std::uint64_t a = fnv1a_seeded(seed, 0xcbf29ce484222325ULL);
  std::uint64_t b = fnv1a_seeded(seed, 0x9e3779b97f4a7c15ULL);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%08x-%04x-%04x-%04x-%04x%08x",
                static_cast<unsigned>(a >> 32), static_cast<unsigned>((a >> 16) & 0xFFFF),
                static_cast<unsigned>(a & 0xFFFF), static_cast<unsigned>(b >> 48),
                static_cast<unsigned>((b >> 32) & 0xFFFF), static_cast<unsigned>(b & 0xFFFFFFFF));
  return buf;
}

std::string raster_path(const std::string& raster_dir, const std::string& paper_id,
                        int page_number) {
  return raster_dir + "/" + paper_id + "/page_" + std::to_string(page_number) + ".png";
}

std::string populate(Database& db, const DocumentBundle& bundle, const ChunkingConfig& cfg,
                     const SummarySet& summaries, const std::string& raster_dir) {
  if (db.has_paper(bundle.paper_id)) {
    raise(ErrorKind::DuplicatePaper, "paper " + bundle.paper_id + " is already ingested");
  }
  const std::string& pid = bundle.paper_id;
  auto row_id = [&pid](const std::string& table, size_t ordinal) {
    return deterministic_uuid(pid + "/" + table + "/" + std::to_string(ordinal));
  };

  db.begin_transaction();
  try {
    db.insert_rows("metadata",
                   {{
                       {"paper_id", Value(pid)},
                       {"title", Value(bundle.metadata.title)},
                       {"abstract", Value(bundle.metadata.abstract)},
                       {"authors", text_list(bundle.metadata.authors)},
                       {"pub_year", bundle.metadata.pub_year
                                        ? Value(*bundle.metadata.pub_year)
                                        : Value::null()},
                       {"conference_full", Value(bundle.metadata.conference_full)},
                       {"conference_abbreviation",
                        Value(bundle.metadata.conference_abbreviation)},
                       {"bibtex", Value(bundle.metadata.bibtex)},
                       {"tldr", Value(summaries.tldr)},
                   }});

    std::vector<Database::RowMap> rows;
    for (size_t i = 0; i < bundle.pages.size(); i++) {
      const auto& page = bundle.pages[i];
      rows.push_back({
          {"page_id", Value(row_id("pages", i))},
          {"paper_id", Value(pid)},
          {"page_number", Value(static_cast<std::int64_t>(page.page_number))},
          {"page_content", Value(page.text)},
          {"page_summary", Value(at(summaries.pages, i))},
          {"page_width", Value(static_cast<std::int64_t>(page.width))},
          {"page_height", Value(static_cast<std::int64_t>(page.height))},
      });
    }
    db.insert_rows("pages", rows);

    rows.clear();
    for (size_t i = 0; i < bundle.sections.size(); i++) {
      const auto& section = bundle.sections[i];
      rows.push_back({
          {"section_id", Value(row_id("sections", i))},
          {"paper_id", Value(pid)},
          {"section_number", Value(static_cast<std::int64_t>(i + 1))},
          {"section_title", Value(section.title)},
          {"section_content", Value(section.content)},
          {"section_summary", Value(at(summaries.sections, i))},
          {"page_numbers", int_list(section.page_numbers)},
      });
    }
    db.insert_rows("sections", rows);

    std::vector<std::string> page_texts;
    for (const auto& page : bundle.pages) page_texts.push_back(page.text);
    auto chunks = split_chunks(page_texts, cfg);
    rows.clear();
    for (size_t i = 0; i < chunks.size(); i++) {
      rows.push_back({
          {"chunk_id", Value(row_id("chunks", i))},
          {"paper_id", Value(pid)},
          {"chunk_number", Value(static_cast<std::int64_t>(i + 1))},
          {"text_content", Value(chunks[i].text)},
          {"page_numbers", int_list(chunks[i].page_numbers)},
      });
    }
    db.insert_rows("chunks", rows);

    rows.clear();
    for (size_t i = 0; i < bundle.figures.size(); i++) {
      const auto& figure = bundle.figures[i];
      rows.push_back({
          {"image_id", Value(row_id("images", i))},
          {"paper_id", Value(pid)},
          {"page_number", Value(static_cast<std::int64_t>(figure.page_number))},
          {"image_caption", Value(figure.caption)},
          {"image_summary", Value(at(summaries.images, i))},
          {"bounding_box", box_value(figure.bounding_box)},
      });
    }
    db.insert_rows("images", rows);

    rows.clear();
    for (size_t i = 0; i < bundle.tables.size(); i++) {
      const auto& table = bundle.tables[i];
      rows.push_back({
          {"table_id", Value(row_id("tables", i))},
          {"paper_id", Value(pid)},
          {"page_number", Value(static_cast<std::int64_t>(table.page_number))},
          {"table_caption", Value(table.caption)},
          {"table_content", Value(table.content_html)},
          {"table_summary", Value(at(summaries.tables, i))},
          {"bounding_box", box_value(table.bounding_box)},
      });
    }
    db.insert_rows("tables", rows);

    rows.clear();
    for (size_t i = 0; i < bundle.equations.size(); i++) {
      const auto& equation = bundle.equations[i];
      rows.push_back({
          {"equation_id", Value(row_id("equations", i))},
          {"paper_id", Value(pid)},
          {"page_number", Value(static_cast<std::int64_t>(equation.page_number))},
          {"equation_content", Value(equation.latex)},
      });
    }
    db.insert_rows("equations", rows);

    rows.clear();
    for (size_t i = 0; i < bundle.references.size(); i++) {
      rows.push_back({
          {"reference_id", Value(row_id("reference", i))},
          {"paper_id", Value(pid)},
          {"reference_number", Value(static_cast<std::int64_t>(i + 1))},
          {"reference_content", Value(bundle.references[i])},
      });
    }
    db.insert_rows("reference", rows);
  } catch (...) {
    db.rollback();
    throw;
  }
  db.commit();

  for (const auto& page : bundle.pages) {
    if (page.raster_path.empty()) continue;
    auto dest = std::filesystem::path(raster_path(raster_dir, pid, page.page_number));
    std::filesystem::create_directories(dest.parent_path());
    std::filesystem::copy_file(page.raster_path, dest,
                               std::filesystem::copy_options::overwrite_existing);
  }
  return pid;
}

}  // namespace nsrag
