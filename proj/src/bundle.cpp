#include "nsrag/bundle.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  raise(ErrorKind::ParseError, path + ": " + why);
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad_field(path + "." + key, "missing required field");
  }
  if (!j[key].is_string()) bad_field(path + "." + key, "expected a string");
  return j[key].get<std::string>();
}

std::int64_t get_int(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) bad_field(path + "." + key, "missing required field");
  if (!j[key].is_number_integer()) bad_field(path + "." + key, "expected an integer");
  return j[key].get<std::int64_t>();
}

std::array<int, 4> get_box(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) bad_field(path + "." + key, "missing required field");
  const json& b = j[key];
  if (!b.is_array() || b.size() != 4) bad_field(path + "." + key, "expected [x0, y0, w, h]");
  std::array<int, 4> box{};
  for (size_t i = 0; i < 4; i++) {
    if (!b[i].is_number()) bad_field(path + "." + key, "expected numeric box coordinates");
    box[i] = b[i].get<int>();
  }
  return box;
}

void check_page_ref(const DocumentBundle& bundle, int page, const std::string& path) {
  if (page < 1 || page > static_cast<int>(bundle.pages.size())) {
    raise(ErrorKind::InvariantViolation,
          path + ": page_number " + std::to_string(page) + " does not exist (paper has " +
              std::to_string(bundle.pages.size()) + " pages)");
  }
}

void check_box(const DocumentBundle& bundle, const std::array<int, 4>& box, int page,
               const std::string& path) {
  const auto& p = bundle.pages[static_cast<size_t>(page) - 1];
  auto [x0, y0, w, h] = box;
  if (x0 < 0 || y0 < 0 || w <= 0 || h <= 0 || x0 + w > p.width || y0 + h > p.height) {
    raise(ErrorKind::InvariantViolation,
          path + ": bounding_box [" + std::to_string(x0) + ", " + std::to_string(y0) + ", " +
              std::to_string(w) + ", " + std::to_string(h) + "] exceeds the " +
              std::to_string(p.width) + "x" + std::to_string(p.height) + " page raster");
  }
}

}  // namespace

void validate_bundle(const DocumentBundle& bundle) {
  if (bundle.paper_id.empty()) {
    raise(ErrorKind::InvariantViolation, "paper_id: must be non-empty");
  }
  for (size_t i = 0; i < bundle.pages.size(); i++) {
    const auto& page = bundle.pages[i];
    std::string path = "pages[" + std::to_string(i) + "]";
    if (page.page_number != static_cast<int>(i) + 1) {
      raise(ErrorKind::InvariantViolation,
            path + ".page_number: expected " + std::to_string(i + 1) + ", got " +
                std::to_string(page.page_number) + " (pages must start at 1 and be contiguous)");
    }
    if (page.width <= 0 || page.height <= 0) {
      raise(ErrorKind::InvariantViolation, path + ": page pixel size must be positive");
    }
  }
  for (size_t i = 0; i < bundle.sections.size(); i++) {
    for (int page : bundle.sections[i].page_numbers) {
      check_page_ref(bundle, page, "sections[" + std::to_string(i) + "]");
    }
  }
  for (size_t i = 0; i < bundle.figures.size(); i++) {
    std::string path = "figures[" + std::to_string(i) + "]";
    check_page_ref(bundle, bundle.figures[i].page_number, path);
    check_box(bundle, bundle.figures[i].bounding_box, bundle.figures[i].page_number, path);
  }
  for (size_t i = 0; i < bundle.tables.size(); i++) {
    std::string path = "tables[" + std::to_string(i) + "]";
    check_page_ref(bundle, bundle.tables[i].page_number, path);
    check_box(bundle, bundle.tables[i].bounding_box, bundle.tables[i].page_number, path);
  }
  for (size_t i = 0; i < bundle.equations.size(); i++) {
    check_page_ref(bundle, bundle.equations[i].page_number, "equations[" + std::to_string(i) + "]");
  }
}

DocumentBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot read bundle file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, path + ": " + e.what());
  }
  if (!j.is_object()) raise(ErrorKind::ParseError, path + ": bundle must be a JSON object");

  DocumentBundle bundle;
  bundle.paper_id = get_string(j, "", "paper_id");

  if (!j.contains("metadata") || !j["metadata"].is_object()) {
    bad_field("metadata", "missing required object");
  }
  const json& meta = j["metadata"];
  bundle.metadata.title = get_string(meta, "metadata", "title");
  bundle.metadata.abstract = get_string(meta, "metadata", "abstract", "");
  bundle.metadata.conference_full = get_string(meta, "metadata", "conference_full", "");
  bundle.metadata.conference_abbreviation =
      get_string(meta, "metadata", "conference_abbreviation", "");
  bundle.metadata.bibtex = get_string(meta, "metadata", "bibtex", "");
  if (meta.contains("pub_year") && !meta["pub_year"].is_null()) {
    if (!meta["pub_year"].is_number_integer()) bad_field("metadata.pub_year", "expected an integer");
    bundle.metadata.pub_year = meta["pub_year"].get<std::int64_t>();
  }
  if (meta.contains("authors")) {
    if (!meta["authors"].is_array()) bad_field("metadata.authors", "expected an array of strings");
    for (const auto& a : meta["authors"]) {
      if (!a.is_string()) bad_field("metadata.authors", "expected an array of strings");
      bundle.metadata.authors.push_back(a.get<std::string>());
    }
  }

  auto base_dir = std::filesystem::path(path).parent_path();
  for (size_t i = 0; j.contains("pages") && i < j["pages"].size(); i++) {
    const json& p = j["pages"][i];
    std::string ppath = "pages[" + std::to_string(i) + "]";
    DocumentBundle::Page page;
    page.page_number = static_cast<int>(get_int(p, ppath, "page_number"));
    page.text = get_string(p, ppath, "text", "");
    page.width = static_cast<int>(get_int(p, ppath, "width"));
    page.height = static_cast<int>(get_int(p, ppath, "height"));
    if (p.contains("raster") && !p["raster"].is_null()) {
      if (!p["raster"].is_string()) bad_field(ppath + ".raster", "expected a relative file path");
      auto raster = base_dir / p["raster"].get<std::string>();
      if (!std::filesystem::exists(raster)) {
        bad_field(ppath + ".raster", "file not found: " + raster.string());
      }
      page.raster_path = raster.string();
    }
    bundle.pages.push_back(std::move(page));
  }

  for (size_t i = 0; j.contains("sections") && i < j["sections"].size(); i++) {
    const json& s = j["sections"][i];
    std::string spath = "sections[" + std::to_string(i) + "]";
    DocumentBundle::Section section;
    section.title = get_string(s, spath, "title");
    section.content = get_string(s, spath, "content", "");
    if (s.contains("page_numbers")) {
      for (const auto& n : s["page_numbers"]) {
        if (!n.is_number_integer()) bad_field(spath + ".page_numbers", "expected integers");
        section.page_numbers.push_back(n.get<int>());
      }
    }
    bundle.sections.push_back(std::move(section));
  }

  for (size_t i = 0; j.contains("figures") && i < j["figures"].size(); i++) {
    const json& f = j["figures"][i];
    std::string fpath = "figures[" + std::to_string(i) + "]";
    bundle.figures.push_back({get_string(f, fpath, "caption", ""), get_box(f, fpath, "bounding_box"),
                              static_cast<int>(get_int(f, fpath, "page_number"))});
  }

  for (size_t i = 0; j.contains("tables") && i < j["tables"].size(); i++) {
    const json& t = j["tables"][i];
    std::string tpath = "tables[" + std::to_string(i) + "]";
    bundle.tables.push_back({get_string(t, tpath, "caption", ""),
                             get_string(t, tpath, "content_html", ""),
                             get_box(t, tpath, "bounding_box"),
                             static_cast<int>(get_int(t, tpath, "page_number"))});
  }

  for (size_t i = 0; j.contains("equations") && i < j["equations"].size(); i++) {
    const json& e = j["equations"][i];
    std::string epath = "equations[" + std::to_string(i) + "]";
    bundle.equations.push_back(
        {get_string(e, epath, "latex"), static_cast<int>(get_int(e, epath, "page_number"))});
  }

  if (j.contains("references")) {
    for (const auto& r : j["references"]) {
      if (!r.is_string()) bad_field("references", "expected an array of strings");
      bundle.references.push_back(r.get<std::string>());
    }
  }

  validate_bundle(bundle);
  return bundle;
}

}  // namespace nsrag
