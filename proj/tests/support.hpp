#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "nsrag/bundle.hpp"
#include "nsrag/database.hpp"
#include "nsrag/gateway.hpp"
#include "nsrag/imaging.hpp"

namespace test_support {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    for (int i = 0; i < 100; i++) {
      auto candidate = base / ("nsrag_test_" + std::to_string(rng()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = "") const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

/// Deterministic RGBA test raster.
inline nsrag::Image make_test_image(int width, int height, unsigned seed) {
  nsrag::Image image;
  image.width = width;
  image.height = height;
  image.pixels.resize(static_cast<size_t>(width) * height * 4);
  std::mt19937 rng(seed);
  for (auto& byte : image.pixels) byte = static_cast<std::uint8_t>(rng() & 0xFF);
  // Keep alpha opaque so PNG round-trips stay byte-comparable.
  for (size_t i = 3; i < image.pixels.size(); i += 4) image.pixels[i] = 0xFF;
  return image;
}

/// The three-paper ACL fixture behind the observation-format examples.
inline void populate_acl_fixture(nsrag::Database& db) {
  using nsrag::Value;
  std::vector<nsrag::Database::RowMap> rows;
  const char* titles[] = {
      "ContraCLM: Contrastive Learning For Causal Language Model",
      "Mitigating Label Biases for In-context Learning",
      "mCLIP: Multilingual CLIP via Cross-lingual Transfer",
  };
  for (int i = 0; i < 3; i++) {
    rows.push_back({
        {"paper_id", Value("acl-paper-" + std::to_string(i + 1))},
        {"title", Value(titles[i])},
        {"abstract", Value(std::string("Abstract of ") + titles[i])},
        {"authors", Value(Value::List{Value("Author A"), Value("Author B")})},
        {"pub_year", Value(2023)},
        {"conference_full", Value("Annual Meeting of the Association for Computational "
                                  "Linguistics")},
        {"conference_abbreviation", Value("ACL")},
        {"bibtex", Value("@inproceedings{fixture" + std::to_string(i + 1) + "}")},
        {"tldr", Value("")},
    });
  }
  db.insert_rows("metadata", rows);
}

/// A small, fully populated bundle. Pages get rasters when raster_dir is
/// non-empty (written as PNG files inside it).
inline nsrag::DocumentBundle make_bundle(const std::string& paper_id, int pages, int sections,
                                         int figures, int tables,
                                         const std::string& raster_dir = "") {
  nsrag::DocumentBundle bundle;
  bundle.paper_id = paper_id;
  bundle.metadata.title = "Fixture Paper " + paper_id;
  bundle.metadata.abstract = "This fixture paper studies agentic retrieval over parsed PDFs.";
  bundle.metadata.authors = {"Ada Example", "Grace Fixture"};
  bundle.metadata.pub_year = 2024;
  bundle.metadata.conference_full = "Fixture Conference on Retrieval";
  bundle.metadata.conference_abbreviation = "FCR";
  bundle.metadata.bibtex = "@inproceedings{" + paper_id + "}";

  for (int p = 1; p <= pages; p++) {
    nsrag::DocumentBundle::Page page;
    page.page_number = p;
    page.width = 200;
    page.height = 160;
    page.text = "Page " + std::to_string(p) + " of paper " + paper_id +
                " discusses retrieval quality. It also reports token counts and chunk "
                "boundaries for evaluation purposes.";
    if (!raster_dir.empty()) {
      auto raster = make_test_image(page.width, page.height,
                                    static_cast<unsigned>(std::hash<std::string>{}(paper_id)) +
                                        static_cast<unsigned>(p));
      std::string name = paper_id + "_page" + std::to_string(p) + ".png";
      nsrag::write_png_file(raster_dir + "/" + name, raster);
      page.raster_path = raster_dir + "/" + name;
    }
    bundle.pages.push_back(std::move(page));
  }
  for (int s = 1; s <= sections; s++) {
    bundle.sections.push_back({"Section " + std::to_string(s),
                               "Content of section " + std::to_string(s) + " in " + paper_id,
                               {std::min(s, pages)}});
  }
  for (int f = 1; f <= figures; f++) {
    bundle.figures.push_back(
        {"Figure " + std::to_string(f) + " caption", {10, 20, 100, 50}, std::min(f, pages)});
  }
  for (int t = 1; t <= tables; t++) {
    bundle.tables.push_back({"Table " + std::to_string(t) + " caption",
                             "<table><tr><td>" + std::to_string(t) + "</td></tr></table>",
                             {5, 5, 60, 40},
                             std::min(t, pages)});
  }
  bundle.equations.push_back({"E = mc^2", 1});
  bundle.references.push_back("Reference entry one of " + paper_id);
  bundle.references.push_back("Reference entry two of " + paper_id);
  return bundle;
}

/// Serialize a bundle the way the `ingest` subcommand consumes it.
inline std::string write_bundle_json(const nsrag::DocumentBundle& bundle,
                                     const std::string& dir) {
  nlohmann::ordered_json j;
  j["paper_id"] = bundle.paper_id;
  j["metadata"] = {
      {"title", bundle.metadata.title},
      {"abstract", bundle.metadata.abstract},
      {"authors", bundle.metadata.authors},
      {"conference_full", bundle.metadata.conference_full},
      {"conference_abbreviation", bundle.metadata.conference_abbreviation},
      {"bibtex", bundle.metadata.bibtex},
  };
  if (bundle.metadata.pub_year) j["metadata"]["pub_year"] = *bundle.metadata.pub_year;
  j["pages"] = nlohmann::ordered_json::array();
  for (const auto& page : bundle.pages) {
    nlohmann::ordered_json jp = {{"page_number", page.page_number},
                                 {"text", page.text},
                                 {"width", page.width},
                                 {"height", page.height}};
    if (!page.raster_path.empty()) {
      jp["raster"] = std::filesystem::path(page.raster_path).filename().string();
    }
    j["pages"].push_back(jp);
  }
  j["sections"] = nlohmann::ordered_json::array();
  for (const auto& s : bundle.sections) {
    j["sections"].push_back(
        {{"title", s.title}, {"content", s.content}, {"page_numbers", s.page_numbers}});
  }
  j["figures"] = nlohmann::ordered_json::array();
  for (const auto& f : bundle.figures) {
    j["figures"].push_back({{"caption", f.caption},
                            {"bounding_box", f.bounding_box},
                            {"page_number", f.page_number}});
  }
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : bundle.tables) {
    j["tables"].push_back({{"caption", t.caption},
                           {"content_html", t.content_html},
                           {"bounding_box", t.bounding_box},
                           {"page_number", t.page_number}});
  }
  j["equations"] = nlohmann::ordered_json::array();
  for (const auto& e : bundle.equations) {
    j["equations"].push_back({{"latex", e.latex}, {"page_number", e.page_number}});
  }
  j["references"] = bundle.references;

  std::string path = dir + "/" + bundle.paper_id + ".json";
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

inline nsrag::Gateway scripted_gateway(std::vector<nsrag::ReplayEntry> entries,
                                       bool vision = false) {
  nsrag::GatewayConfig cfg;
  cfg.retry_backoff_ms = 0;
  cfg.vision_capable = vision;
  return nsrag::Gateway(nsrag::make_scripted_backend(std::move(entries)), cfg);
}

}  // namespace test_support
