#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsrag {

/// Pre-parsed PDF content, ready for population. Produced upstream by the
/// OCR/layout toolchain; consumed here as one JSON document per paper with
/// page rasters referenced as sibling PNG files.
struct DocumentBundle {
  struct Metadata {
    std::string title;
    std::string abstract;
    std::vector<std::string> authors;
    std::optional<std::int64_t> pub_year;
    std::string conference_full;
    std::string conference_abbreviation;
    std::string bibtex;
  };
  struct Page {
    int page_number = 0;
    std::string text;
    int width = 0;
    int height = 0;
    std::string raster_path;  // absolute after loading; empty when absent
  };
  struct Section {
    std::string title;
    std::string content;
    std::vector<int> page_numbers;
  };
  struct Figure {
    std::string caption;
    std::array<int, 4> bounding_box{};  // [x0, y0, w, h] in page pixels
    int page_number = 0;
  };
  struct Table {
    std::string caption;
    std::string content_html;
    std::array<int, 4> bounding_box{};
    int page_number = 0;
  };
  struct Equation {
    std::string latex;
    int page_number = 0;
  };

  std::string paper_id;
  Metadata metadata;
  std::vector<Page> pages;
  std::vector<Section> sections;
  std::vector<Figure> figures;
  std::vector<Table> tables;
  std::vector<Equation> equations;
  std::vector<std::string> references;
};

/// Loads and fully validates a bundle: contiguous page numbers starting at
/// 1, element pages that exist, bounding boxes inside their page rasters.
DocumentBundle load_bundle(const std::string& path);

/// Validation entry point for bundles built in memory (used by tests).
void validate_bundle(const DocumentBundle& bundle);

}  // namespace nsrag
