#include "nsrag/summaries.hpp"

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

constexpr const char* kSystem =
    "You are a careful research assistant who writes faithful, concise summaries of parsed "
    "paper content.";

std::string ask(Gateway& gateway, const SummaryConfig& cfg, const std::string& prompt,
                const std::string& what, std::vector<std::string>* warnings) {
  for (int attempt = 0; attempt <= cfg.retries; attempt++) {
    try {
      return gateway.chat({ChatMessage::system(kSystem), ChatMessage::user(prompt)});
    } catch (const Error& e) {
      if (attempt == cfg.retries) {
        warnings->push_back(what + ": summary skipped after " +
                            std::to_string(cfg.retries + 1) + " attempts (" + e.what() + ")");
      }
    }
  }
  return "";
}

}  // namespace

SummarySet empty_summaries(const DocumentBundle& bundle) {
  SummarySet set;
  set.pages.resize(bundle.pages.size());
  set.sections.resize(bundle.sections.size());
  set.images.resize(bundle.figures.size());
  set.tables.resize(bundle.tables.size());
  return set;
}

SummarySet generate_summaries(const DocumentBundle& bundle, Gateway& gateway,
                              const SummaryConfig& cfg) {
  SummarySet set;

  set.tldr = ask(gateway, cfg,
                 "Write a one-sentence TL;DR of a research paper given its title and abstract.\n\n"
                 "Title: " + bundle.metadata.title + "\nAbstract: " + bundle.metadata.abstract +
                     "\n\nTL;DR:",
                 "tldr", &set.warnings);

  for (const auto& page : bundle.pages) {
    set.pages.push_back(ask(
        gateway, cfg,
        "Summarize the following page of a research paper in two or three sentences, focusing "
        "on key information and describing the page content.\n\nPage " +
            std::to_string(page.page_number) + " content:\n" + page.text + "\n\nSummary:",
        "pages[" + std::to_string(page.page_number) + "]", &set.warnings));
  }

  for (size_t i = 0; i < bundle.sections.size(); i++) {
    const auto& section = bundle.sections[i];
    set.sections.push_back(
        ask(gateway, cfg,
            "Summarize the following section of a research paper in two or three sentences, "
            "focusing on key information.\n\nSection title: " + section.title +
                "\nSection content:\n" + section.content + "\n\nSummary:",
            "sections[" + std::to_string(i) + "]", &set.warnings));
  }

  for (size_t i = 0; i < bundle.figures.size(); i++) {
    const auto& figure = bundle.figures[i];
    set.images.push_back(
        ask(gateway, cfg,
            "Write a brief summary of a figure from a research paper given its caption, "
            "focusing on what the figure shows.\n\nCaption: " + figure.caption + "\n\nSummary:",
            "figures[" + std::to_string(i) + "]", &set.warnings));
  }

  for (size_t i = 0; i < bundle.tables.size(); i++) {
    const auto& table = bundle.tables[i];
    set.tables.push_back(
        ask(gateway, cfg,
            "Write a brief summary of a table from a research paper given its caption and HTML "
            "content, focusing on key information.\n\nCaption: " + table.caption +
                "\nHTML content:\n" + table.content_html + "\n\nSummary:",
            "tables[" + std::to_string(i) + "]", &set.warnings));
  }

  return set;
}

}  // namespace nsrag
