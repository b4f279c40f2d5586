#pragma once

#include <string>
#include <vector>

#include "nsrag/bundle.hpp"
#include "nsrag/gateway.hpp"

namespace nsrag {

struct SummaryConfig {
  int retries = 2;  // extra attempts per element after the first failure
};

/// LLM-written summaries for every summarizable element of a bundle.
/// Elements whose calls keep failing end up with an empty summary and a
/// warning instead of aborting the ingest.
struct SummarySet {
  std::string tldr;
  std::vector<std::string> pages;
  std::vector<std::string> sections;
  std::vector<std::string> images;
  std::vector<std::string> tables;
  std::vector<std::string> warnings;
};

SummarySet generate_summaries(const DocumentBundle& bundle, Gateway& gateway,
                              const SummaryConfig& cfg = {});

/// All summaries empty; used when no LLM endpoint is configured.
SummarySet empty_summaries(const DocumentBundle& bundle);

}  // namespace nsrag
