#pragma once

#include <string>
#include <vector>

namespace nsrag {

enum class ChunkView {
  FixedWindow,  // token windows over the concatenated text
  PerPage,      // one chunk per input text
  PerSection,   // one chunk per input text, no page attribution
};

struct ChunkingConfig {
  int chunk_size_tokens = 512;
  ChunkView view = ChunkView::FixedWindow;
};

struct Chunk {
  std::string text;
  std::vector<int> page_numbers;  // 1-based pages the chunk spans
};

/// Splits ordered texts into chunks. The fixed-window view cuts the
/// concatenated text into windows of at most chunk_size_tokens, breaking
/// preferentially at paragraph, then sentence, then whitespace boundaries;
/// concatenating the chunks restores the source text modulo boundary
/// whitespace.
std::vector<Chunk> split_chunks(const std::vector<std::string>& texts,
                                const ChunkingConfig& cfg);

}  // namespace nsrag
