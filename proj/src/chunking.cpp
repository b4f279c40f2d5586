#include "nsrag/chunking.hpp"

#include <cctype>

#include "nsrag/errors.hpp"
#include "nsrag/tokenizer.hpp"

namespace nsrag {

namespace {

bool is_blank(const std::string& s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

struct PageRange {
  size_t begin;
  size_t end;
  int page_number;
};

// Last "\n\n" position in [from, to), or npos.
size_t find_paragraph_cut(const std::string& text, size_t from, size_t to) {
  if (to < 2) return std::string::npos;
  for (size_t p = to - 1; p-- > from;) {
    if (text[p] == '\n' && text[p + 1] == '\n') return p;
  }
  return std::string::npos;
}

// Cut point just after the last sentence-ending punctuation in [from, to).
size_t find_sentence_cut(const std::string& text, size_t from, size_t to) {
  for (size_t p = to; p-- > from;) {
    char c = text[p];
    if ((c == '.' || c == '!' || c == '?') &&
        (p + 1 >= text.size() || std::isspace(static_cast<unsigned char>(text[p + 1])))) {
      return p + 1;
    }
  }
  return std::string::npos;
}

size_t find_whitespace_cut(const std::string& text, size_t from, size_t to) {
  for (size_t p = to; p-- > from;) {
    if (std::isspace(static_cast<unsigned char>(text[p]))) return p;
  }
  return std::string::npos;
}

std::vector<Chunk> split_fixed_window(const std::vector<std::string>& texts, int window) {
  std::string full;
  std::vector<PageRange> ranges;
  for (size_t i = 0; i < texts.size(); i++) {
    if (i) full += "\n\n";
    ranges.push_back({full.size(), full.size() + texts[i].size(), static_cast<int>(i) + 1});
    full += texts[i];
  }

  auto spans = token_spans(full);
  std::vector<Chunk> chunks;
  size_t i = 0;
  const size_t n = static_cast<size_t>(window);
  while (i < spans.size()) {
    size_t chunk_begin = spans[i].begin;
    size_t cut;
    size_t next_i;
    if (i + n >= spans.size()) {
      cut = spans.back().end;
      next_i = spans.size();
    } else {
      size_t window_end = spans[i + n - 1].end;
      size_t search_from = spans[i].end;
      cut = find_paragraph_cut(full, search_from, window_end);
      if (cut == std::string::npos) cut = find_sentence_cut(full, search_from, window_end);
      if (cut == std::string::npos) cut = find_whitespace_cut(full, search_from, window_end);
      if (cut == std::string::npos) cut = window_end;  // one unbroken run: hard cut
      next_i = i;
      while (next_i < spans.size() && spans[next_i].begin < cut) next_i++;
    }

    // Trim boundary whitespace off the chunk.
    size_t tb = chunk_begin, te = cut;
    while (tb < te && std::isspace(static_cast<unsigned char>(full[tb]))) tb++;
    while (te > tb && std::isspace(static_cast<unsigned char>(full[te - 1]))) te--;
    if (tb < te) {
      Chunk chunk;
      chunk.text = full.substr(tb, te - tb);
      for (const auto& range : ranges) {
        if (range.begin < te && range.end > tb) chunk.page_numbers.push_back(range.page_number);
      }
      chunks.push_back(std::move(chunk));
    }
    i = next_i;
  }
  return chunks;
}

}  // namespace

std::vector<Chunk> split_chunks(const std::vector<std::string>& texts, const ChunkingConfig& cfg) {
  if (cfg.chunk_size_tokens <= 0) {
    raise(ErrorKind::InvariantViolation, "chunk_size_tokens must be positive");
  }
  switch (cfg.view) {
    case ChunkView::FixedWindow:
      return split_fixed_window(texts, cfg.chunk_size_tokens);
    case ChunkView::PerPage: {
      std::vector<Chunk> chunks;
      for (size_t i = 0; i < texts.size(); i++) {
        if (is_blank(texts[i])) continue;
        chunks.push_back({texts[i], {static_cast<int>(i) + 1}});
      }
      return chunks;
    }
    case ChunkView::PerSection: {
      std::vector<Chunk> chunks;
      for (const auto& text : texts) {
        if (is_blank(text)) continue;
        chunks.push_back({text, {}});
      }
      return chunks;
    }
  }
  return {};
}

}  // namespace nsrag
