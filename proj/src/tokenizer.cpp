#include "nsrag/tokenizer.hpp"

#include <cctype>

namespace nsrag {

namespace {

inline bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

inline bool is_space(unsigned char c) { return std::isspace(c); }

}  // namespace

std::vector<TokenSpan> token_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      i++;
      continue;
    }
    if (is_word_char(c)) {
      size_t start = i;
      while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) i++;
      spans.push_back({start, i});
    } else {
      spans.push_back({i, i + 1});
      i++;
    }
  }
  return spans;
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> out;
  for (const auto& span : token_spans(text)) {
    std::string tok(text.substr(span.begin, span.end - span.begin));
    if (lowercase) {
      for (char& ch : tok) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    out.push_back(std::move(tok));
  }
  return out;
}

size_t count_tokens(std::string_view text) { return token_spans(text).size(); }

}  // namespace nsrag
