#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nsrag {

/// One token span inside the source text.
struct TokenSpan {
  size_t begin;
  size_t end;
};

/// The engine-wide token counter: maximal runs of word characters
/// (ASCII alnum, '_', or any non-ASCII byte) count as one token;
/// every other non-space character is its own token. This single
/// definition backs chunk sizes, observation budgets, and BM25.
std::vector<TokenSpan> token_spans(std::string_view text);

std::vector<std::string> tokenize(std::string_view text, bool lowercase = false);

size_t count_tokens(std::string_view text);

}  // namespace nsrag
