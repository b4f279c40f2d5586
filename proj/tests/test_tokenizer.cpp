#include <doctest.h>

#include "nsrag/tokenizer.hpp"
#include "nsrag/value.hpp"

using namespace nsrag;

TEST_CASE("tokenizer splits words and punctuation") {
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("hello") == 1);
  CHECK(count_tokens("hello world") == 2);
  CHECK(count_tokens("don't stop") == 4);  // don / ' / t / stop
  CHECK(count_tokens("a,b") == 3);
  CHECK(count_tokens("  spaced   out  ") == 2);

  auto tokens = tokenize("Hello, World!", true);
  REQUIRE(tokens.size() == 4);
  CHECK(tokens[0] == "hello");
  CHECK(tokens[1] == ",");
  CHECK(tokens[2] == "world");
  CHECK(tokens[3] == "!");
}

TEST_CASE("token spans cover their source text") {
  std::string text = "alpha, beta_2 gamma";
  for (const auto& span : token_spans(text)) {
    CHECK(span.begin < span.end);
    CHECK(span.end <= text.size());
  }
}

TEST_CASE("literal parser reads python-style values") {
  CHECK(parse_python_literal("42")->as_int() == 42);
  CHECK(parse_python_literal("-3.5")->as_float() == doctest::Approx(-3.5));
  CHECK(parse_python_literal("'hi'")->as_string() == "hi");
  CHECK(parse_python_literal("\"hi\"")->as_string() == "hi");
  CHECK(parse_python_literal("True")->as_bool());
  CHECK(parse_python_literal("None")->is_null());
  CHECK_FALSE(parse_python_literal("plain words").has_value());
  CHECK_FALSE(parse_python_literal("[1, 2").has_value());

  auto list = parse_python_literal("['a', \"b\", 3]");
  REQUIRE(list.has_value());
  REQUIRE(list->is_list());
  CHECK(list->as_list()[0].as_string() == "a");
  CHECK(list->as_list()[2].as_int() == 3);

  auto map = parse_python_literal("{'k': [1, 2], \"n\": null}");
  REQUIRE(map.has_value());
  CHECK(map->as_map().at("k").as_list().size() == 2);
  CHECK(map->as_map().at("n").is_null());
}

TEST_CASE("literal rendering round-trips") {
  Value v(Value::List{Value("a \"quoted\" string"), Value(3), Value(true), Value::null()});
  auto back = parse_python_literal(v.to_literal_text());
  REQUIRE(back.has_value());
  CHECK(*back == v);
}

TEST_CASE("float formatting keeps a decimal point") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e20) == "1e+20");
}
