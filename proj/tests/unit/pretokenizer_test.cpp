#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "polytok/error.hpp"
#include "polytok/pretokenizer.hpp"
#include "polytok/unicode.hpp"

using polytok::pretokenize;
using Chunks = std::vector<std::string_view>;

namespace {
Chunks split(std::string_view s) { return pretokenize(s, polytok::kO200kProfile); }
}  // namespace

TEST_CASE("pretokenizer basic splits") {
  CHECK(split("hello world") == Chunks{"hello", " world"});
  CHECK(split("").empty());
  CHECK(split("12345") == Chunks{"123", "45"});
  CHECK(split("I'm here") == Chunks{"I'm", " here"});
  CHECK(split("HELLOWorld") == Chunks{"HELLOWorld"});
  CHECK(split("a  b") == Chunks{"a", " ", " b"});
  CHECK(split("x\n\ny") == Chunks{"x", "\n\n", "y"});
  CHECK(split("foo!!! bar") == Chunks{"foo", "!!!", " bar"});
  CHECK(split("end   ") == Chunks{"end", "   "});
}

TEST_CASE("pretokenizer covers input with invalid utf-8") {
  const std::string s = "ab\xff\xfe cd\xc3";
  std::string joined;
  for (auto c : split(s)) joined += c;
  CHECK(joined == s);
  CHECK_FALSE(polytok::unicode::is_valid_utf8(s));
}

TEST_CASE("unknown pretokenizer profile") {
  CHECK_THROWS_AS(pretokenize("x", "cl100k"), polytok::Error);
  CHECK_FALSE(polytok::is_known_pretokenizer("cl100k"));
}

TEST_CASE("pretokenizer matches the regex fixture") {
  std::ifstream in(POLYTOK_TEST_DATA_DIR "/o200k_conformance.jsonl");
  REQUIRE(in);
  std::string line;
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const std::string text = j.at("text");
    std::vector<std::string> want = j.at("chunks");
    std::vector<std::string> got;
    for (auto c : split(text)) got.emplace_back(c);
    ++cases;
    if (got != want) {
      if (++mismatches <= 5) {
        INFO("text: " << j.at("text").dump());
        CHECK(got == want);
      }
    }
  }
  CHECK(cases == 1000);
  CHECK(mismatches == 0);
}
