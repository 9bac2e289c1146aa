#include <doctest.h>

#include <array>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "polytok/bpe.hpp"
#include "polytok/byte_unicode.hpp"
#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

using namespace polytok;

namespace {

TrainConfig config(std::size_t vocab, std::uint64_t min_freq, std::size_t specials = 0) {
  TrainConfig cfg;
  cfg.vocab_size = vocab;
  cfg.min_frequency = min_freq;
  cfg.special_tokens = make_special_tokens(specials);
  return cfg;
}

std::vector<testing::OracleMerge> merge_list(const Tokenizer& tok) {
  std::vector<testing::OracleMerge> out;
  for (const auto& m : tok.merges()) out.push_back({tok.token(m.left), tok.token(m.right)});
  return out;
}

std::string random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
  return s;
}

}  // namespace

TEST_CASE("training worked examples") {
  SUBCASE("repeated aaaa") {
    const std::vector<std::string> docs(10, "aaaa");
    const Tokenizer tok = train(docs, config(258, 2));
    REQUIRE(tok.merges().size() == 2);
    CHECK(merge_list(tok) == std::vector<testing::OracleMerge>{{"a", "a"}, {"aa", "aa"}});
    CHECK(tok.encode_ids("aaaa") == std::vector<TokenId>{*tok.find("aaaa")});
  }
  SUBCASE("frequency floor") {
    const std::vector<std::string> docs = {"abcdefgh"};
    const Tokenizer tok = train(docs, config(1000, 5, 8));
    CHECK(tok.merges().empty());
    CHECK(tok.vocab_size() == 256 + 8);
  }
  SUBCASE("pretoken boundaries") {
    const std::vector<std::string> docs = {"ab ab ab"};
    const Tokenizer tok = train(docs, config(300, 1));
    REQUIRE_FALSE(tok.merges().empty());
    CHECK(merge_list(tok)[0] == testing::OracleMerge{"a", "b"});
    for (const auto& m : merge_list(tok)) CHECK_FALSE((m.left == "b" && m.right == " "));
  }
  SUBCASE("empty corpus") {
    CHECK_THROWS_AS(train(std::vector<std::string>{}, config(300, 1)), Error);
  }
  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(config(256 + 8, 1, 8).validate(), Error);
    CHECK_THROWS_AS(config(300, 0).validate(), Error);
    auto cfg = config(300, 1);
    cfg.pretokenizer_id = "nope";
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = config(300, 1);
    cfg.special_tokens = {"<x>", "<x>"};
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
}

TEST_CASE("training matches the naive reference") {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "aabbbccde fgh\n.,'Ä\xc3\xa9\xe0\xa4\x95";
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<std::string> docs;
    const std::size_t ndocs = 1 + rng() % 20;
    for (std::size_t d = 0; d < ndocs; ++d) {
      std::string doc;
      const std::size_t len = rng() % 300;
      for (std::size_t i = 0; i < len; ++i) doc += alphabet[rng() % alphabet.size()];
      docs.push_back(doc);
    }
    const std::size_t specials = rng() % 3;
    const std::size_t vocab = 256 + specials + 1 + rng() % 200;
    const std::uint64_t min_freq = std::array<std::uint64_t, 3>{1, 2, 5}[rng() % 3];
    const Tokenizer tok = train(docs, config(vocab, min_freq, specials));
    CHECK(merge_list(tok) == testing::naive_bpe(docs, vocab, min_freq, specials));
  }
}

TEST_CASE("encoding") {
  const Tokenizer bytes = Tokenizer::byte_level();
  SUBCASE("merge-free tokenizer gives one token per byte") {
    const std::string s = "Grüße, мир! 123";
    const Encoding e = bytes.encode(s);
    CHECK(e.ids.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(e.ids[i] == bytes.byte_token(static_cast<unsigned char>(s[i])));
      CHECK(e.byte_spans[i] == ByteSpan{i, i + 1});
    }
  }
  SUBCASE("decode") {
    CHECK(bytes.decode(std::vector<TokenId>{}) == "");
    CHECK_THROWS_AS(bytes.decode(std::vector<TokenId>{static_cast<TokenId>(bytes.vocab_size())}), Error);
    CHECK(bytes.decode(std::vector<TokenId>{1}) == "<bos>");
  }
  SUBCASE("round trip") {
    std::vector<std::string> docs;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 30; ++i) docs.push_back(random_bytes(rng, 200) + " the cat sat on the mat " + std::to_string(i));
    const Tokenizer tok = train(docs, config(600, 2, 8));
    for (int i = 0; i < 100; ++i) {
      const std::string s = random_bytes(rng, rng() % 1024) + " the mat";
      const Encoding e = tok.encode(s);
      CHECK(tok.decode(e.ids) == s);
      std::size_t pos = 0;
      for (std::size_t k = 0; k < e.ids.size(); ++k) {
        CHECK(e.byte_spans[k].begin == pos);
        CHECK(s.substr(pos, e.byte_spans[k].size()) == tok.token(e.ids[k]));
        pos = e.byte_spans[k].end;
      }
      CHECK(pos == s.size());
      CHECK(tok.count_tokens(s) == e.ids.size());
    }
  }
}

TEST_CASE("more merges never lengthen an encoding") {
  const std::string text = read_file(POLYTOK_TEST_DATA_DIR "/fixture_corpus.txt");
  std::vector<std::string> docs;
  for (auto line : split_lines(text)) docs.emplace_back(line);
  const Tokenizer full = train(docs, config(900, 2, 8));

  std::vector<Tokenizer> prefixes;
  for (std::size_t n : {0, 10, 50, 200, 400}) {
    Tokenizer t = Tokenizer::byte_level();
    for (std::size_t i = 0; i < std::min(n, full.merges().size()); ++i) {
      t.append_merge(full.merges()[i].left, full.merges()[i].right);
    }
    prefixes.push_back(std::move(t));
  }
  prefixes.push_back(full);
  for (std::size_t d = 0; d < docs.size(); d += 7) {
    for (std::size_t p = 1; p < prefixes.size(); ++p) {
      CHECK(prefixes[p].count_tokens(docs[d]) <= prefixes[p - 1].count_tokens(docs[d]));
    }
  }
}

TEST_CASE("tokenizer file") {
  std::vector<std::string> docs = {"abc abc abd", "\xff\xfe\x00 zz", "éé éé"};
  docs[1] += std::string("\x01\x7f", 2);
  const Tokenizer tok = train(docs, config(280, 1, 4));
  const std::string json = tok.to_json();
  const Tokenizer again = Tokenizer::from_json(json);
  CHECK(again.to_json() == json);
  CHECK(again.vocab_size() == tok.vocab_size());
  CHECK(again.special_tokens() == tok.special_tokens());
  for (TokenId id = 0; id < tok.vocab_size(); ++id) CHECK(again.token(id) == tok.token(id));

  const auto path = std::filesystem::temp_directory_path() / "polytok_tok_test.json";
  tok.save(path);
  CHECK(Tokenizer::load(path).to_json() == json);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(Tokenizer::from_json("{"), Error);
  CHECK_THROWS_AS(Tokenizer::from_json(R"({"version":2})"), Error);
  std::string broken = json;
  broken.replace(broken.find("\"version\": 1"), 12, "\"version\": 9");
  CHECK_THROWS_AS(Tokenizer::from_json(broken), Error);
}

TEST_CASE("visible byte mapping") {
  for (int b = 0; b < 256; ++b) {
    CHECK(unicode_to_byte(byte_to_unicode(static_cast<unsigned char>(b))) == b);
  }
  CHECK(byte_to_unicode(' ') == U'Ġ');
  CHECK(byte_to_unicode('A') == U'A');
  CHECK(encode_visible(" a") == "\xc4\xa0" "a");
  CHECK(decode_visible("\xc4\xa0" "a") == std::optional<std::string>(" a"));
  CHECK_FALSE(decode_visible("\xe4\xb8\x80").has_value());
}

TEST_CASE("training does not depend on worker count") {
  const std::string text = read_file(POLYTOK_TEST_DATA_DIR "/fixture_corpus.txt");
  std::vector<std::string> docs;
  for (auto line : split_lines(text)) docs.emplace_back(line);
  const std::string one = train(docs, config(700, 2, 8), 1).to_json();
  CHECK(train(docs, config(700, 2, 8), 4).to_json() == one);
  CHECK(train(docs, config(700, 2, 8), 7).to_json() == one);
}
