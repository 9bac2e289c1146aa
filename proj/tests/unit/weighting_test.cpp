#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "polytok/corpus_store.hpp"
#include "polytok/corpus_weighting.hpp"
#include "polytok/error.hpp"
#include "polytok/hashing.hpp"

using namespace polytok;

namespace {

LanguageSpec lang(std::string code, std::string script, std::string family, std::uint64_t data) {
  return {code, code, script, family, "", Cluster::kEuro, data};
}

WeightTable table(std::map<std::string, double> entries) {
  WeightTable wt;
  wt.entries = std::move(entries);
  return wt;
}

}  // namespace

TEST_CASE("universal weights, worked examples") {
  SUBCASE("same bucket reduces to data share") {
    const auto wt = compute_weights(Registry({lang("aaa", "Latin", "X", 10), lang("bbb", "Latin", "X", 30)}),
                                    WeightingMode::kUniversal);
    CHECK(wt.entries.at("aaa") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wt.entries.at("bbb") == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("symmetric singletons") {
    const auto wt = compute_weights(Registry({lang("aaa", "Latin", "X", 5), lang("bbb", "Greek", "Y", 5)}),
                                    WeightingMode::kUniversal);
    CHECK(wt.entries.at("aaa") == 0.5);
    CHECK(wt.entries.at("bbb") == 0.5);
  }
  SUBCASE("two buckets") {
    const auto wt = compute_weights(
        Registry({lang("aaa", "Latin", "X", 10), lang("bbb", "Latin", "X", 30), lang("ccc", "Greek", "Y", 60)}),
        WeightingMode::kUniversal);
    CHECK(wt.entries.at("aaa") == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(wt.entries.at("bbb") == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(wt.entries.at("ccc") == doctest::Approx(0.75).epsilon(1e-14));
  }
}

TEST_CASE("uniform weights with pinned English") {
  const Registry reg({lang("eng", "Latin", "IE", 100), lang("deu", "Latin", "IE", 50), lang("fin", "Latin", "U", 1),
                      lang("jpn", "Japanese", "J", 7), lang("hin", "Devanagari", "IE", 3)},
                     {{"eng", 0.30}});
  const auto wt = compute_weights(reg, WeightingMode::kUniform);
  CHECK(wt.entries.at("eng") == 0.30);
  for (const char* c : {"deu", "fin", "jpn", "hin"}) CHECK(wt.entries.at(c) == doctest::Approx(0.175).epsilon(1e-15));
}

TEST_CASE("weighting errors") {
  CHECK_THROWS_AS(compute_weights(Registry({}), WeightingMode::kUniversal), Error);
  CHECK_THROWS_AS(compute_weights(Registry({lang("aaa", "L", "X", 0), lang("bbb", "L", "X", 0)}),
                                  WeightingMode::kUniversal),
                  Error);
  CHECK_THROWS_AS(parse_weighting_mode("balanced"), Error);
}

TEST_CASE("weights match the direct formula on random registries") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> scripts = {"Latin", "Cyrillic", "Arabic"};
  const std::vector<std::string> families = {"IE", "Uralic", "Turkic"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LanguageSpec> langs;
    std::vector<testing::OracleLanguage> oracle;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::string code = {char('a' + i), char('a' + (trial % 26)), 'x'};
      const auto& s = scripts[rng() % scripts.size()];
      const auto& f = families[rng() % families.size()];
      const std::uint64_t data = rng() % 4 == 0 ? 0 : 1 + rng() % 1'000'000'000;
      langs.push_back(lang(code, s, f, data));
      oracle.push_back({code, s, f, data});
    }
    if (std::none_of(langs.begin(), langs.end(), [](auto& l) { return l.data_bytes > 0; })) continue;
    const auto wt = compute_weights(Registry(langs), WeightingMode::kUniversal);
    const auto want = testing::eq1_weights(oracle, {});
    double sum = 0;
    for (const auto& [code, w] : want) {
      CHECK(std::abs(wt.entries.at(code) - static_cast<double>(w)) <= 1e-12);
      sum += wt.entries.at(code);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("weight properties") {
  const std::vector<LanguageSpec> base = {lang("aaa", "Latin", "X", 10), lang("bbb", "Latin", "X", 30),
                                          lang("ccc", "Greek", "Y", 60), lang("ddd", "Arabic", "Z", 60)};
  const auto wt = compute_weights(Registry(base), WeightingMode::kUniversal);
  SUBCASE("scale invariance") {
    auto scaled = base;
    for (auto& l : scaled) l.data_bytes *= 1000;
    const auto wt2 = compute_weights(Registry(scaled), WeightingMode::kUniversal);
    for (const auto& [code, w] : wt.entries) CHECK(wt2.entries.at(code) == doctest::Approx(w).epsilon(1e-14));
  }
  SUBCASE("bucket fairness") {
    CHECK(wt.entries.at("bbb") / wt.entries.at("aaa") == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(wt.entries.at("ccc") == wt.entries.at("ddd"));
  }
  SUBCASE("table text round trip") {
    const auto again = WeightTable::parse(wt.serialize());
    CHECK(again.entries == wt.entries);
    CHECK(again.mode == wt.mode);
  }
}

TEST_CASE("sample plans") {
  CHECK(make_sample_plan(table({{"aaa", 0.5}, {"bbb", 0.5}}), 1000, 0).bytes_per_language ==
        std::map<std::string, std::uint64_t>{{"aaa", 500}, {"bbb", 500}});
  CHECK(make_sample_plan(table({{"aaa", 0.0625}, {"bbb", 0.1875}, {"ccc", 0.75}}), 10'000, 0).bytes_per_language ==
        std::map<std::string, std::uint64_t>{{"aaa", 625}, {"bbb", 1875}, {"ccc", 7500}});
  CHECK(make_sample_plan(table({{"aaa", 1.0 / 3}, {"bbb", 1.0 / 3}, {"ccc", 1.0 / 3}}), 100, 0).bytes_per_language ==
        std::map<std::string, std::uint64_t>{{"aaa", 34}, {"bbb", 33}, {"ccc", 33}});
  CHECK_THROWS_AS(make_sample_plan(table({{"aaa", 1.0}}), 0, 0), Error);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    std::map<std::string, double> e;
    for (int i = 0; i < 7; ++i) e[std::string(1, char('a' + i)) + "zz"] = static_cast<double>(rng() % 1000) + 1;
    const double s = std::accumulate(e.begin(), e.end(), 0.0, [](double a, auto& kv) { return a + kv.second; });
    for (auto& [_, w] : e) w /= s;
    const std::uint64_t total = 1 + rng() % 1'000'000;
    const auto plan = make_sample_plan(table(e), total, 0);
    std::uint64_t sum = 0;
    for (const auto& [_, b] : plan.bytes_per_language) sum += b;
    CHECK(sum == total);
  }
}

TEST_CASE("sampling") {
  CorpusStore store;
  store.add("aaa", std::string(100, 'x'));
  for (int i = 0; i < 40; ++i) store.add("bbb", "document number " + std::to_string(i));

  SamplePlan plan;
  plan.bytes_per_language = {{"aaa", 250}, {"bbb", 0}};
  plan.total_bytes = 250;
  plan.seed = 3;
  const auto drawn = draw_sample(plan, store);
  CHECK(drawn.size() == 3);
  for (const auto& d : drawn) CHECK(d.iso_code == "aaa");

  plan.bytes_per_language = {{"aaa", 150}, {"bbb", 300}};
  plan.total_bytes = 450;
  const auto stream = [&] {
    std::ostringstream out;
    write_sample(plan, store, out);
    return out.str();
  };
  const std::string first = stream();
  CHECK(sha256_hex(first) == sha256_hex(stream()));
  plan.seed = 4;
  CHECK(stream() != first);

  plan.bytes_per_language = {{"zzz", 10}};
  CHECK_THROWS_AS(draw_sample(plan, store), Error);
}
