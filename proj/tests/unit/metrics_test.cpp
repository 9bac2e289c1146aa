#include <doctest.h>

#include <random>

#include "polytok/adaptation_metrics.hpp"
#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

using namespace polytok;

namespace {

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {"a",  "b",   " ",  "\n", "{instruction}", "Answer", "(A)",
                                                  ":",  "é",   "中", "\t", "Preferred: TIE", "\"",   "{completion_b}"};
  std::string s;
  const std::size_t n = rng() % 30;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

std::vector<VerdictRecord> records(const std::string& iso, const std::vector<Verdict>& vs) {
  std::vector<VerdictRecord> out;
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back({std::to_string(i), iso, vs[i], ""});
  return out;
}

AdaptationCurve curve(std::vector<CurvePoint> pts) { return {"", std::move(pts)}; }

}  // namespace

TEST_CASE("judge prompt template") {
  const std::string system = read_file(POLYTOK_TEST_DATA_DIR "/judge_system.txt");
  const std::string user = read_file(POLYTOK_TEST_DATA_DIR "/judge_user_template.txt");

  const auto literal = emit_judge_prompt("{instruction}", "{completion_a}", "{completion_b}");
  CHECK(literal.system == system);
  CHECK(literal.user == user);

  std::string empty = user;
  for (const std::string slot : {"{instruction}", "{completion_a}", "{completion_b}"}) {
    empty.erase(empty.find(slot), slot.size());
  }
  CHECK(emit_judge_prompt("", "", "").user == empty);
}

TEST_CASE("judge prompts round trip") {
  std::mt19937_64 rng(50);
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    JudgeSlots s{random_text(rng), random_text(rng), random_text(rng)};
    // Marker text inside the leading slots is the one documented ambiguity.
    if (s.instruction.find("\nAnswer (A): ") != std::string::npos ||
        s.completion_a.find("\nAnswer (B): ") != std::string::npos)
      continue;
    const auto p = emit_judge_prompt(s.instruction, s.completion_a, s.completion_b);
    CHECK(parse_judge_prompt(p.user) == std::optional<JudgeSlots>(s));
    ++checked;
  }
  CHECK(checked == 50);
  CHECK_FALSE(parse_judge_prompt("not a prompt").has_value());
}

TEST_CASE("verdict parsing") {
  CHECK(parse_verdict("Comparison: both fine\nPreferred: Answer (A)") == Verdict::kA);
  CHECK(parse_verdict("Preferred: TIE") == Verdict::kTie);
  CHECK(parse_verdict("Preferred: 'Answer (B)'.") == Verdict::kB);
  CHECK(parse_verdict("Preferred: Answer (B)\nPreferred: <Answer (A)>") == Verdict::kA);
  CHECK_THROWS_AS(parse_verdict("I prefer both"), Error);
  CHECK_THROWS_AS(parse_verdict("Preferred: Answer (C)"), Error);
  CHECK_THROWS_AS(parse_verdict("Preferred: A"), Error);

  const auto recs = parse_verdict_file("e1\teng\tComparison: x\\nPreferred: TIE\ne2\tdeu\tno idea\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].verdict == Verdict::kTie);
  CHECK_FALSE(recs[1].verdict.has_value());
  CHECK_THROWS_AS(parse_verdict_file("only\ttwo\n"), Error);
}

TEST_CASE("win rates") {
  using enum Verdict;
  const auto r = win_rate(records("eng", {kA, kA, kB, kTie}), {});
  CHECK(r.per_language.at("eng").win_rate() == 0.5);
  CHECK(win_rate(records("eng", {kTie, kTie, kTie}), {}).per_language.at("eng").win_rate() == 0.0);
  CHECK_THROWS_AS(win_rate({}, {}), Error);

  WinRateOptions registered;
  registered.registered = std::set<std::string>{"eng"};
  CHECK_THROWS_AS(win_rate(records("xxx", {kA}), {}, registered), Error);

  std::vector<VerdictRecord> two;
  // 0.176 = 22/125, 0.374 = 187/500
  for (int i = 0; i < 125; ++i) two.push_back({"", "aaa", i < 22 ? kA : kB, ""});
  for (int i = 0; i < 500; ++i) two.push_back({"", "bbb", i < 187 ? kA : kTie, ""});
  two.push_back({"", "bbb", std::nullopt, "junk"});
  const auto sub = win_rate(two, {{"expanded", {"aaa", "bbb"}}});
  CHECK(sub.per_language.at("aaa").win_rate() == doctest::Approx(0.176).epsilon(1e-15));
  CHECK(sub.subset_averages.at("expanded") == doctest::Approx(0.275).epsilon(1e-15));
  CHECK(sub.unparseable == 1);
  CHECK(sub.per_language.at("bbb").total() == 500);
  CHECK(sub.to_tsv() == win_rate(two, {{"expanded", {"aaa", "bbb"}}}).to_tsv());
}

TEST_CASE("position swap and tie identity") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<Verdict> vs;
    const std::size_t n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(static_cast<Verdict>(rng() % 3));
    const auto a = win_rate(records("eng", vs), {}).per_language.at("eng");
    WinRateOptions swapped;
    swapped.candidate = Verdict::kB;
    const auto b = win_rate(records("eng", vs), {}, swapped).per_language.at("eng");
    CHECK(b.wins == a.losses);
    CHECK(b.losses == a.wins);
    CHECK(b.ties == a.ties);
    CHECK(b.win_rate() == a.loss_rate());
    CHECK(a.win_rate() + a.loss_rate() + a.tie_rate() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("adaptation speedup") {
  const auto cand = AdaptationCurve::parse(read_file(POLYTOK_TEST_DATA_DIR "/curve_candidate.tsv"));
  const auto base = AdaptationCurve::parse(read_file(POLYTOK_TEST_DATA_DIR "/curve_baseline.tsv"));
  const Speedup s = speedup_factor(cand, base);
  CHECK(s.threshold == 0.30);
  CHECK(s.baseline_step == 2500);
  CHECK(s.candidate_step == doctest::Approx(300).epsilon(1e-12));
  CHECK(std::abs(s.factor - 8.33) <= 0.01);

  CHECK(speedup_factor(base, base).factor == 1.0);
  CHECK_THROWS_AS(speedup_factor(curve({{0, 0.1}, {500, 0.2}, {1000, 0.25}}), base), Error);
  CHECK_THROWS_AS(speedup_factor(curve({}), base), Error);
  CHECK_THROWS_AS(AdaptationCurve::parse("10\t0.1\n5\t0.2\n"), Error);

  // Inserting collinear points changes nothing.
  auto denser = cand;
  denser.points.insert(denser.points.begin() + 4, CurvePoint{300, 0.30});
  denser.points.insert(denser.points.begin() + 4, CurvePoint{275, 0.29});
  CHECK(speedup_factor(denser, base).factor == doctest::Approx(s.factor).epsilon(1e-12));
  auto denser_base = base;
  denser_base.points.insert(denser_base.points.end() - 1, CurvePoint{2250, 0.285});
  CHECK(speedup_factor(cand, denser_base).factor == doctest::Approx(s.factor).epsilon(1e-12));
}
