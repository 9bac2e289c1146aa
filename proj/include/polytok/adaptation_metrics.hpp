#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polytok {

// --- judge prompts ---------------------------------------------------------

struct JudgePrompt {
  std::string system;
  std::string user;
};

struct JudgeSlots {
  std::string instruction;
  std::string completion_a;
  std::string completion_b;
  friend bool operator==(const JudgeSlots&, const JudgeSlots&) = default;
};

// Single-pass substitution into the pairwise judge template; slot text is
// copied verbatim, so braces inside a slot are never re-expanded.
JudgePrompt emit_judge_prompt(std::string_view instruction, std::string_view completion_a,
                              std::string_view completion_b);

// Recovers the slots from an emitted user prompt. Returns nullopt if the text
// does not follow the template. Ambiguous when the instruction contains
// "\nAnswer (A): " or completion A contains "\nAnswer (B): ".
std::optional<JudgeSlots> parse_judge_prompt(std::string_view user_prompt);

// --- verdicts --------------------------------------------------------------

enum class Verdict { kA, kB, kTie };

std::string_view to_string(Verdict v);

// Reads the text after the last "Preferred:" marker up to the end of its line.
// Surrounding whitespace, quotes, angle brackets and a trailing period are
// ignored; the rest must be exactly "Answer (A)", "Answer (B)" or "TIE".
// Throws Error(kUnparseableVerdict) otherwise.
Verdict parse_verdict(std::string_view raw);

struct VerdictRecord {
  std::string example_id;
  std::string iso_code;
  std::optional<Verdict> verdict;  // nullopt when the judge output was unparseable
  std::string judge_raw;
};

// Verdict file: "example_id\tiso_code\traw" with the raw judge output escaped.
std::vector<VerdictRecord> parse_verdict_file(std::string_view text);

// --- win rates -------------------------------------------------------------

struct LanguageWinRate {
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::uint64_t ties = 0;
  std::uint64_t unparseable = 0;  // excluded from the totals below

  std::uint64_t total() const { return wins + losses + ties; }
  // Ties stay in the denominator and count as neither win nor loss.
  double win_rate() const { return total() == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(total()); }
  double loss_rate() const { return total() == 0 ? 0.0 : static_cast<double>(losses) / static_cast<double>(total()); }
  double tie_rate() const { return total() == 0 ? 0.0 : static_cast<double>(ties) / static_cast<double>(total()); }
};

struct WinRateReport {
  std::map<std::string, LanguageWinRate> per_language;
  std::map<std::string, double> subset_averages;  // unweighted mean of member win rates
  std::uint64_t unparseable = 0;

  std::string to_tsv() const;
};

struct WinRateOptions {
  Verdict candidate = Verdict::kA;  // which position holds the candidate generation
  std::optional<std::set<std::string>> registered;  // when set, every verdict language must be in it
};

// Throws Error(kEmptyInput) when no record is given, Error(kNotFound) for an
// unregistered language.
WinRateReport win_rate(const std::vector<VerdictRecord>& verdicts,
                       const std::map<std::string, std::vector<std::string>>& subsets,
                       const WinRateOptions& options = {});

// --- adaptation speed ------------------------------------------------------

struct CurvePoint {
  double step = 0.0;
  double win_rate = 0.0;
};

struct AdaptationCurve {
  std::string label;
  std::vector<CurvePoint> points;  // steps strictly increasing

  // "step\twin_rate" lines; '#' lines skipped. Throws Error(kParse) if steps
  // are not strictly increasing.
  static AdaptationCurve parse(std::string_view text, std::string label = {});
};

struct Speedup {
  double factor = 0.0;
  double threshold = 0.0;       // baseline's final win rate
  double candidate_step = 0.0;  // first crossing, linearly interpolated
  double baseline_step = 0.0;   // baseline's final step

  std::string to_tsv() const;
};

// factor = baseline final step / first candidate step reaching the baseline's
// final win rate. Throws Error(kNeverReaches) if the candidate never gets
// there and Error(kValidation) for empty curves or a crossing at step <= 0.
Speedup speedup_factor(const AdaptationCurve& candidate, const AdaptationCurve& baseline);

}  // namespace polytok
