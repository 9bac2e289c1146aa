#include "polytok/adaptation_metrics.hpp"

#include <algorithm>

#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

namespace polytok {
namespace {

constexpr std::string_view kSystemPrompt =
    "You are a helpful following assistant whose goal is to select the preferred (least wrong) output "
    "for a given instruction.";

constexpr std::string_view kUserHead =
    "Which of the following answers is the best one for the given instruction? A good answer should follow "
    "these rules:\n"
    "1) It should have correct reasoning,\"\n"
    "2) It should answer the request in the instruction,\n"
    "3) It should be factually correct and semantically comprehensible,\n"
    "4) It should be grammatically correct and fluent.\n"
    "\n"
    "Instruction: ";

constexpr std::string_view kAnswerA = "\nAnswer (A): ";
constexpr std::string_view kAnswerB = "\nAnswer (B): ";

constexpr std::string_view kUserTail =
    "\n"
    "\n"
    "FIRST provide a concise comparison of the two answers. If one answer is better, explain which you "
    "prefer and why. If both answers are identical or equally good or bad, explain why.\n"
    "SECOND, on a new line, state exactly one of 'Answer (A)' or 'Answer (B)' or 'TIE' to indicate your "
    "choice of preferred response.\n"
    "Your response should use the format: Comparison: <concise comparison and explanation> Preferred: "
    "<'Answer (A)' or 'Answer (B)' or 'TIE'>.";

}  // namespace

JudgePrompt emit_judge_prompt(std::string_view instruction, std::string_view completion_a,
                              std::string_view completion_b) {
  JudgePrompt p;
  p.system = kSystemPrompt;
  p.user.reserve(kUserHead.size() + kUserTail.size() + instruction.size() + completion_a.size() +
                 completion_b.size() + 32);
  p.user += kUserHead;
  p.user += instruction;
  p.user += kAnswerA;
  p.user += completion_a;
  p.user += kAnswerB;
  p.user += completion_b;
  p.user += kUserTail;
  return p;
}

std::optional<JudgeSlots> parse_judge_prompt(std::string_view user) {
  if (!user.starts_with(kUserHead) || !user.ends_with(kUserTail)) return std::nullopt;
  user.remove_prefix(kUserHead.size());
  user.remove_suffix(kUserTail.size());
  const auto a = user.find(kAnswerA);
  if (a == std::string_view::npos) return std::nullopt;
  const auto b = user.find(kAnswerB, a + kAnswerA.size());
  if (b == std::string_view::npos) return std::nullopt;
  JudgeSlots s;
  s.instruction = user.substr(0, a);
  s.completion_a = user.substr(a + kAnswerA.size(), b - a - kAnswerA.size());
  s.completion_b = user.substr(b + kAnswerB.size());
  return s;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kA: return "A";
    case Verdict::kB: return "B";
    case Verdict::kTie: return "TIE";
  }
  return "?";
}

Verdict parse_verdict(std::string_view raw) {
  constexpr std::string_view kMarker = "Preferred:";
  const auto at = raw.rfind(kMarker);
  if (at == std::string_view::npos) {
    throw Error(ErrorKind::kUnparseableVerdict, "judge output has no 'Preferred:' line");
  }
  std::string_view rest = raw.substr(at + kMarker.size());
  rest = rest.substr(0, rest.find('\n'));
  rest = trim(rest);
  if (rest.ends_with('.')) rest.remove_suffix(1);
  const auto strip_pair = [&](char open, char close) {
    if (rest.size() >= 2 && rest.front() == open && rest.back() == close) rest = trim(rest.substr(1, rest.size() - 2));
  };
  strip_pair('<', '>');
  strip_pair('\'', '\'');
  strip_pair('"', '"');
  if (rest == "Answer (A)") return Verdict::kA;
  if (rest == "Answer (B)") return Verdict::kB;
  if (rest == "TIE") return Verdict::kTie;
  throw Error(ErrorKind::kUnparseableVerdict, "unrecognized verdict '" + std::string(rest) + "'");
}

std::vector<VerdictRecord> parse_verdict_file(std::string_view text) {
  std::vector<VerdictRecord> out;
  std::size_t line_no = 0;
  for (const std::string_view line : split_lines(text)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 3) {
      throw Error(ErrorKind::kParse, "verdict line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    VerdictRecord r;
    r.example_id = f[0];
    r.iso_code = f[1];
    r.judge_raw = unescape_field(f[2]);
    try {
      r.verdict = parse_verdict(r.judge_raw);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnparseableVerdict) throw;
    }
    out.push_back(std::move(r));
  }
  return out;
}

WinRateReport win_rate(const std::vector<VerdictRecord>& verdicts,
                       const std::map<std::string, std::vector<std::string>>& subsets,
                       const WinRateOptions& options) {
  if (verdicts.empty()) throw Error(ErrorKind::kEmptyInput, "no verdicts to aggregate");
  WinRateReport report;
  for (const auto& r : verdicts) {
    if (options.registered && !options.registered->contains(r.iso_code)) {
      throw Error(ErrorKind::kNotFound, "verdict language '" + r.iso_code + "' is not registered");
    }
    LanguageWinRate& lw = report.per_language[r.iso_code];
    if (!r.verdict) {
      ++lw.unparseable;
      ++report.unparseable;
    } else if (*r.verdict == Verdict::kTie) {
      ++lw.ties;
    } else if (*r.verdict == options.candidate) {
      ++lw.wins;
    } else {
      ++lw.losses;
    }
  }
  for (const auto& [name, members] : subsets) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& code : members) {
      const auto it = report.per_language.find(code);
      if (it == report.per_language.end() || it->second.total() == 0) continue;
      sum += it->second.win_rate();
      ++n;
    }
    if (n > 0) report.subset_averages[name] = sum / static_cast<double>(n);
  }
  return report;
}

std::string WinRateReport::to_tsv() const {
  std::string out = "# win_rate = wins / (wins + losses + ties); ties count as neither win nor loss\n";
  out += "# iso_code\twins\tlosses\tties\twin_rate\n";
  for (const auto& [code, lw] : per_language) {
    out += code + '\t' + std::to_string(lw.wins) + '\t' + std::to_string(lw.losses) + '\t' +
           std::to_string(lw.ties) + '\t' + format_real(lw.win_rate()) + '\n';
  }
  for (const auto& [name, avg] : subset_averages) out += "SUBSET\t" + name + '\t' + format_real(avg) + '\n';
  out += "UNPARSEABLE\t" + std::to_string(unparseable) + '\n';
  return out;
}

AdaptationCurve AdaptationCurve::parse(std::string_view text, std::string label) {
  AdaptationCurve c;
  c.label = std::move(label);
  for (const std::string_view line : split_lines(text)) {
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw Error(ErrorKind::kParse, "curve line must be 'step<TAB>win_rate': '" + std::string(line) + "'");
    const CurvePoint p{parse_double(trim(f[0]), "step"), parse_double(trim(f[1]), "win_rate")};
    if (!c.points.empty() && !(p.step > c.points.back().step)) {
      throw Error(ErrorKind::kParse, "curve steps must be strictly increasing");
    }
    c.points.push_back(p);
  }
  return c;
}

Speedup speedup_factor(const AdaptationCurve& candidate, const AdaptationCurve& baseline) {
  if (candidate.points.empty() || baseline.points.empty()) {
    throw Error(ErrorKind::kValidation, "speedup needs two non-empty curves");
  }
  Speedup s;
  s.threshold = baseline.points.back().win_rate;
  s.baseline_step = baseline.points.back().step;

  const auto& pts = candidate.points;
  std::optional<double> crossing;
  if (pts.front().win_rate >= s.threshold) {
    crossing = pts.front().step;
  } else {
    for (std::size_t k = 1; k < pts.size(); ++k) {
      if (pts[k].win_rate >= s.threshold) {
        const CurvePoint& lo = pts[k - 1];
        const CurvePoint& hi = pts[k];
        const double t = (s.threshold - lo.win_rate) / (hi.win_rate - lo.win_rate);
        crossing = lo.step + t * (hi.step - lo.step);
        break;
      }
    }
  }
  if (!crossing) {
    throw Error(ErrorKind::kNeverReaches, "candidate '" + candidate.label + "' never reaches the baseline's final win rate " +
                                              format_real(s.threshold));
  }
  if (!(*crossing > 0.0)) throw Error(ErrorKind::kValidation, "candidate crosses the threshold at a non-positive step");
  s.candidate_step = *crossing;
  s.factor = s.baseline_step / s.candidate_step;
  return s;
}

std::string Speedup::to_tsv() const {
  return "factor\t" + format_real(factor) + "\nthreshold\t" + format_real(threshold) + "\ncandidate_step\t" +
         format_real(candidate_step) + "\nbaseline_step\t" + format_real(baseline_step) + "\n";
}

}  // namespace polytok
