#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "polytok/adaptation_metrics.hpp"
#include "polytok/bpe.hpp"
#include "polytok/compression.hpp"
#include "polytok/corpus_store.hpp"
#include "polytok/corpus_weighting.hpp"
#include "polytok/error.hpp"
#include "polytok/hashing.hpp"
#include "polytok/lang_registry.hpp"
#include "polytok/text_io.hpp"
#include "polytok/vocab_adaptation.hpp"

namespace polytok::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

// Diagnostics go to `err`; POLYTOK_LOG picks the level (trace, debug, info,
// warn, error, critical, off; default warn).
std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, /*force_flush=*/true);
  auto log = std::make_shared<spdlog::logger>("polytok", std::move(sink));
  log->set_pattern("polytok: %l: %v");
  const char* env = std::getenv("POLYTOK_LOG");
  log->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  return log;
}

using Log = spdlog::logger;

// Records what a run read and wrote. Worker count and output directory are
// deliberately absent so reruns with different parallelism hash the same.
class Manifest {
 public:
  Manifest(std::string command, fs::path out_dir) : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

  json& config() { return config_; }

  void input_file(const std::string& path) { inputs_[path] = sha256_file(path); }
  void input_tree(const std::string& path) {
    if (!fs::is_directory(path)) throw Error(ErrorKind::kNotFound, "directory '" + path + "' does not exist");
    inputs_[path] = sha256_tree(path);
  }

  fs::path output(const std::string& name, std::string_view contents) {
    const fs::path p = out_dir_ / name;
    write_file(p, contents);
    outputs_[name] = sha256_hex(contents);
    return p;
  }

  void write() {
    json doc;
    doc["tool"] = "polytok";
    doc["version"] = kVersion;
    doc["command"] = command_;
    doc["config"] = config_;
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    write_file(out_dir_ / "manifest.json", doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_dir_;
  json config_ = json::object();
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

struct Globals {
  std::uint64_t seed = 0;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out = ".";
};

// Flag values as given, or their defaults, keyed by long flag name.
void record_config(const CLI::App& sub, json& config) {
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_expected_max() > 1 || opt->get_items_expected_max() > 1) {
        config[name] = res;
      } else if (opt->get_type_size() == 0) {
        config[name] = true;
      } else {
        config[name] = res.empty() ? std::string() : res.back();
      }
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    }
  }
}

std::vector<std::string> lines_of(const std::string& path) {
  std::vector<std::string> out;
  const std::string text = read_file(path);
  for (const auto line : split_lines(text)) out.emplace_back(line);
  return out;
}

// --- subcommands -------------------------------------------------------------

struct WeightsArgs {
  std::string registry;
  std::string mode = "universal";
  std::vector<std::string> pins;
};

void cmd_weights(const WeightsArgs& a, Manifest& m, std::ostream& out) {
  std::map<std::string, double> pinned;
  for (const auto& p : a.pins) {
    auto [code, fraction] = parse_pin(p);
    if (!pinned.emplace(code, fraction).second) throw Error(ErrorKind::kValidation, "language '" + code + "' pinned twice");
  }
  const WeightingMode mode = parse_weighting_mode(a.mode);
  const Registry reg = load_registry(a.registry, pinned);
  m.input_file(a.registry);
  const WeightTable wt = compute_weights(reg, mode);
  out << "wrote " << m.output("weights.tsv", wt.serialize()).string() << " (" << wt.entries.size() << " languages)\n";
}

struct SampleArgs {
  std::string weights;
  std::string corpus;
  std::uint64_t total_bytes = 0;
};

void cmd_sample(const SampleArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  const WeightTable wt = WeightTable::parse(read_file(a.weights));
  m.input_file(a.weights);
  m.input_tree(a.corpus);
  const CorpusStore store = CorpusStore::load(a.corpus, g.workers);
  const SamplePlan plan = make_sample_plan(wt, a.total_bytes, g.seed);
  std::ostringstream sample;
  write_sample(plan, store, sample);
  m.output("sample_plan.tsv", plan.serialize());
  out << "wrote " << m.output("sample.txt", sample.str()).string() << " (" << sample.str().size() << " bytes)\n";
}

struct TrainArgs {
  std::vector<std::string> inputs;
  std::string corpus;
  std::size_t vocab_size = 250'000;
  std::uint64_t min_frequency = 5;
  std::size_t specials = 8;
  std::string pretokenizer{kO200kProfile};
};

void cmd_train(const TrainArgs& a, const Globals& g, Manifest& m, Log& log, std::ostream& out) {
  TrainConfig cfg;
  cfg.vocab_size = a.vocab_size;
  cfg.min_frequency = a.min_frequency;
  cfg.special_tokens = make_special_tokens(a.specials);
  cfg.pretokenizer_id = a.pretokenizer;
  cfg.validate();
  if (a.inputs.empty() && a.corpus.empty()) throw Error(ErrorKind::kValidation, "train needs --input or --corpus");

  WordCounter counts(cfg.pretokenizer_id);
  for (const auto& path : a.inputs) {
    const auto docs = lines_of(path);
    m.input_file(path);
    counts.add_documents(docs, g.workers);
  }
  if (!a.corpus.empty()) {
    m.input_tree(a.corpus);
    const CorpusStore store = CorpusStore::load(a.corpus, g.workers);
    for (const auto& code : store.languages()) counts.add_documents(store.documents(code), g.workers);
  }
  log.info("counted " + std::to_string(counts.distinct_words()) + " distinct pretokens in " +
           std::to_string(counts.document_count()) + " documents");
  const Tokenizer tok = train(counts, cfg, g.workers);
  out << "wrote " << m.output("tokenizer.json", tok.to_json()).string() << " (" << tok.vocab_size() << " tokens, "
      << tok.merges().size() << " merges)\n";
}

struct CodecArgs {
  std::string tokenizer;
  std::string input;
};

void cmd_encode(const CodecArgs& a, Manifest& m, std::ostream& out) {
  const Tokenizer tok = Tokenizer::load(a.tokenizer);
  m.input_file(a.tokenizer);
  const auto lines = lines_of(a.input);
  m.input_file(a.input);
  std::string text;
  for (const auto& line : lines) {
    const auto ids = tok.encode_ids(line);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) text += ' ';
      text += std::to_string(ids[i]);
    }
    text += '\n';
  }
  out << "wrote " << m.output("encoded.txt", text).string() << '\n';
}

void cmd_decode(const CodecArgs& a, Manifest& m, std::ostream& out) {
  const Tokenizer tok = Tokenizer::load(a.tokenizer);
  m.input_file(a.tokenizer);
  const auto lines = lines_of(a.input);
  m.input_file(a.input);
  std::string text;
  for (const auto& line : lines) {
    std::vector<TokenId> ids;
    for (const auto f : split(line, ' ')) {
      if (f.empty()) continue;
      const std::uint64_t v = parse_u64(f, "token id");
      if (v > std::numeric_limits<TokenId>::max()) throw Error(ErrorKind::kOutOfRange, "token id " + std::string(f) + " out of range");
      ids.push_back(static_cast<TokenId>(v));
    }
    text += tok.decode(ids);
    text += '\n';
  }
  out << "wrote " << m.output("decoded.txt", text).string() << '\n';
}

struct CompressArgs {
  std::string candidate;
  std::string reference;
  std::string corpus;
};

void cmd_compress(const CompressArgs& a, const Globals& g, Manifest& m, std::ostream& out) {
  const Tokenizer cand = Tokenizer::load(a.candidate);
  m.input_file(a.candidate);
  const Tokenizer ref = Tokenizer::load(a.reference);
  m.input_file(a.reference);
  m.input_tree(a.corpus);
  const CorpusStore store = CorpusStore::load(a.corpus, g.workers);
  const CompressionReport report = compression_ratio(cand, ref, store, g.workers);
  m.output("compression.tsv", report.to_tsv());
  out << "macro ratio " << format_real(report.macro_average_ratio) << " over " << report.per_language.size()
      << " languages\n";
}

struct AdaptArgs {
  std::string old_tokenizer;
  std::string new_tokenizer;
  std::string plan;
  std::string embeddings;
  std::string init = "mean";
  double init_mean = 0.0;
  std::optional<double> init_std;
  std::string probe_corpus;
  std::string registry;
};

void cmd_adapt(const AdaptArgs& a, const Globals& g, Manifest& m, Log& log, std::ostream& out) {
  InitMode init;
  if (a.init == "mean") {
    init = MeanInit{};
  } else if (a.init == "random") {
    if (a.init_std && !(*a.init_std > 0.0)) throw Error(ErrorKind::kValidation, "--init-std must be positive");
    init = RandomInit{a.init_mean, a.init_std};
  } else {
    throw Error(ErrorKind::kValidation, "unknown --init '" + a.init + "' (expected mean|random)");
  }

  std::optional<Tokenizer> new_tok;
  if (!a.new_tokenizer.empty()) {
    new_tok = Tokenizer::load(a.new_tokenizer);
    m.input_file(a.new_tokenizer);
  }
  AdaptationPlan plan;
  if (!a.plan.empty()) {
    plan = AdaptationPlan::parse(read_file(a.plan));
    m.input_file(a.plan);
  } else {
    if (a.old_tokenizer.empty() || !new_tok) {
      throw Error(ErrorKind::kValidation, "adapt needs --plan or both --old-tokenizer and --new-tokenizer");
    }
    const Tokenizer old_tok = Tokenizer::load(a.old_tokenizer);
    m.input_file(a.old_tokenizer);
    plan = plan_adaptation(old_tok, *new_tok, init);
  }
  m.output("adaptation_plan.tsv", plan.serialize());
  log.info("shared " + std::to_string(plan.shared.size()) + ", novel " + std::to_string(plan.novel.size()) +
           ", dropped " + std::to_string(plan.dropped.size()));

  if (!a.embeddings.empty()) {
    const EmbeddingTable old_emb = EmbeddingTable::load(a.embeddings);
    m.input_file(a.embeddings);
    const EmbeddingTable adapted = apply_adaptation(plan, old_emb, g.seed, g.workers);
    m.output("embeddings.emb", adapted.to_bytes());
  }

  if (!a.probe_corpus.empty()) {
    if (a.registry.empty() || !new_tok) {
      throw Error(ErrorKind::kValidation, "--probe-corpus needs --registry and --new-tokenizer");
    }
    const Registry reg = load_registry(a.registry);
    m.input_file(a.registry);
    m.input_tree(a.probe_corpus);
    const CorpusStore probe = CorpusStore::load(a.probe_corpus, g.workers);
    m.output("coverage.tsv", coverage_to_tsv(adaptation_report(plan, *new_tok, reg, probe)));
  }
  out << "shared " << plan.shared.size() << " novel " << plan.novel.size() << " dropped " << plan.dropped.size()
      << '\n';
}

struct PromptsArgs {
  std::string input;
};

void cmd_prompts(const PromptsArgs& a, Manifest& m, std::ostream& out) {
  const auto lines = lines_of(a.input);
  m.input_file(a.input);
  std::string text;
  std::size_t n = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const auto f = split(lines[i], '\t');
    if (f.size() != 4) {
      throw Error(ErrorKind::kParse, "prompt batch line " + std::to_string(i + 1) +
                                         ": expected example_id, instruction, completion_a, completion_b");
    }
    const JudgePrompt p = emit_judge_prompt(unescape_field(f[1]), unescape_field(f[2]), unescape_field(f[3]));
    json rec;
    rec["example_id"] = std::string(f[0]);
    rec["system"] = p.system;
    rec["user"] = p.user;
    text += rec.dump() + "\n";
    ++n;
  }
  m.output("prompts.jsonl", text);
  out << "wrote " << n << " prompts\n";
}

struct WinRateArgs {
  std::string verdicts;
  std::vector<std::string> subsets;
  std::string candidate_position = "A";
  std::string registry;
};

void cmd_winrate(const WinRateArgs& a, Manifest& m, Log& log, std::ostream& out) {
  WinRateOptions opts;
  if (a.candidate_position == "A") {
    opts.candidate = Verdict::kA;
  } else if (a.candidate_position == "B") {
    opts.candidate = Verdict::kB;
  } else {
    throw Error(ErrorKind::kValidation, "--candidate-position must be A or B");
  }
  std::map<std::string, std::vector<std::string>> subsets;
  for (const auto& s : a.subsets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::kValidation, "subset must look like name=iso,iso: '" + s + "'");
    auto& members = subsets[s.substr(0, eq)];
    for (const auto code : split(std::string_view(s).substr(eq + 1), ',')) {
      if (!code.empty()) members.emplace_back(code);
    }
  }
  if (!a.registry.empty()) {
    const Registry reg = load_registry(a.registry);
    m.input_file(a.registry);
    std::set<std::string> codes;
    for (const auto& l : reg.languages()) codes.insert(l.iso_code);
    opts.registered = std::move(codes);
  }
  const auto records = parse_verdict_file(read_file(a.verdicts));
  m.input_file(a.verdicts);
  const WinRateReport report = win_rate(records, subsets, opts);
  if (report.unparseable > 0) log.warn(std::to_string(report.unparseable) + " unparseable verdicts excluded");
  m.output("winrate.tsv", report.to_tsv());
  for (const auto& [name, avg] : report.subset_averages) out << name << '\t' << format_real(avg) << '\n';
}

struct SpeedupArgs {
  std::string candidate;
  std::string baseline;
};

void cmd_speedup(const SpeedupArgs& a, Manifest& m, std::ostream& out) {
  const auto cand = AdaptationCurve::parse(read_file(a.candidate), "candidate");
  m.input_file(a.candidate);
  const auto base = AdaptationCurve::parse(read_file(a.baseline), "baseline");
  m.input_file(a.baseline);
  const Speedup s = speedup_factor(cand, base);
  m.output("speedup.tsv", s.to_tsv());
  out << "factor\t" << format_real(s.factor) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"polytok: multilingual tokenizer training and vocabulary adaptation toolkit", "polytok"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  WeightsArgs weights;
  auto* weights_cmd = app.add_subcommand("weights", "Compute per-language sampling weights");
  weights_cmd->add_option("--registry", weights.registry, "Language registry TSV")->required();
  weights_cmd->add_option("--mode", weights.mode, "universal or uniform")->capture_default_str();
  weights_cmd->add_option("--pin", weights.pins, "Fixed share, e.g. eng=0.30 (repeatable)");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a weighted training sample from a corpus store");
  sample_cmd->add_option("--weights", sample.weights, "Weight table from `weights`")->required();
  sample_cmd->add_option("--corpus", sample.corpus, "Corpus store directory")->required();
  sample_cmd->add_option("--total-bytes", sample.total_bytes, "Sample size in bytes")->required();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a byte-level BPE tokenizer");
  train_cmd->add_option("--input", train_args.inputs, "Text file, one document per line (repeatable)");
  train_cmd->add_option("--corpus", train_args.corpus, "Corpus store directory");
  train_cmd->add_option("--vocab-size", train_args.vocab_size, "Vocabulary size including special tokens")
      ->capture_default_str();
  train_cmd->add_option("--min-frequency", train_args.min_frequency, "Minimum pair count to merge")
      ->capture_default_str();
  train_cmd->add_option("--specials", train_args.specials, "Number of reserved special tokens")->capture_default_str();
  train_cmd->add_option("--pretokenizer", train_args.pretokenizer, "Pretokenizer profile")->capture_default_str();

  CodecArgs encode;
  auto* encode_cmd = app.add_subcommand("encode", "Encode each input line to token ids");
  encode_cmd->add_option("--tokenizer", encode.tokenizer, "Tokenizer file")->required();
  encode_cmd->add_option("--input", encode.input, "Text file")->required();

  CodecArgs decode;
  auto* decode_cmd = app.add_subcommand("decode", "Decode lines of space-separated token ids");
  decode_cmd->add_option("--tokenizer", decode.tokenizer, "Tokenizer file")->required();
  decode_cmd->add_option("--input", decode.input, "Id file")->required();

  CompressArgs compress;
  auto* compress_cmd = app.add_subcommand("compress", "Compression ratio of a candidate against a reference tokenizer");
  compress_cmd->add_option("--candidate", compress.candidate, "Candidate tokenizer")->required();
  compress_cmd->add_option("--reference", compress.reference, "Reference tokenizer")->required();
  compress_cmd->add_option("--corpus", compress.corpus, "Evaluation corpus store")->required();

  AdaptArgs adapt;
  auto* adapt_cmd = app.add_subcommand("adapt", "Map an embedding table onto a new tokenizer");
  adapt_cmd->add_option("--old-tokenizer", adapt.old_tokenizer, "Tokenizer the embeddings were trained with");
  adapt_cmd->add_option("--new-tokenizer", adapt.new_tokenizer, "Replacement tokenizer");
  adapt_cmd->add_option("--plan", adapt.plan, "Existing adaptation plan (instead of two tokenizers)");
  adapt_cmd->add_option("--embeddings", adapt.embeddings, "EMB1 embedding table to adapt");
  adapt_cmd->add_option("--init", adapt.init, "Novel-row initializer: mean or random")->capture_default_str();
  adapt_cmd->add_option("--init-mean", adapt.init_mean, "Normal mean for random init")->capture_default_str();
  adapt_cmd->add_option("--init-std", adapt.init_std, "Normal stddev for random init (default: per-component std of shared rows)");
  adapt_cmd->add_option("--probe-corpus", adapt.probe_corpus, "Corpus store for the novel-token coverage report");
  adapt_cmd->add_option("--registry", adapt.registry, "Language registry for the coverage report");

  PromptsArgs prompts;
  auto* prompts_cmd = app.add_subcommand("prompts", "Emit pairwise judge prompts");
  prompts_cmd->add_option("--input", prompts.input, "Batch TSV: example_id, instruction, completion_a, completion_b")
      ->required();

  WinRateArgs winrate;
  auto* winrate_cmd = app.add_subcommand("winrate", "Aggregate judge verdicts into win rates");
  winrate_cmd->add_option("--verdicts", winrate.verdicts, "Verdict TSV")->required();
  winrate_cmd->add_option("--subset", winrate.subsets, "Named language subset, e.g. expanded=ell,hin (repeatable)");
  winrate_cmd->add_option("--candidate-position", winrate.candidate_position, "Position of the candidate: A or B")
      ->capture_default_str();
  winrate_cmd->add_option("--registry", winrate.registry, "Reject verdicts for languages not in this registry");

  SpeedupArgs speedup;
  auto* speedup_cmd = app.add_subcommand("speedup", "Adaptation speedup between two win-rate curves");
  speedup_cmd->add_option("--candidate", speedup.candidate, "Candidate curve TSV")->required();
  speedup_cmd->add_option("--baseline", speedup.baseline, "Baseline curve TSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto logger = make_logger(err);
  Log& log = *logger;
  CLI::App* sub = app.get_subcommands().front();
  try {
    fs::create_directories(g.out);
    Manifest m(sub->get_name(), g.out);
    m.config()["seed"] = g.seed;
    record_config(*sub, m.config());
    log.debug("running " + sub->get_name() + " with " + std::to_string(g.workers) + " workers");

    if (sub == weights_cmd) cmd_weights(weights, m, out);
    else if (sub == sample_cmd) cmd_sample(sample, g, m, out);
    else if (sub == train_cmd) cmd_train(train_args, g, m, log, out);
    else if (sub == encode_cmd) cmd_encode(encode, m, out);
    else if (sub == decode_cmd) cmd_decode(decode, m, out);
    else if (sub == compress_cmd) cmd_compress(compress, g, m, out);
    else if (sub == adapt_cmd) cmd_adapt(adapt, g, m, log, out);
    else if (sub == prompts_cmd) cmd_prompts(prompts, m, out);
    else if (sub == winrate_cmd) cmd_winrate(winrate, m, log, out);
    else if (sub == speedup_cmd) cmd_speedup(speedup, m, out);
    m.write();
  } catch (const Error& e) {
    log.error(e.what());
    return is_validation_error(e.kind()) ? 2 : 3;
  } catch (const fs::filesystem_error& e) {
    log.error(e.what());
    return 3;
  } catch (const std::exception& e) {
    log.error(e.what());
    return 3;
  }
  return 0;
}

}  // namespace polytok::cli
