#include "polytok/vocab_adaptation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <thread>

#include "polytok/error.hpp"
#include "polytok/random.hpp"
#include "polytok/text_io.hpp"

namespace polytok {
namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  return v;
}

// Runs fn(i) for every i in [0, count), striped across threads.
template <typename Fn>
void parallel_rows(std::size_t count, unsigned workers, Fn fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, count))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t rows, std::size_t dim) : dim_(dim), values_(rows * dim, 0.0f) {
  if (dim == 0) throw Error(ErrorKind::kValidation, "embedding dimension must be positive");
}

EmbeddingTable EmbeddingTable::from_bytes(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorKind::kIncompatibleFormat, "embedding file lacks the EMB1 header");
  }
  const std::uint32_t rows = get_u32(bytes, 4);
  const std::uint32_t dim = get_u32(bytes, 8);
  if (dim == 0) throw Error(ErrorKind::kIncompatibleFormat, "embedding file declares dim 0");
  const std::uint64_t expected = kHeaderSize + std::uint64_t{rows} * dim * 4;
  if (bytes.size() != expected) {
    throw Error(ErrorKind::kIncompatibleFormat, "embedding file size " + std::to_string(bytes.size()) +
                                                    " does not match header (" + std::to_string(expected) + ")");
  }
  EmbeddingTable t(rows, dim);
  for (std::size_t i = 0; i < t.values_.size(); ++i) {
    const float v = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
    if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, "embedding file contains a non-finite value");
    t.values_[i] = v;
  }
  return t;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) { return from_bytes(read_file(path)); }

std::string EmbeddingTable::to_bytes() const {
  std::string out(kMagic, 4);
  out.reserve(kHeaderSize + values_.size() * 4);
  put_u32(out, static_cast<std::uint32_t>(rows()));
  put_u32(out, static_cast<std::uint32_t>(dim_));
  put_u32(out, 0);
  for (const float v : values_) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

void EmbeddingTable::save(const std::filesystem::path& path) const { write_file(path, to_bytes()); }

// --- plan -----------------------------------------------------------------

AdaptationPlan plan_adaptation(const Tokenizer& old_tok, const Tokenizer& new_tok, InitMode init) {
  for (const Tokenizer* t : {&old_tok, &new_tok}) {
    for (int b = 0; b < 256; ++b) {
      if (t->token(t->byte_token(static_cast<unsigned char>(b))) != std::string(1, static_cast<char>(b))) {
        throw Error(ErrorKind::kIncompatibleFormat, "tokenizer is not byte-level");
      }
    }
  }
  AdaptationPlan plan;
  plan.old_vocab_size = old_tok.vocab_size();
  plan.new_vocab_size = new_tok.vocab_size();
  plan.init = init;

  std::vector<bool> old_used(old_tok.vocab_size(), false);
  for (TokenId id = 0; id < new_tok.vocab_size(); ++id) {
    const std::optional<TokenId> match = new_tok.is_special(id) ? old_tok.find_special(new_tok.token(id))
                                                                : old_tok.find(new_tok.token(id));
    if (match) {
      plan.shared.emplace_back(*match, id);
      old_used[*match] = true;
    } else {
      plan.novel.push_back(id);
    }
  }
  for (TokenId id = 0; id < old_tok.vocab_size(); ++id) {
    if (!old_used[id]) plan.dropped.push_back(id);
  }
  return plan;
}

std::string AdaptationPlan::serialize() const {
  std::string out;
  if (std::holds_alternative<MeanInit>(init)) {
    out += "#mode=mean\n";
  } else {
    const auto& r = std::get<RandomInit>(init);
    out += "#mode=random mean=" + format_real(r.mean) + " stddev=" + (r.stddev ? format_real(*r.stddev) : "shared") + "\n";
  }
  out += "#vocab old=" + std::to_string(old_vocab_size) + " new=" + std::to_string(new_vocab_size) + "\n";
  for (const auto& [o, n] : shared) out += "S\t" + std::to_string(o) + '\t' + std::to_string(n) + '\n';
  for (const TokenId n : novel) out += "N\t" + std::to_string(n) + '\n';
  for (const TokenId o : dropped) out += "D\t" + std::to_string(o) + '\n';
  return out;
}

AdaptationPlan AdaptationPlan::parse(std::string_view text) {
  AdaptationPlan plan;
  bool have_mode = false, have_vocab = false;
  const auto id = [](std::string_view s) { return static_cast<TokenId>(parse_u64(s, "token id")); };
  for (const std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    if (line.starts_with("#mode=")) {
      const auto fields = split(line.substr(6), ' ');
      if (fields[0] == "mean") {
        plan.init = MeanInit{};
      } else if (fields[0] == "random") {
        RandomInit r;
        for (std::size_t i = 1; i < fields.size(); ++i) {
          if (fields[i].starts_with("mean=")) r.mean = parse_double(fields[i].substr(5), "mean");
          if (fields[i].starts_with("stddev=") && fields[i].substr(7) != "shared") {
            r.stddev = parse_double(fields[i].substr(7), "stddev");
          }
        }
        plan.init = r;
      } else {
        throw Error(ErrorKind::kParse, "unknown init mode '" + std::string(fields[0]) + "'");
      }
      have_mode = true;
      continue;
    }
    if (line.starts_with("#vocab ")) {
      for (const auto f : split(line.substr(7), ' ')) {
        if (f.starts_with("old=")) plan.old_vocab_size = parse_u64(f.substr(4), "old vocab size");
        if (f.starts_with("new=")) plan.new_vocab_size = parse_u64(f.substr(4), "new vocab size");
      }
      have_vocab = true;
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f[0] == "S" && f.size() == 3) {
      plan.shared.emplace_back(id(f[1]), id(f[2]));
    } else if (f[0] == "N" && f.size() == 2) {
      plan.novel.push_back(id(f[1]));
    } else if (f[0] == "D" && f.size() == 2) {
      plan.dropped.push_back(id(f[1]));
    } else {
      throw Error(ErrorKind::kParse, "malformed plan line '" + std::string(line) + "'");
    }
  }
  if (!have_mode || !have_vocab) throw Error(ErrorKind::kParse, "plan is missing its #mode= or #vocab header");
  if (plan.shared.size() + plan.novel.size() != plan.new_vocab_size ||
      plan.shared.size() + plan.dropped.size() != plan.old_vocab_size) {
    throw Error(ErrorKind::kParse, "plan coverage does not match its vocabulary sizes");
  }
  std::vector<bool> seen(plan.new_vocab_size, false);
  const auto mark = [&](TokenId n) {
    if (n >= seen.size() || seen[n]) throw Error(ErrorKind::kParse, "plan covers new id " + std::to_string(n) + " twice or out of range");
    seen[n] = true;
  };
  for (const auto& [o, n] : plan.shared) {
    if (o >= plan.old_vocab_size) throw Error(ErrorKind::kParse, "plan old id out of range");
    mark(n);
  }
  for (const TokenId n : plan.novel) mark(n);
  return plan;
}

// --- apply ----------------------------------------------------------------

double counter_normal(std::uint64_t seed, std::uint64_t row, std::uint64_t col) {
  const std::uint64_t base = splitmix64(seed) ^ splitmix64(row * 0x9E3779B97F4A7C15ull + col);
  const std::uint64_t a = splitmix64(base);
  const std::uint64_t b = splitmix64(a ^ 0xD1B54A32D192ED03ull);
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

EmbeddingTable apply_adaptation(const AdaptationPlan& plan, const EmbeddingTable& old_emb, std::uint64_t seed,
                                unsigned workers) {
  if (old_emb.rows() != plan.old_vocab_size) {
    throw Error(ErrorKind::kDimensionMismatch, "embedding table has " + std::to_string(old_emb.rows()) +
                                                   " rows but the old vocabulary has " +
                                                   std::to_string(plan.old_vocab_size));
  }
  const std::size_t dim = old_emb.dim();
  EmbeddingTable out(plan.new_vocab_size, dim);

  for (const auto& [o, n] : plan.shared) {
    const auto src = old_emb.row(o);
    std::copy(src.begin(), src.end(), out.row(n).begin());
  }
  if (plan.novel.empty()) return out;

  if (std::holds_alternative<MeanInit>(plan.init)) {
    if (plan.shared.empty()) throw Error(ErrorKind::kEmptyInput, "mean initialization needs at least one shared token");
    std::vector<long double> acc(dim, 0.0L);
    for (const auto& [o, n] : plan.shared) {
      const auto src = old_emb.row(o);
      for (std::size_t c = 0; c < dim; ++c) acc[c] += src[c];
    }
    std::vector<float> mean(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      mean[c] = static_cast<float>(acc[c] / static_cast<long double>(plan.shared.size()));
    }
    parallel_rows(plan.novel.size(), workers, [&](std::size_t k) {
      std::copy(mean.begin(), mean.end(), out.row(plan.novel[k]).begin());
    });
    return out;
  }

  const auto& r = std::get<RandomInit>(plan.init);
  std::vector<double> sigma(dim, r.stddev.value_or(0.0));
  if (!r.stddev) {
    if (plan.shared.empty()) {
      throw Error(ErrorKind::kEmptyInput, "random initialization without an explicit stddev needs shared tokens");
    }
    std::vector<long double> sum(dim, 0.0L), sum_sq(dim, 0.0L);
    for (const auto& [o, n] : plan.shared) {
      const auto src = old_emb.row(o);
      for (std::size_t c = 0; c < dim; ++c) {
        sum[c] += src[c];
        sum_sq[c] += static_cast<long double>(src[c]) * src[c];
      }
    }
    const auto count = static_cast<long double>(plan.shared.size());
    for (std::size_t c = 0; c < dim; ++c) {
      const long double m = sum[c] / count;
      sigma[c] = static_cast<double>(std::sqrt(std::max(0.0L, sum_sq[c] / count - m * m)));
    }
  }
  parallel_rows(plan.novel.size(), workers, [&](std::size_t k) {
    const TokenId n = plan.novel[k];
    auto dst = out.row(n);
    for (std::size_t c = 0; c < dim; ++c) {
      dst[c] = static_cast<float>(r.mean + sigma[c] * counter_normal(seed, n, c));
    }
  });
  return out;
}

// --- coverage -------------------------------------------------------------

std::map<std::string, NovelCoverage> adaptation_report(const AdaptationPlan& plan, const Tokenizer& new_tok,
                                                       const Registry& reg, const CorpusStore& probe) {
  if (new_tok.vocab_size() != plan.new_vocab_size) {
    throw Error(ErrorKind::kDimensionMismatch, "plan was built for a different new tokenizer");
  }
  std::vector<bool> is_novel(plan.new_vocab_size, false);
  for (const TokenId n : plan.novel) is_novel[n] = true;

  std::map<std::string, NovelCoverage> out;
  for (const auto& lang : reg.languages()) {
    if (!probe.has(lang.iso_code)) continue;
    NovelCoverage cov;
    for (const auto& doc : probe.documents(lang.iso_code)) {
      for (const TokenId id : new_tok.encode_ids(doc)) {
        ++cov.total_tokens;
        if (is_novel[id]) ++cov.novel_tokens;
      }
    }
    out.emplace(lang.iso_code, cov);
  }
  return out;
}

std::string coverage_to_tsv(const std::map<std::string, NovelCoverage>& report) {
  std::string out = "# iso_code\tnovel_tokens\ttotal_tokens\tnovel_fraction\n";
  for (const auto& [code, c] : report) {
    out += code + '\t' + std::to_string(c.novel_tokens) + '\t' + std::to_string(c.total_tokens) + '\t' +
           format_real(c.novel_fraction()) + '\n';
  }
  return out;
}

}  // namespace polytok
