#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "polytok/bpe.hpp"
#include "polytok/corpus_store.hpp"
#include "polytok/lang_registry.hpp"

namespace polytok {

// Row-major float32 table, one row per token id.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, std::size_t dim);

  // Binary layout: "EMB1", u32 rows, u32 dim, u32 reserved (all little-endian),
  // then rows * dim little-endian float32 values.
  static EmbeddingTable from_bytes(std::string_view bytes);
  static EmbeddingTable load(const std::filesystem::path& path);
  std::string to_bytes() const;
  void save(const std::filesystem::path& path) const;

  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<float> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  const std::vector<float>& values() const { return values_; }

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

// Novel rows get the mean of all shared rows.
struct MeanInit {
  friend bool operator==(const MeanInit&, const MeanInit&) = default;
};

// Novel rows get i.i.d. normal draws. Without an explicit stddev, each
// component uses the population standard deviation of that component over
// the shared rows.
struct RandomInit {
  double mean = 0.0;
  std::optional<double> stddev;
  friend bool operator==(const RandomInit&, const RandomInit&) = default;
};

using InitMode = std::variant<MeanInit, RandomInit>;

struct AdaptationPlan {
  std::vector<std::pair<TokenId, TokenId>> shared;  // (old id, new id), by new id
  std::vector<TokenId> novel;                       // new ids without an old counterpart
  std::vector<TokenId> dropped;                     // old ids absent from the new vocabulary
  std::size_t old_vocab_size = 0;
  std::size_t new_vocab_size = 0;
  InitMode init = MeanInit{};

  // "#mode=..." and "#vocab ..." headers, then S/N/D lines.
  std::string serialize() const;
  static AdaptationPlan parse(std::string_view text);
};

// Regular tokens are shared when their bytes match exactly; special tokens
// when their names match.
AdaptationPlan plan_adaptation(const Tokenizer& old_tok, const Tokenizer& new_tok, InitMode init);

// Shared rows are copied bit-exactly. Output depends only on (plan, old, seed),
// not on `workers`. Throws Error(kDimensionMismatch) if old has the wrong row
// count and Error(kEmptyInput) if the initializer needs shared rows and
// there are none.
EmbeddingTable apply_adaptation(const AdaptationPlan& plan, const EmbeddingTable& old_emb, std::uint64_t seed,
                                unsigned workers = 1);

// Standard normal draw for one table cell, a pure function of its arguments.
double counter_normal(std::uint64_t seed, std::uint64_t row, std::uint64_t col);

struct NovelCoverage {
  std::uint64_t novel_tokens = 0;
  std::uint64_t total_tokens = 0;
  double novel_fraction() const {
    return total_tokens == 0 ? 0.0 : static_cast<double>(novel_tokens) / static_cast<double>(total_tokens);
  }
};

// Per registered language present in `probe`: how many tokens of the
// new-tokenizer encoding start from initialized rather than carried-over rows.
std::map<std::string, NovelCoverage> adaptation_report(const AdaptationPlan& plan, const Tokenizer& new_tok,
                                                       const Registry& reg, const CorpusStore& probe);

std::string coverage_to_tsv(const std::map<std::string, NovelCoverage>& report);

}  // namespace polytok
