#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polytok/pretokenizer.hpp"

namespace polytok {

using TokenId = std::uint32_t;

struct Merge {
  TokenId left = 0;
  TokenId right = 0;
  TokenId result = 0;
};

// pad, bos, eos, unk and four spare slots.
std::vector<std::string> default_special_tokens();

// The first `count` names of pad, bos, eos, unk, reserved_0, reserved_1, ...
std::vector<std::string> make_special_tokens(std::size_t count);

struct TrainConfig {
  std::size_t vocab_size = 250'000;
  std::uint64_t min_frequency = 5;
  std::string pretokenizer_id{kO200kProfile};
  // Reserved at ids [0, n) and counted inside vocab_size.
  std::vector<std::string> special_tokens = default_special_tokens();

  // Throws Error(kValidation) unless vocab_size > 256 + specials, min_frequency
  // >= 1, specials are unique and non-empty, and the profile is registered.
  void validate() const;
};

struct Encoding {
  std::vector<TokenId> ids;
  std::vector<ByteSpan> byte_spans;  // one per id, contiguous, covering the input
};

// Byte-level BPE vocabulary: reserved special tokens at [0, S), the 256 byte
// tokens at [S, S + 256) in byte order, then one id per distinct merge output
// in creation order. A merge whose concatenation already exists reuses that id.
class Tokenizer {
 public:
  static constexpr int kFormatVersion = 1;

  static Tokenizer byte_level(std::vector<std::string> special_tokens = default_special_tokens(),
                              std::string pretokenizer_id = std::string(kO200kProfile));

  static Tokenizer from_json(std::string_view json);
  static Tokenizer load(const std::filesystem::path& path);
  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

  // Appends a merge of two existing, non-special tokens with the lowest
  // priority so far. Only used while building; a shared Tokenizer is never
  // mutated.
  TokenId append_merge(TokenId left, TokenId right);

  std::size_t vocab_size() const { return tokens_.size(); }
  std::size_t special_count() const { return specials_.size(); }
  const std::vector<std::string>& special_tokens() const { return specials_; }
  const std::string& pretokenizer_id() const { return pretokenizer_id_; }
  std::span<const Merge> merges() const { return merges_; }

  bool is_special(TokenId id) const { return id < specials_.size(); }
  TokenId byte_token(unsigned char b) const { return static_cast<TokenId>(specials_.size() + b); }
  // Raw bytes of a regular token, or the name of a special token.
  const std::string& token(TokenId id) const;
  std::optional<TokenId> find(std::string_view bytes) const;
  std::optional<TokenId> find_special(std::string_view name) const;

  Encoding encode(std::string_view text) const;
  std::vector<TokenId> encode_ids(std::string_view text) const;
  std::size_t count_tokens(std::string_view text) const;

  // Concatenated token bytes; special tokens decode to their names. Throws
  // Error(kOutOfRange) for ids >= vocab_size().
  std::string decode(std::span<const TokenId> ids) const;

 private:
  static std::uint64_t pair_key(TokenId l, TokenId r) { return (std::uint64_t{l} << 32) | r; }

  template <typename Sink>
  void encode_chunk(std::string_view text, ByteSpan chunk, Sink&& sink) const;

  std::string pretokenizer_id_;
  std::vector<std::string> specials_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;  // regular tokens only
  std::vector<Merge> merges_;
  std::unordered_map<std::uint64_t, std::uint32_t> merge_rank_;
};

// Accumulates pretoken chunk frequencies from a document stream.
class WordCounter {
 public:
  explicit WordCounter(std::string pretokenizer_id = std::string(kO200kProfile));

  void add_document(std::string_view doc);
  // Counts `docs` using up to `workers` threads.
  void add_documents(std::span<const std::string> docs, unsigned workers);
  void merge(const WordCounter& other);

  std::size_t document_count() const { return documents_; }
  std::size_t distinct_words() const { return counts_.size(); }
  // Sorted by chunk bytes.
  std::vector<std::pair<std::string, std::uint64_t>> sorted() const;

 private:
  std::string pretokenizer_id_;
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::size_t documents_ = 0;
};

// Greedy BPE: repeatedly merges the most frequent adjacent pair inside
// pretoken chunks until vocab_size is reached or the best pair falls below
// min_frequency. Equal counts break toward the pair whose newer operand is
// older, then the smaller left id, then the smaller right id. Output does not
// depend on `workers`. Throws Error(kEmptyInput) for an empty corpus.
Tokenizer train(std::span<const std::string> documents, const TrainConfig& cfg, unsigned workers = 1);
Tokenizer train(const WordCounter& counts, const TrainConfig& cfg, unsigned workers = 1);

}  // namespace polytok
