#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polytok/bpe.hpp"
#include "polytok/corpus_store.hpp"

namespace polytok {

struct TokenCount {
  std::uint64_t tokens = 0;
  std::uint64_t bytes = 0;

  // Tokens per UTF-8 byte; lower is better.
  double tokens_per_byte() const { return static_cast<double>(tokens) / static_cast<double>(bytes); }
};

// Counts tokens over a document stream; documents are encoded independently.
// Throws Error(kEmptyInput) if the stream has no bytes.
TokenCount count_stream(const Tokenizer& tok, const std::vector<std::string>& documents);

// Tokens-per-byte for every language in `corpus`, evaluated `workers`
// languages at a time.
std::map<std::string, TokenCount> compression(const Tokenizer& tok, const CorpusStore& corpus, unsigned workers = 1);

struct LanguageCompression {
  double candidate_tpb = 0.0;
  double reference_tpb = 0.0;
  double ratio = 0.0;  // candidate_tpb / reference_tpb; below 1 favors the candidate
  std::uint64_t bytes_evaluated = 0;
};

struct CompressionReport {
  std::map<std::string, LanguageCompression> per_language;
  double macro_average_ratio = 0.0;  // unweighted mean over languages

  // "iso\tcandidate_tpb\treference_tpb\tratio\tbytes" lines, then
  // "MACRO\t<macro ratio>".
  std::string to_tsv() const;
};

CompressionReport compression_ratio(const Tokenizer& candidate, const Tokenizer& reference,
                                    const CorpusStore& corpus, unsigned workers = 1);

}  // namespace polytok
