#pragma once

// Reference implementations used only by tests. They share no code path with
// the library routines they check beyond the pretokenizer.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polytok::testing {

struct OracleLanguage {
  std::string code;
  std::string script;
  std::string family;
  std::uint64_t data_bytes;
};

// Direct evaluation of the bucketed weighting formula: for every unpinned
// language with data, w = data share * 1 / (number of unpinned languages with
// data sharing its script and family), renormalized to 1 - sum(pins).
std::map<std::string, long double> eq1_weights(const std::vector<OracleLanguage>& langs,
                                               const std::map<std::string, double>& pins);

struct OracleMerge {
  std::string left;
  std::string right;
  friend bool operator==(const OracleMerge&, const OracleMerge&) = default;
};

// Naive BPE: every step recounts all adjacent pairs of every word from
// scratch and rewrites every word. Ids follow the library's layout (specials,
// bytes, then new merge outputs) because the tie-break is defined on ids.
std::vector<OracleMerge> naive_bpe(const std::vector<std::string>& docs, std::size_t vocab_size,
                                   std::uint64_t min_frequency, std::size_t special_count);

}  // namespace polytok::testing
