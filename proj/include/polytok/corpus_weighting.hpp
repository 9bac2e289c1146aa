#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "polytok/corpus_store.hpp"
#include "polytok/lang_registry.hpp"

namespace polytok {

enum class WeightingMode { kUniversal, kUniform };

std::string_view to_string(WeightingMode m);
WeightingMode parse_weighting_mode(std::string_view s);

struct WeightTable {
  std::map<std::string, double> entries;  // iso code -> weight, sums to 1
  WeightingMode mode = WeightingMode::kUniversal;
  double pinned_total = 0.0;

  // "# mode=..." header, then "iso\tweight" lines in shortest round-trip form.
  std::string serialize() const;
  static WeightTable parse(std::string_view text);
};

// Universal: an unpinned language gets data share times 1/|bucket|, scaled so
// unpinned weights sum to 1 - pinned_total. Bucket sizes and the data
// denominator count only unpinned languages with data. Uniform: unpinned
// languages with data split 1 - pinned_total equally. Pinned languages get
// exactly their pinned fraction in both modes.
WeightTable compute_weights(const Registry& reg, WeightingMode mode);

struct SamplePlan {
  std::map<std::string, std::uint64_t> bytes_per_language;
  std::uint64_t total_bytes = 0;
  std::uint64_t seed = 0;

  std::string serialize() const;
};

// Largest-remainder apportionment of total_bytes; remainder ties go to the
// lexicographically smaller iso code. The budgets sum to total_bytes exactly.
SamplePlan make_sample_plan(const WeightTable& wt, std::uint64_t total_bytes, std::uint64_t seed);

struct SampledDocument {
  std::string iso_code;
  std::size_t index;  // into store.documents(iso_code)
};

// Per language, whole documents are taken in seeded shuffled passes over the
// language's documents (repeating passes when the corpus is smaller than the
// budget) until the budget is met or exceeded. The selection is then shuffled
// across languages with the plan seed.
std::vector<SampledDocument> draw_sample(const SamplePlan& plan, const CorpusStore& store);

// Writes the drawn documents, one per line.
void write_sample(const SamplePlan& plan, const CorpusStore& store, std::ostream& out);

}  // namespace polytok
