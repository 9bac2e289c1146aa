#include "polytok/corpus_weighting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polytok/error.hpp"
#include "polytok/random.hpp"
#include "polytok/text_io.hpp"

namespace polytok {

std::string_view to_string(WeightingMode m) {
  return m == WeightingMode::kUniversal ? "universal" : "uniform";
}

WeightingMode parse_weighting_mode(std::string_view s) {
  if (s == "universal") return WeightingMode::kUniversal;
  if (s == "uniform") return WeightingMode::kUniform;
  throw Error(ErrorKind::kValidation, "unknown weighting mode '" + std::string(s) + "' (expected universal|uniform)");
}

WeightTable compute_weights(const Registry& reg, WeightingMode mode) {
  if (reg.size() == 0) throw Error(ErrorKind::kEmptyInput, "registry is empty");
  const auto& pinned = reg.pinned();

  std::vector<const LanguageSpec*> unpinned;
  for (const auto& l : reg.languages()) {
    if (!pinned.contains(l.iso_code)) unpinned.push_back(&l);
  }
  if (unpinned.empty()) throw Error(ErrorKind::kValidation, "every language is pinned; nothing left to weight");

  const double data_total = std::accumulate(unpinned.begin(), unpinned.end(), 0.0,
                                            [](double acc, const LanguageSpec* l) { return acc + static_cast<double>(l->data_bytes); });
  if (data_total == 0.0) throw Error(ErrorKind::kEmptyInput, "all unpinned languages have zero data");

  WeightTable wt;
  wt.mode = mode;
  wt.pinned_total = reg.pinned_total();
  const double free_share = 1.0 - wt.pinned_total;

  std::vector<double> raw(unpinned.size(), 0.0);
  if (mode == WeightingMode::kUniversal) {
    for (std::size_t i = 0; i < unpinned.size(); ++i) {
      const LanguageSpec& l = *unpinned[i];
      if (l.data_bytes == 0) continue;
      std::size_t bucket_size = 0;
      for (const auto& code : reg.bucket_of(l.iso_code).members) {
        if (!pinned.contains(code) && reg.at(code).data_bytes > 0) ++bucket_size;
      }
      const double data_weight = static_cast<double>(l.data_bytes) / data_total;
      const double bucket_weight = 1.0 / static_cast<double>(bucket_size);
      raw[i] = data_weight * bucket_weight;
    }
  } else {
    for (std::size_t i = 0; i < unpinned.size(); ++i) raw[i] = unpinned[i]->data_bytes > 0 ? 1.0 : 0.0;
  }
  const double raw_total = std::accumulate(raw.begin(), raw.end(), 0.0);
  for (std::size_t i = 0; i < unpinned.size(); ++i) {
    wt.entries[unpinned[i]->iso_code] = free_share * raw[i] / raw_total;
  }
  for (const auto& [code, fraction] : pinned) wt.entries[code] = fraction;
  return wt;
}

std::string WeightTable::serialize() const {
  std::string out = "# mode=" + std::string(to_string(mode)) + " pinned_total=" + format_real(pinned_total) + "\n";
  for (const auto& [code, w] : entries) out += code + '\t' + format_real(w) + '\n';
  return out;
}

WeightTable WeightTable::parse(std::string_view text) {
  WeightTable wt;
  for (const std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (const auto field : split(trim(line.substr(1)), ' ')) {
        if (field.starts_with("mode=")) wt.mode = parse_weighting_mode(field.substr(5));
        if (field.starts_with("pinned_total=")) wt.pinned_total = parse_double(field.substr(13), "pinned_total");
      }
      continue;
    }
    const auto f = split(line, '\t');
    if (f.size() != 2) throw Error(ErrorKind::kParse, "weight line must be 'iso<TAB>weight': '" + std::string(line) + "'");
    const double w = parse_double(f[1], "weight");
    if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorKind::kParse, "weight out of [0, 1]: '" + std::string(line) + "'");
    if (!wt.entries.emplace(std::string(f[0]), w).second) {
      throw Error(ErrorKind::kDuplicateCode, "duplicate weight for '" + std::string(f[0]) + "'");
    }
  }
  if (wt.entries.empty()) throw Error(ErrorKind::kParse, "weight table is empty");
  return wt;
}

SamplePlan make_sample_plan(const WeightTable& wt, std::uint64_t total_bytes, std::uint64_t seed) {
  if (total_bytes == 0) throw Error(ErrorKind::kValidation, "total_bytes must be positive");
  if (wt.entries.empty()) throw Error(ErrorKind::kValidation, "weight table is empty");
  long double weight_sum = 0;
  for (const auto& [_, w] : wt.entries) weight_sum += w;
  if (!(weight_sum > 0)) throw Error(ErrorKind::kValidation, "weights sum to zero");

  struct Share {
    const std::string* code;
    std::uint64_t floor;
    long double remainder;
  };
  std::vector<Share> shares;
  std::uint64_t assigned = 0;
  for (const auto& [code, w] : wt.entries) {
    const long double quota = static_cast<long double>(w) / weight_sum * static_cast<long double>(total_bytes);
    const auto fl = static_cast<std::uint64_t>(std::floor(quota));
    shares.push_back({&code, fl, quota - static_cast<long double>(fl)});
    assigned += fl;
  }
  // Entries are already in code order, so a stable sort breaks remainder ties lexicographically.
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  if (assigned <= total_bytes) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return shares[a].remainder > shares[b].remainder; });
    for (std::size_t k = 0; assigned < total_bytes; ++k, ++assigned) ++shares[order[k % order.size()]].floor;
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return shares[a].remainder < shares[b].remainder; });
    for (std::size_t k = 0; assigned > total_bytes; ++k) {
      Share& s = shares[order[k % order.size()]];
      if (s.floor > 0) --s.floor, --assigned;
    }
  }

  SamplePlan plan;
  plan.total_bytes = total_bytes;
  plan.seed = seed;
  for (const auto& s : shares) plan.bytes_per_language[*s.code] = s.floor;
  return plan;
}

std::string SamplePlan::serialize() const {
  std::string out = "# total_bytes=" + std::to_string(total_bytes) + " seed=" + std::to_string(seed) + "\n";
  for (const auto& [code, bytes] : bytes_per_language) out += code + '\t' + std::to_string(bytes) + '\n';
  return out;
}

std::vector<SampledDocument> draw_sample(const SamplePlan& plan, const CorpusStore& store) {
  std::vector<SampledDocument> picked;
  for (const auto& [code, budget] : plan.bytes_per_language) {
    if (budget == 0) continue;
    const auto& docs = store.documents(code);
    if (docs.empty()) throw Error(ErrorKind::kEmptyInput, "corpus store has no documents for '" + code + "'");

    std::mt19937_64 rng(splitmix64(plan.seed ^ fnv1a(code)));
    std::vector<std::size_t> pass(docs.size());
    std::uint64_t taken = 0;
    while (taken < budget) {
      std::iota(pass.begin(), pass.end(), 0);
      seeded_shuffle(pass, rng);
      for (const std::size_t idx : pass) {
        picked.push_back({code, idx});
        taken += docs[idx].size();
        if (taken >= budget) break;
      }
    }
  }
  std::mt19937_64 rng(splitmix64(plan.seed));
  seeded_shuffle(picked, rng);
  return picked;
}

void write_sample(const SamplePlan& plan, const CorpusStore& store, std::ostream& out) {
  for (const auto& d : draw_sample(plan, store)) {
    const std::string& doc = store.documents(d.iso_code)[d.index];
    out.write(doc.data(), static_cast<std::streamsize>(doc.size()));
    out.put('\n');
  }
}

}  // namespace polytok
