#include "oracles.hpp"

#include <algorithm>
#include <tuple>

#include "polytok/pretokenizer.hpp"

namespace polytok::testing {

std::map<std::string, long double> eq1_weights(const std::vector<OracleLanguage>& langs,
                                               const std::map<std::string, double>& pins) {
  long double pinned = 0;
  for (const auto& [c, f] : pins) pinned += f;

  long double data_total = 0;
  for (const auto& l : langs) {
    if (!pins.count(l.code)) data_total += l.data_bytes;
  }
  std::map<std::string, long double> raw;
  long double raw_total = 0;
  for (const auto& l : langs) {
    if (pins.count(l.code)) continue;
    long double r = 0;
    if (l.data_bytes > 0) {
      int same_bucket = 0;
      for (const auto& m : langs) {
        if (!pins.count(m.code) && m.data_bytes > 0 && m.script == l.script && m.family == l.family) ++same_bucket;
      }
      r = (static_cast<long double>(l.data_bytes) / data_total) * (1.0L / same_bucket);
    }
    raw[l.code] = r;
    raw_total += r;
  }
  std::map<std::string, long double> w;
  for (const auto& [code, r] : raw) w[code] = (1.0L - pinned) * r / raw_total;
  for (const auto& [code, f] : pins) w[code] = f;
  return w;
}

std::vector<OracleMerge> naive_bpe(const std::vector<std::string>& docs, std::size_t vocab_size,
                                   std::uint64_t min_frequency, std::size_t special_count) {
  std::map<std::string, std::uint64_t> word_freq;
  for (const auto& d : docs) {
    for (auto chunk : pretokenize(d, kO200kProfile)) ++word_freq[std::string(chunk)];
  }

  std::vector<std::string> id_bytes(special_count);
  std::map<std::string, std::uint32_t> id_of;
  for (int b = 0; b < 256; ++b) {
    id_of[std::string(1, static_cast<char>(b))] = static_cast<std::uint32_t>(id_bytes.size());
    id_bytes.emplace_back(1, static_cast<char>(b));
  }

  std::vector<std::pair<std::vector<std::uint32_t>, std::uint64_t>> words;
  for (const auto& [w, n] : word_freq) {
    std::vector<std::uint32_t> syms;
    for (const char c : w) syms.push_back(id_of[std::string(1, c)]);
    words.emplace_back(std::move(syms), n);
  }

  std::vector<OracleMerge> merges;
  while (id_bytes.size() < vocab_size) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
    for (const auto& [syms, n] : words) {
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) counts[{syms[i], syms[i + 1]}] += n;
    }
    bool found = false;
    std::pair<std::uint32_t, std::uint32_t> best{};
    std::uint64_t best_count = 0;
    for (const auto& [p, n] : counts) {
      const auto key = std::make_tuple(std::max(p.first, p.second), p.first, p.second);
      const auto best_key = std::make_tuple(std::max(best.first, best.second), best.first, best.second);
      if (!found || n > best_count || (n == best_count && key < best_key)) {
        found = true;
        best = p;
        best_count = n;
      }
    }
    if (!found || best_count < min_frequency) break;

    const std::string joined = id_bytes[best.first] + id_bytes[best.second];
    std::uint32_t new_id;
    if (auto it = id_of.find(joined); it != id_of.end()) {
      new_id = it->second;
    } else {
      new_id = static_cast<std::uint32_t>(id_bytes.size());
      id_of[joined] = new_id;
      id_bytes.push_back(joined);
    }
    merges.push_back({id_bytes[best.first], id_bytes[best.second]});

    for (auto& [syms, n] : words) {
      std::vector<std::uint32_t> next;
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == best.first && syms[i + 1] == best.second) {
          next.push_back(new_id);
          i += 2;
        } else {
          next.push_back(syms[i++]);
        }
      }
      syms = std::move(next);
    }
  }
  return merges;
}

}  // namespace polytok::testing
