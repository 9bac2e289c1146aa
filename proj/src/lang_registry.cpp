#include "polytok/lang_registry.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

namespace polytok {

std::string_view to_string(Cluster c) {
  switch (c) {
    case Cluster::kEuro: return "Euro";
    case Cluster::kAsian: return "Asian";
    case Cluster::kMEIndic: return "MEIndic";
    case Cluster::kUnseen: return "Unseen";
    case Cluster::kUnassigned: return "-";
  }
  return "-";
}

std::optional<Cluster> parse_cluster(std::string_view s) {
  if (s == "Euro") return Cluster::kEuro;
  if (s == "Asian") return Cluster::kAsian;
  if (s == "MEIndic" || s == "Me-Indic") return Cluster::kMEIndic;
  if (s == "Unseen") return Cluster::kUnseen;
  if (s == "-") return Cluster::kUnassigned;
  return std::nullopt;
}

std::vector<Bucket> derive_buckets(const std::vector<LanguageSpec>& languages) {
  std::map<BucketKey, std::vector<std::string>> groups;
  for (const auto& lang : languages) groups[{lang.script, lang.family}].push_back(lang.iso_code);
  std::vector<Bucket> out;
  out.reserve(groups.size());
  for (auto& [key, members] : groups) out.push_back({key, std::move(members)});
  return out;
}

Registry::Registry(std::vector<LanguageSpec> languages, std::map<std::string, double> pinned)
    : languages_(std::move(languages)), pinned_(std::move(pinned)) {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (!index_.emplace(languages_[i].iso_code, i).second) {
      throw Error(ErrorKind::kDuplicateCode, "duplicate iso code '" + languages_[i].iso_code + "'");
    }
  }
  buckets_ = derive_buckets(languages_);
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    for (const auto& code : buckets_[b].members) bucket_index_.emplace(code, b);
  }
  double total = 0.0;
  for (const auto& [code, fraction] : pinned_) {
    if (!contains(code)) throw Error(ErrorKind::kValidation, "pinned language '" + code + "' is not in the registry");
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
      throw Error(ErrorKind::kValidation, "pinned fraction for '" + code + "' must be in [0, 1]");
    }
    total += fraction;
  }
  if (!(total < 1.0)) throw Error(ErrorKind::kValidation, "pinned fractions must sum to less than 1");
}

bool Registry::contains(std::string_view iso_code) const { return index_.find(iso_code) != index_.end(); }

const LanguageSpec& Registry::at(std::string_view iso_code) const {
  const auto it = index_.find(iso_code);
  if (it == index_.end()) throw Error(ErrorKind::kNotFound, "language '" + std::string(iso_code) + "' not registered");
  return languages_[it->second];
}

const Bucket& Registry::bucket_of(std::string_view iso_code) const {
  const auto it = bucket_index_.find(iso_code);
  if (it == bucket_index_.end()) throw Error(ErrorKind::kNotFound, "language '" + std::string(iso_code) + "' not registered");
  return buckets_[it->second];
}

double Registry::pinned_total() const {
  double total = 0.0;
  for (const auto& [code, fraction] : pinned_) total += fraction;
  return total;
}

std::string Registry::serialize() const {
  std::string out = "# iso_code\tlanguage_name\tscript\tfamily\tsubgrouping\tcluster\tdata_bytes\n";
  for (const auto& l : languages_) {
    out += l.iso_code + '\t' + l.name + '\t' + l.script + '\t' + l.family + '\t' + l.subgrouping + '\t' +
           std::string(to_string(l.cluster)) + '\t' + std::to_string(l.data_bytes) + '\n';
  }
  return out;
}

std::vector<LanguageSpec> parse_registry(std::string_view text) {
  std::vector<LanguageSpec> out;
  std::size_t line_no = 0;
  for (const std::string_view raw : split_lines(text)) {
    ++line_no;
    if (trim(raw).empty() || raw.front() == '#') continue;
    const auto where = [&] { return "registry line " + std::to_string(line_no) + ": "; };
    const auto f = split(raw, '\t');
    if (f.size() != 7) {
      throw Error(ErrorKind::kParse, where() + "expected 7 tab-separated fields, got " + std::to_string(f.size()));
    }
    LanguageSpec l;
    l.iso_code = std::string(trim(f[0]));
    const bool code_ok = l.iso_code.size() == 3 &&
                         std::all_of(l.iso_code.begin(), l.iso_code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
    if (!code_ok) throw Error(ErrorKind::kParse, where() + "iso code '" + l.iso_code + "' is not 3 lowercase letters");
    l.name = std::string(trim(f[1]));
    l.script = std::string(trim(f[2]));
    l.family = std::string(trim(f[3]));
    l.subgrouping = std::string(trim(f[4]));
    if (l.script.empty() || l.family.empty()) throw Error(ErrorKind::kParse, where() + "script and family are required");
    const auto cluster = parse_cluster(trim(f[5]));
    if (!cluster) throw Error(ErrorKind::kParse, where() + "unknown cluster '" + std::string(trim(f[5])) + "'");
    l.cluster = *cluster;
    try {
      l.data_bytes = parse_u64(trim(f[6]), "data_bytes");
    } catch (const Error& e) {
      throw Error(ErrorKind::kParse, where() + e.what());
    }
    out.push_back(std::move(l));
  }
  return out;
}

Registry load_registry(const std::filesystem::path& path, std::map<std::string, double> pinned) {
  return Registry(parse_registry(read_file(path)), std::move(pinned));
}

std::pair<std::string, double> parse_pin(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::kValidation, "pin '" + std::string(spec) + "' must look like code=fraction");
  }
  try {
    return {std::string(trim(spec.substr(0, eq))), parse_double(trim(spec.substr(eq + 1)), "pin fraction")};
  } catch (const Error& e) {
    throw Error(ErrorKind::kValidation, e.what());
  }
}

}  // namespace polytok
