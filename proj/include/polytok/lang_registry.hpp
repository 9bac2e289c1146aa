#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polytok {

enum class Cluster { kEuro, kAsian, kMEIndic, kUnseen, kUnassigned };

std::string_view to_string(Cluster c);
// Accepts "Euro", "Asian", "MEIndic" / "Me-Indic", "Unseen" and "-" (unassigned).
std::optional<Cluster> parse_cluster(std::string_view s);

struct LanguageSpec {
  std::string iso_code;  // three lowercase ASCII letters
  std::string name;
  std::string script;
  std::string family;
  std::string subgrouping;  // metadata only, never used for bucketing
  Cluster cluster = Cluster::kUnassigned;
  std::uint64_t data_bytes = 0;
};

struct BucketKey {
  std::string script;
  std::string family;

  friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
};

struct Bucket {
  BucketKey key;
  std::vector<std::string> members;  // iso codes in registry order
};

// Groups languages by exact (script, family); buckets are ordered by key.
std::vector<Bucket> derive_buckets(const std::vector<LanguageSpec>& languages);

// Immutable language inventory with derived buckets and pinned weight fractions.
class Registry {
 public:
  // Throws Error(kDuplicateCode) on a repeated iso code and Error(kValidation)
  // for bad pins (unknown code, fraction outside [0, 1], total >= 1).
  Registry(std::vector<LanguageSpec> languages, std::map<std::string, double> pinned = {});

  const std::vector<LanguageSpec>& languages() const { return languages_; }
  const std::vector<Bucket>& buckets() const { return buckets_; }
  const std::map<std::string, double>& pinned() const { return pinned_; }

  std::size_t size() const { return languages_.size(); }
  bool contains(std::string_view iso_code) const;
  const LanguageSpec& at(std::string_view iso_code) const;
  const Bucket& bucket_of(std::string_view iso_code) const;
  double pinned_total() const;

  // Canonical registry file text (header comment plus one row per language).
  std::string serialize() const;

 private:
  std::vector<LanguageSpec> languages_;
  std::vector<Bucket> buckets_;
  std::map<std::string, double> pinned_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::size_t, std::less<>> bucket_index_;
};

// Parses the tab-separated registry format:
//   iso_code  language_name  script  family  subgrouping  cluster  data_bytes
// '#' lines and blank lines are skipped.
std::vector<LanguageSpec> parse_registry(std::string_view text);

Registry load_registry(const std::filesystem::path& path, std::map<std::string, double> pinned = {});

// Parses "eng=0.30". Throws Error(kValidation) on malformed input.
std::pair<std::string, double> parse_pin(std::string_view spec);

}  // namespace polytok
