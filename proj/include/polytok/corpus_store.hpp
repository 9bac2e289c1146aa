#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace polytok {

// Per-language document collections. On disk: one directory per iso code,
// each holding UTF-8 text files with one document per line. Files are read in
// name order; blank lines are skipped.
class CorpusStore {
 public:
  CorpusStore() = default;

  // Reads every language directory under `root`, `workers` directories at a time.
  static CorpusStore load(const std::filesystem::path& root, unsigned workers = 1);

  void add(std::string iso_code, std::string document);

  bool has(std::string_view iso_code) const;
  // Throws Error(kNotFound) for an unknown language.
  const std::vector<std::string>& documents(std::string_view iso_code) const;
  std::vector<std::string> languages() const;
  std::uint64_t total_bytes(std::string_view iso_code) const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> docs_;
};

}  // namespace polytok
