#include "polytok/corpus_store.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

namespace polytok {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_language_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> docs;
  for (const auto& f : files) {
    const std::string text = read_file(f);
    for (const std::string_view line : split_lines(text)) {
      if (!line.empty()) docs.emplace_back(line);
    }
  }
  return docs;
}

}  // namespace

CorpusStore CorpusStore::load(const fs::path& root, unsigned workers) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::kNotFound, "corpus store '" + root.string() + "' is not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  std::vector<std::vector<std::string>> loaded(dirs.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, dirs.size()))));
  std::vector<std::exception_ptr> errors(dirs.size());
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < dirs.size(); i += workers) {
        try {
          loaded[i] = read_language_dir(dirs[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CorpusStore store;
  for (std::size_t i = 0; i < dirs.size(); ++i) store.docs_[dirs[i].filename().string()] = std::move(loaded[i]);
  return store;
}

void CorpusStore::add(std::string iso_code, std::string document) {
  auto it = docs_.find(iso_code);
  if (it == docs_.end()) it = docs_.emplace(std::move(iso_code), std::vector<std::string>{}).first;
  if (!document.empty()) it->second.push_back(std::move(document));
}

bool CorpusStore::has(std::string_view iso_code) const { return docs_.find(iso_code) != docs_.end(); }

const std::vector<std::string>& CorpusStore::documents(std::string_view iso_code) const {
  const auto it = docs_.find(iso_code);
  if (it == docs_.end()) throw Error(ErrorKind::kNotFound, "corpus store has no language '" + std::string(iso_code) + "'");
  return it->second;
}

std::vector<std::string> CorpusStore::languages() const {
  std::vector<std::string> out;
  for (const auto& [code, _] : docs_) out.push_back(code);
  return out;
}

std::uint64_t CorpusStore::total_bytes(std::string_view iso_code) const {
  std::uint64_t total = 0;
  for (const auto& d : documents(iso_code)) total += d.size();
  return total;
}

}  // namespace polytok
