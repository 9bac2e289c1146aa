#include <algorithm>
#include <queue>
#include <thread>
#include <tuple>

#include "polytok/bpe.hpp"
#include "polytok/error.hpp"

namespace polytok {

WordCounter::WordCounter(std::string pretokenizer_id) : pretokenizer_id_(std::move(pretokenizer_id)) {
  if (!is_known_pretokenizer(pretokenizer_id_)) {
    throw Error(ErrorKind::kValidation, "unknown pretokenizer profile '" + pretokenizer_id_ + "'");
  }
}

void WordCounter::add_document(std::string_view doc) {
  ++documents_;
  for (const std::string_view chunk : pretokenize(doc, pretokenizer_id_)) {
    ++counts_[std::string(chunk)];
  }
}

void WordCounter::add_documents(std::span<const std::string> docs, unsigned workers) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(docs.size())));
  if (workers <= 1) {
    for (const auto& d : docs) add_document(d);
    return;
  }
  std::vector<WordCounter> shards(workers, WordCounter(pretokenizer_id_));
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < docs.size(); i += workers) shards[w].add_document(docs[i]);
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& s : shards) merge(s);
}

void WordCounter::merge(const WordCounter& other) {
  for (const auto& [word, n] : other.counts_) counts_[word] += n;
  documents_ += other.documents_;
}

std::vector<std::pair<std::string, std::uint64_t>> WordCounter::sorted() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts_.begin(), counts_.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using PairKey = std::uint64_t;

PairKey make_key(TokenId l, TokenId r) { return (PairKey{l} << 32) | r; }
TokenId key_left(PairKey k) { return static_cast<TokenId>(k >> 32); }
TokenId key_right(PairKey k) { return static_cast<TokenId>(k & 0xFFFFFFFFu); }

struct Candidate {
  std::int64_t count;
  PairKey key;

  // Priority order: higher count, then the pair whose newer operand is older,
  // then smaller left id, then smaller right id.
  auto tie_rank() const {
    const TokenId l = key_left(key), r = key_right(key);
    return std::make_tuple(std::max(l, r), l, r);
  }
  friend bool operator<(const Candidate& a, const Candidate& b) {
    if (a.count != b.count) return a.count < b.count;
    return a.tie_rank() > b.tie_rank();
  }
};

struct Word {
  std::vector<TokenId> symbols;
  std::int64_t count;
};

// Replaces non-overlapping (left, right) occurrences scanning left to right.
bool merge_in_word(std::vector<TokenId>& s, TokenId left, TokenId right, TokenId result) {
  bool changed = false;
  std::size_t out = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
      s[out++] = result;
      i += 2;
      changed = true;
    } else {
      s[out++] = s[i++];
    }
  }
  s.resize(out);
  return changed;
}

class Trainer {
 public:
  Trainer(const WordCounter& counts, const TrainConfig& cfg, unsigned workers)
      : cfg_(cfg), tok_(Tokenizer::byte_level(cfg.special_tokens, cfg.pretokenizer_id)) {
    for (auto& [bytes, n] : counts.sorted()) {
      if (bytes.size() < 2) continue;
      Word w{{}, static_cast<std::int64_t>(n)};
      w.symbols.reserve(bytes.size());
      for (const char c : bytes) w.symbols.push_back(tok_.byte_token(static_cast<unsigned char>(c)));
      words_.push_back(std::move(w));
    }
    count_initial_pairs(std::max(1u, workers));
  }

  Tokenizer run() {
    std::vector<std::uint32_t> stamp(words_.size(), 0);
    std::uint32_t step = 0;
    while (tok_.vocab_size() < cfg_.vocab_size) {
      const auto best = pop_best();
      if (!best || best->count < static_cast<std::int64_t>(cfg_.min_frequency)) break;
      ++step;
      const TokenId left = key_left(best->key), right = key_right(best->key);
      const TokenId result = tok_.append_merge(left, right);

      std::unordered_map<PairKey, std::int64_t> delta;
      auto where = std::move(where_[best->key]);
      where_.erase(best->key);
      for (const std::uint32_t wi : where) {
        if (stamp[wi] == step) continue;
        stamp[wi] = step;
        Word& w = words_[wi];
        std::vector<TokenId> before = w.symbols;
        if (!merge_in_word(w.symbols, left, right, result)) continue;
        for (std::size_t i = 0; i + 1 < before.size(); ++i) {
          delta[make_key(before[i], before[i + 1])] -= w.count;
        }
        for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
          const PairKey k = make_key(w.symbols[i], w.symbols[i + 1]);
          delta[k] += w.count;
          if (w.symbols[i] == result || w.symbols[i + 1] == result) where_[k].push_back(wi);
        }
      }
      for (const auto& [k, d] : delta) {
        if (d == 0) continue;
        auto it = pair_counts_.find(k);
        const std::int64_t now = (it == pair_counts_.end() ? 0 : it->second) + d;
        if (now <= 0) {
          if (it != pair_counts_.end()) pair_counts_.erase(it);
          where_.erase(k);
        } else {
          pair_counts_[k] = now;
          heap_.push({now, k});
        }
      }
    }
    return std::move(tok_);
  }

 private:
  void count_initial_pairs(unsigned workers) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, words_.size()))));
    std::vector<std::unordered_map<PairKey, std::int64_t>> shard_counts(workers);
    std::vector<std::thread> threads;
    const auto count_shard = [&](unsigned w) {
      for (std::size_t i = w; i < words_.size(); i += workers) {
        const auto& s = words_[i].symbols;
        for (std::size_t j = 0; j + 1 < s.size(); ++j) shard_counts[w][make_key(s[j], s[j + 1])] += words_[i].count;
      }
    };
    if (workers == 1) {
      count_shard(0);
    } else {
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(count_shard, w);
      for (auto& t : threads) t.join();
    }
    for (const auto& shard : shard_counts) {
      for (const auto& [k, n] : shard) pair_counts_[k] += n;
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const auto& s = words_[i].symbols;
      for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        auto& list = where_[make_key(s[j], s[j + 1])];
        if (list.empty() || list.back() != i) list.push_back(static_cast<std::uint32_t>(i));
      }
    }
    for (const auto& [k, n] : pair_counts_) heap_.push({n, k});
  }

  std::optional<Candidate> pop_best() {
    while (!heap_.empty()) {
      const Candidate top = heap_.top();
      heap_.pop();
      const auto it = pair_counts_.find(top.key);
      if (it != pair_counts_.end() && it->second == top.count) return top;
    }
    return std::nullopt;
  }

  const TrainConfig& cfg_;
  Tokenizer tok_;
  std::vector<Word> words_;
  std::unordered_map<PairKey, std::int64_t> pair_counts_;
  std::unordered_map<PairKey, std::vector<std::uint32_t>> where_;
  std::priority_queue<Candidate> heap_;
};

}  // namespace

Tokenizer train(const WordCounter& counts, const TrainConfig& cfg, unsigned workers) {
  cfg.validate();
  if (counts.document_count() == 0 || counts.distinct_words() == 0) {
    throw Error(ErrorKind::kEmptyInput, "training corpus is empty");
  }
  return Trainer(counts, cfg, workers).run();
}

Tokenizer train(std::span<const std::string> documents, const TrainConfig& cfg, unsigned workers) {
  cfg.validate();
  WordCounter counts(cfg.pretokenizer_id);
  counts.add_documents(documents, workers);
  return train(counts, cfg, workers);
}

}  // namespace polytok
