#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polytok/bpe.hpp"
#include "polytok/byte_unicode.hpp"
#include "polytok/error.hpp"

namespace polytok {

std::vector<std::string> make_special_tokens(std::size_t count) {
  static const char* const kNamed[] = {"<pad>", "<bos>", "<eos>", "<unk>"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i < 4 ? std::string(kNamed[i]) : "<reserved_" + std::to_string(i - 4) + ">");
  }
  return out;
}

std::vector<std::string> default_special_tokens() { return make_special_tokens(8); }

void TrainConfig::validate() const {
  if (!is_known_pretokenizer(pretokenizer_id)) {
    throw Error(ErrorKind::kValidation, "unknown pretokenizer profile '" + pretokenizer_id + "'");
  }
  if (min_frequency < 1) throw Error(ErrorKind::kValidation, "min_frequency must be >= 1");
  if (vocab_size <= 256 + special_tokens.size()) {
    throw Error(ErrorKind::kValidation,
                "vocab_size " + std::to_string(vocab_size) + " must exceed 256 + " +
                    std::to_string(special_tokens.size()) + " special tokens");
  }
  for (std::size_t i = 0; i < special_tokens.size(); ++i) {
    if (special_tokens[i].empty()) throw Error(ErrorKind::kValidation, "empty special token name");
    for (std::size_t j = 0; j < i; ++j) {
      if (special_tokens[i] == special_tokens[j]) {
        throw Error(ErrorKind::kValidation, "duplicate special token '" + special_tokens[i] + "'");
      }
    }
  }
}

Tokenizer Tokenizer::byte_level(std::vector<std::string> special_tokens, std::string pretokenizer_id) {
  if (!is_known_pretokenizer(pretokenizer_id)) {
    throw Error(ErrorKind::kValidation, "unknown pretokenizer profile '" + pretokenizer_id + "'");
  }
  Tokenizer t;
  t.pretokenizer_id_ = std::move(pretokenizer_id);
  t.specials_ = std::move(special_tokens);
  t.tokens_ = t.specials_;
  for (int b = 0; b < 256; ++b) {
    std::string bytes(1, static_cast<char>(b));
    t.index_.emplace(bytes, static_cast<TokenId>(t.tokens_.size()));
    t.tokens_.push_back(std::move(bytes));
  }
  return t;
}

TokenId Tokenizer::append_merge(TokenId left, TokenId right) {
  if (left >= tokens_.size() || right >= tokens_.size() || is_special(left) || is_special(right)) {
    throw Error(ErrorKind::kValidation, "merge operand is not a regular token");
  }
  const std::uint64_t key = pair_key(left, right);
  if (merge_rank_.contains(key)) throw Error(ErrorKind::kValidation, "duplicate merge");

  std::string joined = tokens_[left] + tokens_[right];
  TokenId result;
  if (auto it = index_.find(joined); it != index_.end()) {
    result = it->second;
  } else {
    result = static_cast<TokenId>(tokens_.size());
    index_.emplace(joined, result);
    tokens_.push_back(std::move(joined));
  }
  merge_rank_.emplace(key, static_cast<std::uint32_t>(merges_.size()));
  merges_.push_back({left, right, result});
  return result;
}

const std::string& Tokenizer::token(TokenId id) const {
  if (id >= tokens_.size()) {
    throw Error(ErrorKind::kOutOfRange, "token id " + std::to_string(id) + " >= vocab size " +
                                            std::to_string(tokens_.size()));
  }
  return tokens_[id];
}

std::optional<TokenId> Tokenizer::find(std::string_view bytes) const {
  if (auto it = index_.find(std::string(bytes)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::optional<TokenId> Tokenizer::find_special(std::string_view name) const {
  for (std::size_t i = 0; i < specials_.size(); ++i) {
    if (specials_[i] == name) return static_cast<TokenId>(i);
  }
  return std::nullopt;
}

template <typename Sink>
void Tokenizer::encode_chunk(std::string_view text, ByteSpan chunk, Sink&& sink) const {
  const std::size_t n = chunk.size();
  if (n == 1 || merges_.empty()) {
    for (std::size_t i = chunk.begin; i < chunk.end; ++i) {
      sink(byte_token(static_cast<unsigned char>(text[i])), ByteSpan{i, i + 1});
    }
    return;
  }

  struct Symbol {
    TokenId id;
    std::size_t begin;
    std::size_t end;
    std::ptrdiff_t prev;
    std::ptrdiff_t next;
  };
  std::vector<Symbol> sym(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = chunk.begin + i;
    sym[i] = {byte_token(static_cast<unsigned char>(text[at])), at, at + 1,
              static_cast<std::ptrdiff_t>(i) - 1,
              i + 1 < n ? static_cast<std::ptrdiff_t>(i + 1) : -1};
  }

  // (rank, position of left symbol); lowest rank first, leftmost on ties.
  using Candidate = std::pair<std::uint32_t, std::size_t>;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;
  const auto push_pair = [&](std::ptrdiff_t pos) {
    if (pos < 0 || sym[pos].next < 0) return;
    const auto it = merge_rank_.find(pair_key(sym[pos].id, sym[sym[pos].next].id));
    if (it != merge_rank_.end()) queue.emplace(it->second, static_cast<std::size_t>(pos));
  };
  for (std::size_t i = 0; i + 1 < n; ++i) push_pair(static_cast<std::ptrdiff_t>(i));

  std::vector<bool> dead(n, false);
  while (!queue.empty()) {
    const auto [rank, pos] = queue.top();
    queue.pop();
    if (dead[pos] || sym[pos].next < 0) continue;
    const Merge& m = merges_[rank];
    Symbol& left = sym[pos];
    const std::ptrdiff_t right_pos = left.next;
    Symbol& right = sym[right_pos];
    if (left.id != m.left || right.id != m.right) continue;

    left.id = m.result;
    left.end = right.end;
    left.next = right.next;
    if (right.next >= 0) sym[right.next].prev = static_cast<std::ptrdiff_t>(pos);
    dead[right_pos] = true;

    push_pair(left.prev);
    push_pair(static_cast<std::ptrdiff_t>(pos));
  }

  for (std::ptrdiff_t i = 0; i >= 0; i = sym[i].next) sink(sym[i].id, ByteSpan{sym[i].begin, sym[i].end});
}

Encoding Tokenizer::encode(std::string_view text) const {
  Encoding out;
  for (const ByteSpan& chunk : pretokenize_spans(text, pretokenizer_id_)) {
    encode_chunk(text, chunk, [&](TokenId id, ByteSpan span) {
      out.ids.push_back(id);
      out.byte_spans.push_back(span);
    });
  }
  return out;
}

std::vector<TokenId> Tokenizer::encode_ids(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const ByteSpan& chunk : pretokenize_spans(text, pretokenizer_id_)) {
    encode_chunk(text, chunk, [&](TokenId id, ByteSpan) { ids.push_back(id); });
  }
  return ids;
}

std::size_t Tokenizer::count_tokens(std::string_view text) const {
  std::size_t count = 0;
  for (const ByteSpan& chunk : pretokenize_spans(text, pretokenizer_id_)) {
    encode_chunk(text, chunk, [&](TokenId, ByteSpan) { ++count; });
  }
  return count;
}

std::string Tokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (const TokenId id : ids) out += token(id);
  return out;
}

// --- serialization -------------------------------------------------------

std::string Tokenizer::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = kFormatVersion;
  doc["pretokenizer_id"] = pretokenizer_id_;
  doc["special_tokens"] = specials_;
  nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
  for (std::size_t id = specials_.size(); id < tokens_.size(); ++id) {
    vocab[encode_visible(tokens_[id])] = id;
  }
  doc["vocab"] = std::move(vocab);
  nlohmann::ordered_json merges = nlohmann::ordered_json::array();
  for (const Merge& m : merges_) {
    merges.push_back(encode_visible(tokens_[m.left]) + " " + encode_visible(tokens_[m.right]));
  }
  doc["merges"] = std::move(merges);
  return doc.dump(1) + "\n";
}

namespace {

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorKind::kIncompatibleFormat, "tokenizer file: " + what);
}

std::string visible_to_bytes(const std::string& visible) {
  auto bytes = decode_visible(visible);
  if (!bytes || bytes->empty()) format_error("token '" + visible + "' is not in the byte-level alphabet");
  return *bytes;
}

}  // namespace

Tokenizer Tokenizer::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("tokenizer file: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kFormatVersion) {
      format_error("unsupported version " + doc.at("version").dump());
    }
    auto specials = doc.at("special_tokens").get<std::vector<std::string>>();
    auto profile = doc.at("pretokenizer_id").get<std::string>();
    if (!is_known_pretokenizer(profile)) format_error("unknown pretokenizer '" + profile + "'");

    Tokenizer t = byte_level(std::move(specials), std::move(profile));
    const std::size_t s = t.specials_.size();

    const auto& vocab = doc.at("vocab");
    if (!vocab.is_object()) format_error("vocab must be an object");
    std::vector<std::string> by_id(vocab.size());
    for (const auto& [visible, id_json] : vocab.items()) {
      const auto id = id_json.get<std::size_t>();
      if (id < s || id - s >= by_id.size() || !by_id[id - s].empty()) {
        format_error("vocab ids must be dense and start after the special tokens");
      }
      by_id[id - s] = visible_to_bytes(visible);
    }
    if (by_id.size() < 256) format_error("vocab is missing byte tokens");
    for (int b = 0; b < 256; ++b) {
      if (by_id[b] != std::string(1, static_cast<char>(b))) format_error("byte tokens out of order");
    }

    for (const auto& m : doc.at("merges")) {
      const auto line = m.get<std::string>();
      const auto space = line.find(' ');
      if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
        format_error("merge '" + line + "' is not a 'left right' pair");
      }
      const auto left = t.find(visible_to_bytes(line.substr(0, space)));
      const auto right = t.find(visible_to_bytes(line.substr(space + 1)));
      if (!left || !right) format_error("merge '" + line + "' uses a token not created earlier");
      t.append_merge(*left, *right);
    }
    if (t.tokens_.size() != s + by_id.size()) format_error("vocab does not match the merge list");
    for (std::size_t i = 0; i < by_id.size(); ++i) {
      if (t.tokens_[s + i] != by_id[i]) format_error("vocab does not match the merge list");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    format_error(e.what());
  }
}

Tokenizer Tokenizer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "cannot open tokenizer '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Tokenizer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write tokenizer '" + path.string() + "'");
  out << to_json();
}

}  // namespace polytok
