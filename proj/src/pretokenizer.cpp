#include "polytok/pretokenizer.hpp"

#include <string>

#include "polytok/error.hpp"
#include "polytok/unicode.hpp"

namespace polytok {
namespace {

using unicode::CharClass;

struct Char {
  std::size_t offset;
  char32_t cp;
  CharClass cls;
};

// Backtracking-equivalent matcher for the o200k alternation. Each alternative
// is resolved in closed form from the greedy runs it would take, so a match
// costs time linear in its length.
class O200kSplitter {
 public:
  explicit O200kSplitter(std::string_view text) : text_(text) {
    chars_.reserve(text.size());
    for (std::size_t pos = 0; pos < text.size();) {
      const auto d = unicode::decode_utf8(text, pos);
      const CharClass cls = d.valid ? unicode::classify(d.cp) : CharClass::kOther;
      chars_.push_back({pos, d.valid ? d.cp : char32_t{0xFFFFFFFF}, cls});
      pos += d.length;
    }
  }

  std::vector<ByteSpan> split() const {
    std::vector<ByteSpan> out;
    std::size_t i = 0;
    while (i < chars_.size()) {
      std::size_t end = match_at(i);
      if (end == kNoMatch || end <= i) end = i + 1;
      out.push_back({offset(i), offset(end)});
      i = end;
    }
    return out;
  }

 private:
  static constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);

  std::size_t size() const { return chars_.size(); }
  std::size_t offset(std::size_t i) const { return i < size() ? chars_[i].offset : text_.size(); }
  CharClass cls(std::size_t i) const { return chars_[i].cls; }
  char32_t cp(std::size_t i) const { return chars_[i].cp; }

  // [\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]
  bool upperish(std::size_t i) const {
    const CharClass c = cls(i);
    return c == CharClass::kLu || c == CharClass::kLt || c == CharClass::kLm ||
           c == CharClass::kLo || c == CharClass::kMark;
  }
  // [\p{Ll}\p{Lm}\p{Lo}\p{M}]
  bool lowerish(std::size_t i) const {
    const CharClass c = cls(i);
    return c == CharClass::kLl || c == CharClass::kLm || c == CharClass::kLo ||
           c == CharClass::kMark;
  }
  bool is_newline(std::size_t i) const { return cp(i) == U'\r' || cp(i) == U'\n'; }
  bool is_space(std::size_t i) const { return cls(i) == CharClass::kSpace; }
  // [^\r\n\p{L}\p{N}]
  bool letter_prefix(std::size_t i) const {
    return !is_newline(i) && !unicode::is_letter(cls(i)) && cls(i) != CharClass::kNumber;
  }
  // [^\s\p{L}\p{N}]
  bool symbol(std::size_t i) const {
    return !is_space(i) && !unicode::is_letter(cls(i)) && cls(i) != CharClass::kNumber;
  }

  std::size_t upper_run_end(std::size_t i) const {
    while (i < size() && upperish(i)) ++i;
    return i;
  }
  std::size_t lower_run_end(std::size_t i) const {
    while (i < size() && lowerish(i)) ++i;
    return i;
  }
  std::size_t space_run_end(std::size_t i) const {
    while (i < size() && is_space(i)) ++i;
    return i;
  }

  // [U]*[W]+ starting at i.
  std::size_t upper_star_lower_plus(std::size_t i) const {
    const std::size_t e = upper_run_end(i);
    if (e < size() && cls(e) == CharClass::kLl) return lower_run_end(e);
    // Give characters back until one of them can start the [W]+ part.
    for (std::size_t j = e; j > i; --j) {
      if (lowerish(j - 1)) return j;
    }
    return kNoMatch;
  }

  // [U]+[W]* starting at i.
  std::size_t upper_plus_lower_star(std::size_t i) const {
    const std::size_t e = upper_run_end(i);
    if (e == i) return kNoMatch;
    return lower_run_end(e);
  }

  // (?i:'s|'t|'re|'ve|'m|'ll|'d)?
  std::size_t contraction(std::size_t i) const {
    if (i >= size() || cp(i) != U'\'') return i;
    const auto folded = [&](std::size_t k) -> char32_t {
      if (k >= size()) return 0;
      const char32_t c = cp(k);
      if (c >= U'A' && c <= U'Z') return c + 32;
      if (c == U'ſ') return U's';  // LATIN SMALL LETTER LONG S folds to 's'
      return c;
    };
    const char32_t a = folded(i + 1);
    if (a == U's' || a == U't') return i + 2;
    const char32_t b = folded(i + 2);
    if (a == U'r' && b == U'e') return i + 3;
    if (a == U'v' && b == U'e') return i + 3;
    if (a == U'm') return i + 2;
    if (a == U'l' && b == U'l') return i + 3;
    if (a == U'd') return i + 2;
    return i;
  }

  template <typename Body>
  std::size_t with_optional_prefix(std::size_t i, Body body) const {
    if (letter_prefix(i) && i + 1 < size()) {
      const std::size_t e = (this->*body)(i + 1);
      if (e != kNoMatch) return e;
    }
    return (this->*body)(i);
  }

  std::size_t match_at(std::size_t i) const {
    std::size_t e = with_optional_prefix(i, &O200kSplitter::upper_star_lower_plus);
    if (e != kNoMatch) return contraction(e);

    e = with_optional_prefix(i, &O200kSplitter::upper_plus_lower_star);
    if (e != kNoMatch) return contraction(e);

    if (cls(i) == CharClass::kNumber) {
      e = i;
      while (e < size() && e < i + 3 && cls(e) == CharClass::kNumber) ++e;
      return e;
    }

    {
      std::size_t j = (cp(i) == U' ') ? i + 1 : i;
      std::size_t k = j;
      while (k < size() && symbol(k)) ++k;
      if (k > j) {
        while (k < size() && (is_newline(k) || cp(k) == U'/')) ++k;
        return k;
      }
    }

    if (!is_space(i)) return kNoMatch;
    const std::size_t ws_end = space_run_end(i);

    for (std::size_t j = ws_end; j > i; --j) {
      if (is_newline(j - 1)) return j;
    }
    if (ws_end == size()) return ws_end;
    if (ws_end - 1 > i) return ws_end - 1;
    return ws_end;
  }

  std::string_view text_;
  std::vector<Char> chars_;
};

}  // namespace

bool is_known_pretokenizer(std::string_view profile) { return profile == kO200kProfile; }

std::vector<ByteSpan> pretokenize_spans(std::string_view text, std::string_view profile) {
  if (!is_known_pretokenizer(profile)) {
    throw Error(ErrorKind::kValidation, "unknown pretokenizer profile '" + std::string(profile) + "'");
  }
  if (text.empty()) return {};
  return O200kSplitter(text).split();
}

std::vector<std::string_view> pretokenize(std::string_view text, std::string_view profile) {
  std::vector<std::string_view> out;
  for (const ByteSpan& s : pretokenize_spans(text, profile)) {
    out.push_back(text.substr(s.begin, s.size()));
  }
  return out;
}

}  // namespace polytok
