#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace polytok::unicode {

// Character classes needed by the o200k splitter. Every code point falls in
// exactly one class; kOther covers punctuation, symbols, controls, unassigned
// code points and bytes that are not part of a valid UTF-8 sequence.
enum class CharClass : std::uint8_t {
  kOther,
  kLu,
  kLl,
  kLt,
  kLm,
  kLo,
  kMark,
  kNumber,
  kSpace,
};

CharClass classify(char32_t cp);

inline bool is_letter(CharClass c) {
  return c == CharClass::kLu || c == CharClass::kLl || c == CharClass::kLt ||
         c == CharClass::kLm || c == CharClass::kLo;
}

struct DecodedChar {
  char32_t cp = 0;
  std::uint8_t length = 1;  // bytes consumed, always >= 1
  bool valid = false;
};

// Decodes one scalar value at `pos`. Malformed input (bad lead byte, truncated
// sequence, overlong form, surrogate, > U+10FFFF) consumes a single byte and
// is reported with valid == false.
DecodedChar decode_utf8(std::string_view text, std::size_t pos);

bool is_valid_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);

}  // namespace polytok::unicode
