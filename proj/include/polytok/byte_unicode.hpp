#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace polytok {

// Visible byte-to-unicode mapping used by byte-level BPE vocabulary files.
// Printable bytes in '!'..'~', U+00A1..U+00AC and U+00AE..U+00FF map to the
// code point with the same value; the remaining 68 bytes map to U+0100 upward
// in increasing byte order. See docs/tokenizer_format.md.
char32_t byte_to_unicode(unsigned char byte);

std::optional<unsigned char> unicode_to_byte(char32_t cp);

// Raw token bytes -> visible UTF-8 string.
std::string encode_visible(std::string_view bytes);

// Visible UTF-8 string -> raw token bytes; nullopt if any code point is not
// in the mapping.
std::optional<std::string> decode_visible(std::string_view visible);

}  // namespace polytok
