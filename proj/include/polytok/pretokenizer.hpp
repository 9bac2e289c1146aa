#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace polytok {

// Half-open byte range [begin, end) into some input buffer.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

// Profile id of the GPT-4o pretokenization pattern:
//
//   [^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?
//   | [^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?
//   | \p{N}{1,3}
//   | ' '?[^\s\p{L}\p{N}]+[\r\n/]*
//   | \s*[\r\n]+
//   | \s+(?!\S)
//   | \s+
inline constexpr std::string_view kO200kProfile = "o200k";

bool is_known_pretokenizer(std::string_view profile);

// Splits `text` into contiguous chunks covering it exactly. No normalization
// is applied. Bytes that are not valid UTF-8 are treated as single symbol
// characters. Throws Error(kValidation) for an unknown profile.
std::vector<ByteSpan> pretokenize_spans(std::string_view text, std::string_view profile);

std::vector<std::string_view> pretokenize(std::string_view text, std::string_view profile);

}  // namespace polytok
