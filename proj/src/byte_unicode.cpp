#include "polytok/byte_unicode.hpp"

#include <array>

#include "polytok/unicode.hpp"

namespace polytok {
namespace {

struct Tables {
  std::array<char32_t, 256> to_cp{};
  std::array<int, 324> from_cp{};  // indexed by code point, -1 when unmapped

  Tables() {
    from_cp.fill(-1);
    const auto visible = [](int b) {
      return (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
    };
    int next = 256;
    for (int b = 0; b < 256; ++b) {
      const int cp = visible(b) ? b : next++;
      to_cp[b] = static_cast<char32_t>(cp);
      from_cp[cp] = b;
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

char32_t byte_to_unicode(unsigned char byte) { return tables().to_cp[byte]; }

std::optional<unsigned char> unicode_to_byte(char32_t cp) {
  if (cp >= tables().from_cp.size()) return std::nullopt;
  const int b = tables().from_cp[cp];
  if (b < 0) return std::nullopt;
  return static_cast<unsigned char>(b);
}

std::string encode_visible(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const char c : bytes) unicode::append_utf8(out, byte_to_unicode(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> decode_visible(std::string_view visible) {
  std::string out;
  out.reserve(visible.size());
  for (std::size_t pos = 0; pos < visible.size();) {
    const auto d = unicode::decode_utf8(visible, pos);
    if (!d.valid) return std::nullopt;
    const auto b = unicode_to_byte(d.cp);
    if (!b) return std::nullopt;
    out.push_back(static_cast<char>(*b));
    pos += d.length;
  }
  return out;
}

}  // namespace polytok
