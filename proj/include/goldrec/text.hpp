#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace goldrec {

// Strings are handled as sequences of Unicode scalar values; positions count
// characters, never bytes.
using Text = std::u32string;
using TextView = std::u32string_view;

// Invalid UTF-8 sequences decode to U+FFFD.
Text from_utf8(std::string_view bytes);
std::string to_utf8(TextView text);

enum class CharClass : std::uint8_t { Digit, Lower, Upper, Space, Other };

// ASCII classes only: [0-9], [a-z], [A-Z], \s. Everything else is Other.
constexpr CharClass classify(char32_t c) {
  if (c >= U'0' && c <= U'9') return CharClass::Digit;
  if (c >= U'a' && c <= U'z') return CharClass::Lower;
  if (c >= U'A' && c <= U'Z') return CharClass::Upper;
  if (c == U' ' || c == U'\t' || c == U'\n' || c == U'\v' || c == U'\f' || c == U'\r') {
    return CharClass::Space;
  }
  return CharClass::Other;
}

// ASCII lowercase fold; non-ASCII characters pass through unchanged.
std::string ascii_lower(std::string_view s);

}  // namespace goldrec
