// hanjoint/utf8.h
//
// Minimal UTF-8 <-> code point conversion. Malformed input raises
// Error(kBadFormat).

#ifndef HANJOINT_UTF8_H_
#define HANJOINT_UTF8_H_

#include <string>
#include <string_view>

namespace hanjoint {

std::u32string Utf8Decode(std::string_view text);

void Utf8Append(char32_t cp, std::string *out);

std::string Utf8Encode(char32_t cp);
std::string Utf8Encode(std::u32string_view text);

}  // namespace hanjoint

#endif  // HANJOINT_UTF8_H_
