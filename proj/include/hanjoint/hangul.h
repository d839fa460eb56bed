// hanjoint/hangul.h
//
// Conversion between precomposed Hangul syllable blocks (U+AC00..U+D7A3)
// and the 51-letter compatibility jamo inventory (U+3131..U+3163: 30
// consonants followed by 21 vowels). Initial and final consonants share a
// single inventory; cluster finals such as ㄳ are single letters.

#ifndef HANJOINT_HANGUL_H_
#define HANJOINT_HANGUL_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hanjoint::hangul {

inline constexpr char32_t kSyllableFirst = 0xAC00;
inline constexpr char32_t kSyllableLast = 0xD7A3;
inline constexpr int kSyllableCount = 11172;
inline constexpr int kConsonantCount = 30;
inline constexpr int kVowelCount = 21;
inline constexpr int kJamoCount = kConsonantCount + kVowelCount;

enum class JamoRole { kConsonant, kVowel };

inline constexpr bool IsSyllable(char32_t cp) {
  return cp >= kSyllableFirst && cp <= kSyllableLast;
}
bool IsJamo(char32_t cp);

// A member of the 51-letter inventory. Construct through Make().
class Jamo {
 public:
  static std::optional<Jamo> Make(char32_t cp);

  char32_t codepoint() const { return codepoint_; }
  JamoRole role() const;
  bool is_vowel() const { return role() == JamoRole::kVowel; }

  friend bool operator==(const Jamo &, const Jamo &) = default;

 private:
  explicit Jamo(char32_t cp) : codepoint_(cp) {}
  char32_t codepoint_;
};

struct WordDelimiter {
  friend bool operator==(const WordDelimiter &, const WordDelimiter &) =
      default;
};

// Any character that is neither a syllable block, a space, nor (when
// produced by DecomposeText) handled as a jamo. Never a precomposed
// syllable.
struct Passthrough {
  char32_t codepoint;
  friend bool operator==(const Passthrough &, const Passthrough &) = default;
};

using JamoItem = std::variant<Jamo, WordDelimiter, Passthrough>;
using JamoSequence = std::vector<JamoItem>;

// The 51 inventory members in code point order.
std::span<const char32_t, kJamoCount> JamoInventory();

// Splits one syllable block into initial, medial and optional final jamo.
// Throws Error(kInvalidSyllable) outside U+AC00..U+D7A3.
std::vector<Jamo> DecomposeSyllable(char32_t syllable);

// Left-to-right composition with one item of lookahead: a consonant after
// an open initial+vowel block becomes its final unless a vowel follows.
// Throws NonComposableError with the index of the first item that cannot
// be placed.
std::string ComposeJamo(const JamoSequence &seq);

// Syllables are decomposed, U+0020 becomes WordDelimiter and every other
// character becomes Passthrough.
JamoSequence DecomposeText(std::string_view text);

// UTF-8 rendering of one item (the delimiter renders as a space).
std::string ItemToString(const JamoItem &item);

}  // namespace hanjoint::hangul

#endif  // HANJOINT_HANGUL_H_
