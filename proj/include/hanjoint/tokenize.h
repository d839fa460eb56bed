// hanjoint/tokenize.h
//
// Text <-> token index conversion at the syllable and grapheme levels.
// A syllable-level unit is one Unicode character; a grapheme-level unit is
// one item of hangul::DecomposeText. Spaces map to the delimiter at both
// levels.

#ifndef HANJOINT_TOKENIZE_H_
#define HANJOINT_TOKENIZE_H_

#include <string>
#include <string_view>
#include <vector>

#include "hanjoint/hangul.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint {

enum class Level { kSyllable, kGrapheme };

std::string_view LevelName(Level level);
// "syllable" / "grapheme"; throws InvalidConfig otherwise.
Level ParseLevel(std::string_view name);

// Non-space units of `text` at `level`, as UTF-8 strings.
std::vector<std::string> TextUnits(std::string_view text, Level level);

// Throws OutOfVocabularyError naming the first missing unit and its index
// in the unit sequence (spaces included).
TokenSeq TextToTokens(std::string_view text, const Vocabulary &vocab,
                      Level level);

// Tokens to grapheme items. Tokens that are inventory jamo become Jamo, the
// delimiter becomes WordDelimiter, and any other token is decomposed as
// text. Throws BlankInLabel / LabelOutOfRange.
hangul::JamoSequence TokensToJamo(const TokenSeq &tokens,
                                  const Vocabulary &vocab);

// Inverse of TextToTokens. At the grapheme level the items are composed
// into syllables, so NonComposableError may be thrown.
std::string TokensToText(const TokenSeq &tokens, const Vocabulary &vocab,
                         Level level);

}  // namespace hanjoint

#endif  // HANJOINT_TOKENIZE_H_
