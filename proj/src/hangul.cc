// hanjoint/hangul.cc

#include "hanjoint/hangul.h"

#include <algorithm>

#include "hanjoint/error.h"
#include "hanjoint/utf8.h"

namespace hanjoint::hangul {

namespace {

constexpr char32_t kJamoFirst = 0x3131;  // ㄱ
constexpr char32_t kVowelFirst = 0x314F;  // ㅏ
constexpr char32_t kJamoLast = 0x3163;  // ㅣ

constexpr int kMedialCount = 21;
constexpr int kFinalCount = 28;  // including "no final"

// Positional initial index -> compatibility jamo.
constexpr std::array<char32_t, 19> kInitials = {
    0x3131, 0x3132, 0x3134, 0x3137, 0x3138, 0x3139, 0x3141,
    0x3142, 0x3143, 0x3145, 0x3146, 0x3147, 0x3148, 0x3149,
    0x314A, 0x314B, 0x314C, 0x314D, 0x314E};

// Positional final index (1-based; 0 means no final) -> compatibility jamo.
constexpr std::array<char32_t, kFinalCount> kFinals = {
    0,      0x3131, 0x3132, 0x3133, 0x3134, 0x3135, 0x3136,
    0x3137, 0x3139, 0x313A, 0x313B, 0x313C, 0x313D, 0x313E,
    0x313F, 0x3140, 0x3141, 0x3142, 0x3144, 0x3145, 0x3146,
    0x3147, 0x3148, 0x314A, 0x314B, 0x314C, 0x314D, 0x314E};

constexpr std::array<char32_t, kJamoCount> MakeInventory() {
  std::array<char32_t, kJamoCount> out{};
  for (int i = 0; i < kJamoCount; ++i) out[i] = kJamoFirst + i;
  return out;
}

constexpr std::array<char32_t, kJamoCount> kInventory = MakeInventory();

int InitialIndex(char32_t cp) {
  auto it = std::find(kInitials.begin(), kInitials.end(), cp);
  return it == kInitials.end() ? -1 : static_cast<int>(it - kInitials.begin());
}

int FinalIndex(char32_t cp) {
  auto it = std::find(kFinals.begin() + 1, kFinals.end(), cp);
  return it == kFinals.end() ? -1 : static_cast<int>(it - kFinals.begin());
}

char32_t Compose(int initial, int medial, int final_index) {
  return kSyllableFirst +
         static_cast<char32_t>((initial * kMedialCount + medial) * kFinalCount +
                               final_index);
}

}  // namespace

bool IsJamo(char32_t cp) { return cp >= kJamoFirst && cp <= kJamoLast; }

std::optional<Jamo> Jamo::Make(char32_t cp) {
  if (!IsJamo(cp)) return std::nullopt;
  return Jamo(cp);
}

JamoRole Jamo::role() const {
  return codepoint_ >= kVowelFirst ? JamoRole::kVowel : JamoRole::kConsonant;
}

std::span<const char32_t, kJamoCount> JamoInventory() { return kInventory; }

std::vector<Jamo> DecomposeSyllable(char32_t syllable) {
  if (!IsSyllable(syllable)) {
    throw Error(ErrorCode::kInvalidSyllable,
                "U+" + std::to_string(static_cast<unsigned>(syllable)) +
                    " is not a precomposed Hangul syllable");
  }
  int offset = static_cast<int>(syllable - kSyllableFirst);
  int initial = offset / (kMedialCount * kFinalCount);
  int medial = (offset / kFinalCount) % kMedialCount;
  int final_index = offset % kFinalCount;

  std::vector<Jamo> out;
  out.push_back(*Jamo::Make(kInitials[initial]));
  out.push_back(*Jamo::Make(kVowelFirst + medial));
  if (final_index != 0) out.push_back(*Jamo::Make(kFinals[final_index]));
  return out;
}

std::string ComposeJamo(const JamoSequence &seq) {
  std::string out;

  // Block under construction: initial consonant, then vowel, then final.
  int initial = -1;
  std::size_t initial_pos = 0;
  int medial = -1;
  int final_index = 0;

  auto flush = [&]() {
    if (initial < 0) return;
    if (medial < 0) throw NonComposableError(initial_pos);
    Utf8Append(Compose(initial, medial, final_index), &out);
    initial = -1;
    medial = -1;
    final_index = 0;
  };

  auto next_is_vowel = [&](std::size_t i) {
    if (i + 1 >= seq.size()) return false;
    const auto *next = std::get_if<Jamo>(&seq[i + 1]);
    return next != nullptr && next->is_vowel();
  };

  for (std::size_t i = 0; i < seq.size(); ++i) {
    const JamoItem &item = seq[i];
    if (std::holds_alternative<WordDelimiter>(item)) {
      flush();
      out.push_back(' ');
      continue;
    }
    if (const auto *pass = std::get_if<Passthrough>(&item)) {
      flush();
      Utf8Append(pass->codepoint, &out);
      continue;
    }

    const Jamo &jamo = std::get<Jamo>(item);
    if (jamo.is_vowel()) {
      // Only an initial without a vowel can take one.
      if (initial < 0 || medial >= 0) throw NonComposableError(i);
      medial = static_cast<int>(jamo.codepoint() - kVowelFirst);
      continue;
    }

    if (initial >= 0 && medial < 0) {
      // Two consonants in a row with no vowel for the first.
      throw NonComposableError(initial_pos);
    }
    if (initial >= 0 && final_index == 0 && !next_is_vowel(i)) {
      int f = FinalIndex(jamo.codepoint());
      if (f > 0) {
        final_index = f;
        continue;
      }
    }
    flush();
    int init = InitialIndex(jamo.codepoint());
    if (init < 0) throw NonComposableError(i);
    initial = init;
    initial_pos = i;
  }
  flush();
  return out;
}

JamoSequence DecomposeText(std::string_view text) {
  JamoSequence out;
  for (char32_t cp : Utf8Decode(text)) {
    if (IsSyllable(cp)) {
      for (const Jamo &j : DecomposeSyllable(cp)) out.emplace_back(j);
    } else if (cp == U' ') {
      out.emplace_back(WordDelimiter{});
    } else {
      out.emplace_back(Passthrough{cp});
    }
  }
  return out;
}

std::string ItemToString(const JamoItem &item) {
  if (const auto *j = std::get_if<Jamo>(&item)) return Utf8Encode(j->codepoint());
  if (const auto *p = std::get_if<Passthrough>(&item)) {
    return Utf8Encode(p->codepoint);
  }
  return " ";
}

}  // namespace hanjoint::hangul
