// hanjoint/tokenize.cc

#include "hanjoint/tokenize.h"

#include "hanjoint/error.h"
#include "hanjoint/utf8.h"

namespace hanjoint {

namespace {

void CheckToken(TokenId id, const Vocabulary &vocab) {
  if (id == kBlankId) {
    throw Error(ErrorCode::kBlankInLabel, "blank token in label sequence");
  }
  if (id < 0 || static_cast<std::size_t>(id) >= vocab.size()) {
    throw Error(ErrorCode::kLabelOutOfRange,
                "token id " + std::to_string(id) + " outside vocabulary");
  }
}

}  // namespace

std::string_view LevelName(Level level) {
  return level == Level::kSyllable ? "syllable" : "grapheme";
}

Level ParseLevel(std::string_view name) {
  if (name == "syllable") return Level::kSyllable;
  if (name == "grapheme") return Level::kGrapheme;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown level '" + std::string(name) + "'");
}

std::vector<std::string> TextUnits(std::string_view text, Level level) {
  std::vector<std::string> out;
  if (level == Level::kSyllable) {
    for (char32_t cp : Utf8Decode(text)) {
      if (cp != U' ') out.push_back(Utf8Encode(cp));
    }
  } else {
    for (const auto &item : hangul::DecomposeText(text)) {
      if (!std::holds_alternative<hangul::WordDelimiter>(item)) {
        out.push_back(hangul::ItemToString(item));
      }
    }
  }
  return out;
}

TokenSeq TextToTokens(std::string_view text, const Vocabulary &vocab,
                      Level level) {
  TokenSeq out;
  auto map_unit = [&](const std::string &unit, bool is_space, std::size_t pos) {
    if (is_space) {
      out.push_back(vocab.delimiter_index());
      return;
    }
    auto id = vocab.Find(unit);
    if (!id) throw OutOfVocabularyError(unit, pos);
    out.push_back(*id);
  };

  if (level == Level::kSyllable) {
    std::u32string cps = Utf8Decode(text);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      map_unit(Utf8Encode(cps[i]), cps[i] == U' ', i);
    }
  } else {
    hangul::JamoSequence items = hangul::DecomposeText(text);
    for (std::size_t i = 0; i < items.size(); ++i) {
      bool space = std::holds_alternative<hangul::WordDelimiter>(items[i]);
      map_unit(space ? std::string() : hangul::ItemToString(items[i]), space, i);
    }
  }
  return out;
}

hangul::JamoSequence TokensToJamo(const TokenSeq &tokens,
                                  const Vocabulary &vocab) {
  hangul::JamoSequence out;
  for (TokenId id : tokens) {
    CheckToken(id, vocab);
    if (id == vocab.delimiter_index()) {
      out.emplace_back(hangul::WordDelimiter{});
      continue;
    }
    for (const auto &item : hangul::DecomposeText(vocab.token(id))) {
      const auto *pass = std::get_if<hangul::Passthrough>(&item);
      if (pass != nullptr) {
        if (auto jamo = hangul::Jamo::Make(pass->codepoint)) {
          out.emplace_back(*jamo);
          continue;
        }
      }
      out.push_back(item);
    }
  }
  return out;
}

std::string TokensToText(const TokenSeq &tokens, const Vocabulary &vocab,
                         Level level) {
  if (level == Level::kGrapheme) {
    return hangul::ComposeJamo(TokensToJamo(tokens, vocab));
  }
  std::string out;
  for (TokenId id : tokens) {
    CheckToken(id, vocab);
    if (id == vocab.delimiter_index()) {
      out.push_back(' ');
    } else {
      out += vocab.token(id);
    }
  }
  return out;
}

}  // namespace hanjoint
