#include "hanjoint/tokenize.h"

#include <gtest/gtest.h>

#include "hanjoint/error.h"

namespace hanjoint {
namespace {

Vocabulary SyllableVocab() {
  return Vocabulary::FromTokens({"<ctc_blank>", "|", "가", "나"});
}

TEST(Tokenize, SyllableLookup) {
  EXPECT_EQ(TextToTokens("가 나", SyllableVocab(), Level::kSyllable),
            (TokenSeq{2, 1, 3}));
  EXPECT_EQ(TokensToText({2, 1, 3}, SyllableVocab(), Level::kSyllable), "가 나");
}

TEST(Tokenize, OutOfVocabularyNamesUnitAndPosition) {
  try {
    TextToTokens("다", SyllableVocab(), Level::kSyllable);
    FAIL();
  } catch (const OutOfVocabularyError &e) {
    EXPECT_EQ(e.unit(), "다");
    EXPECT_EQ(e.position(), 0u);
  }
  try {
    TextToTokens("가 다", SyllableVocab(), Level::kSyllable);
    FAIL();
  } catch (const OutOfVocabularyError &e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Tokenize, GraphemeLevel) {
  auto vocab = Vocabulary::FromTokens(
      {"<ctc_blank>", "|", "ㅎ", "ㅏ", "ㄴ", "ㄱ", "ㅡ", "ㄹ"});
  TokenSeq tokens = TextToTokens("한글", vocab, Level::kGrapheme);
  EXPECT_EQ(tokens, (TokenSeq{2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(TokensToText(tokens, vocab, Level::kGrapheme), "한글");
  EXPECT_THROW(TokensToText({3}, vocab, Level::kGrapheme), NonComposableError);
}

TEST(Tokenize, TextUnits) {
  EXPECT_EQ(TextUnits("가 나", Level::kSyllable),
            (std::vector<std::string>{"가", "나"}));
  EXPECT_EQ(TextUnits("값 A", Level::kGrapheme),
            (std::vector<std::string>{"ㄱ", "ㅏ", "ㅄ", "A"}));
}

TEST(Tokenize, RejectsBlankAndOutOfRange) {
  try {
    TokensToText({0}, SyllableVocab(), Level::kSyllable);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kBlankInLabel);
  }
  try {
    TokensToText({9}, SyllableVocab(), Level::kSyllable);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelOutOfRange);
  }
}

TEST(Tokenize, ParseLevel) {
  EXPECT_EQ(ParseLevel("grapheme"), Level::kGrapheme);
  EXPECT_EQ(LevelName(Level::kSyllable), "syllable");
  EXPECT_THROW(ParseLevel("word"), Error);
}

}  // namespace
}  // namespace hanjoint
