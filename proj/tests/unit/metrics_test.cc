#include "hanjoint/metrics.h"

#include <gtest/gtest.h>

#include "hanjoint/error.h"
#include "hanjoint/synth.h"
#include "hanjoint/utf8.h"
#include "oracles.h"

namespace hanjoint::metrics {
namespace {

std::vector<std::string> Chars(std::string_view s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

std::string RemoveSpaces(std::string s) {
  std::erase(s, ' ');
  return s;
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(Levenshtein(Chars("abc"), Chars("abc")).summary.errors(), 0u);
  auto sub = Levenshtein(Chars("abc"), Chars("axc")).summary;
  EXPECT_EQ(sub.substitutions, 1u);
  EXPECT_EQ(sub.errors(), 1u);
  EXPECT_EQ(Levenshtein(Chars("kitten"), Chars("sitting")).summary.errors(), 3u);
}

TEST(Levenshtein, MatchesWagnerFischerAndOpsAreConsistent) {
  synth::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (std::size_t k = rng.Below(9); k > 0; --k) a += static_cast<char>('a' + rng.Below(3));
    for (std::size_t k = rng.Below(9); k > 0; --k) b += static_cast<char>('a' + rng.Below(3));
    auto al = Levenshtein(Chars(a), Chars(b));
    ASSERT_EQ(al.summary.errors(), oracle::EditDistance(a, b)) << a << "/" << b;
    std::size_t ref = 0, hyp = 0;
    for (EditOp op : al.ops) {
      if (op != EditOp::kInsertion) ++ref;
      if (op != EditOp::kDeletion) ++hyp;
    }
    EXPECT_EQ(ref, a.size());
    EXPECT_EQ(hyp, b.size());
    EXPECT_EQ(al.summary.reference_length, a.size());
  }
}

TEST(Levenshtein, BacktracePrefersSubstitution) {
  auto al = Levenshtein(Chars("ab"), Chars("ba"));
  EXPECT_EQ(al.summary.substitutions, 2u);
  EXPECT_EQ(al.summary.insertions + al.summary.deletions, 0u);
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(Cer("가나다라마", "가나타라마").rate(), 0.2);
  EXPECT_DOUBLE_EQ(Cer("가나다라", "가나다라").rate(), 0.0);
  auto all_deleted = Cer("가나다라", "");
  EXPECT_EQ(all_deleted.deletions, 4u);
  EXPECT_DOUBLE_EQ(all_deleted.rate(), 1.0);
  EXPECT_DOUBLE_EQ(Cer("가나 다", "가 나다").rate(), 0.0);
}

TEST(Wer, Examples) {
  auto w = Wer("안녕 하세요", "안녕하 세요");
  EXPECT_EQ(w.substitutions, 2u);
  EXPECT_DOUBLE_EQ(w.rate(), 1.0);
  EXPECT_DOUBLE_EQ(Wer("a b c", "a b c").rate(), 0.0);
  EXPECT_NEAR(Wer("a b c", "a x c").rate(), 1.0 / 3, 1e-12);
  EXPECT_DOUBLE_EQ(Wer("가나다 라마", "가나타 라마").rate(), 0.5);
}

TEST(SpaceNormalize, Examples) {
  EXPECT_EQ(SpaceNormalize("안녕 하세요", "안녕하 세요"), "안녕 하세요");
  EXPECT_EQ(SpaceNormalize("안녕 하세요", "안녕 하세요"), "안녕 하세요");
  EXPECT_EQ(SpaceNormalize("가나 다", "가타다"), "가타 다");
}

TEST(Swer, Examples) {
  EXPECT_DOUBLE_EQ(Swer("안녕 하세요", "안녕하 세요").rate(), 0.0);
  EXPECT_DOUBLE_EQ(Swer("안녕 하세요", "안녕 하세요").rate(), 0.0);
  EXPECT_DOUBLE_EQ(Swer("가나 다", "가타다").rate(), 0.5);
}

TEST(Metrics, EmptyReference) {
  for (auto fn : {Cer, Wer, Swer}) {
    try {
      fn("   ", "가");
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kEmptyReference);
    }
  }
}

TEST(Metrics, SpacingPerturbationProperties) {
  synth::Rng rng(17);
  auto texts = synth::RandomTexts(300, 3);
  for (const auto &ref : texts) {
    std::u32string chars = Utf8Decode(RemoveSpaces(ref));
    std::string hyp;
    for (std::size_t k = 0; k < chars.size(); ++k) {
      if (k > 0 && rng.Below(3) == 0) hyp += ' ';
      hyp += Utf8Encode(chars[k]);
    }
    std::string normalized = SpaceNormalize(ref, hyp);
    EXPECT_EQ(RemoveSpaces(normalized), RemoveSpaces(hyp));
    EXPECT_EQ(normalized, ref);
    EXPECT_EQ(Cer(ref, hyp).errors(), 0u);
    EXPECT_EQ(Swer(ref, hyp).errors(), 0u);
    if (WordUnits(ref) != WordUnits(hyp)) {
      EXPECT_GT(Wer(ref, hyp).errors(), 0u);
    }
  }
}

TEST(Evaluate, MicroAverages) {
  auto report = Evaluate({{"a", "가나다라", "가나다라"}, {"b", "가 나", "다 나"}});
  ASSERT_EQ(report.utterances.size(), 2u);
  EXPECT_EQ(report.cer.reference_length, 6u);
  EXPECT_EQ(report.cer.errors(), 1u);
  EXPECT_EQ(report.wer.reference_length, 3u);
  EXPECT_EQ(report.wer.errors(), 1u);
}

}  // namespace
}  // namespace hanjoint::metrics
