#include "hanjoint/joint_decoder.h"

#include <gtest/gtest.h>

#include <cmath>

#include "hanjoint/ctc.h"
#include "hanjoint/error.h"
#include "hanjoint/synth.h"

namespace hanjoint::joint {
namespace {

class JointTest : public ::testing::Test {
 protected:
  Vocabulary syl_ = Vocabulary::FromTokens({"<ctc_blank>", "|", "흑", "가", "나"});
  Vocabulary gra_ = Vocabulary::FromTokens(
      {"<ctc_blank>", "|", "ㅎ", "ㅡ", "ㄱ", "ㄺ", "ㅏ", "ㄴ"});
};

TEST_F(JointTest, OovSyllableRecoveredFromGraphemes) {
  synth::SynthSpec spec{"흙 가", 1, 0, 0.0, 0};
  auto syl = synth::GenLattice(spec, syl_, Level::kSyllable, synth::OovPolicy::kUniform);
  auto gra = synth::GenLattice(spec, gra_, Level::kGrapheme);
  auto result = JointDecode(syl, gra, syl_, gra_, {0.5, {}});
  ASSERT_FALSE(result.candidates.empty());
  const auto &top = result.candidates.front();
  EXPECT_EQ(top.text, "흙 가");
  EXPECT_FALSE(top.syllable_log_prob.has_value());
  ASSERT_TRUE(top.grapheme_log_prob.has_value());
  EXPECT_NEAR(top.joint_score, std::log(0.5) + *top.grapheme_log_prob, 1e-12);
  EXPECT_EQ(top.provenance, static_cast<unsigned>(kFromGraphemeBeam));
}

TEST_F(JointTest, RescoreIdentities) {
  auto syl = synth::RandomLattice(4, syl_.size(), 1);
  auto gra = synth::RandomLattice(8, gra_.size(), 2);
  auto c = RescoreCandidate("가나", syl, gra, syl_, gra_, 0.5);
  ASSERT_TRUE(c.syllable_log_prob && c.grapheme_log_prob);
  double p = std::exp(*c.syllable_log_prob), q = std::exp(*c.grapheme_log_prob);
  EXPECT_NEAR(c.joint_score, std::log(0.5 * p + 0.5 * q), 1e-12);
  EXPECT_GT(c.joint_score, std::log(0.5) + std::max(*c.syllable_log_prob,
                                                    *c.grapheme_log_prob));
  EXPECT_EQ(RescoreCandidate("가나", syl, gra, syl_, gra_, 1.0).joint_score,
            *c.syllable_log_prob);
  EXPECT_EQ(RescoreCandidate("가나", syl, gra, syl_, gra_, 0.0).joint_score,
            *c.grapheme_log_prob);
}

TEST_F(JointTest, EqualHeadsGiveThatProbability) {
  // Both heads see the same single-frame distribution over one token.
  auto syl_vocab = Vocabulary::FromTokens({"<ctc_blank>", "|", "A"});
  auto lat = EmissionLattice::FromRows(
      {{std::log(0.3), std::log(0.1), std::log(0.6)}}, true);
  auto c = RescoreCandidate("A", lat, lat, syl_vocab, syl_vocab, 0.5);
  EXPECT_NEAR(c.joint_score, std::log(0.6), 1e-12);
}

TEST_F(JointTest, GammaEndpointsMatchSingleHeadBeams) {
  synth::Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    std::string text = synth::RandomTexts(1, rng.Next(), 3).front();
    auto syl_vocab = Vocabulary::Build(TextUnits(text, Level::kSyllable));
    auto gra_vocab = Vocabulary::Build(TextUnits(text, Level::kGrapheme));
    synth::SynthSpec spec{text, 1, 0, 0.4, 0};
    auto syl = synth::GenLattice(spec, syl_vocab, Level::kSyllable);
    auto gra = synth::GenLattice(spec, gra_vocab, Level::kGrapheme);
    beam::BeamConfig bc{32, 32, 0};
    auto syl_top = RenderHypotheses(
        beam::PrefixBeamSearch(syl, syl_vocab, bc, Level::kSyllable), syl_vocab);
    auto gra_top = RenderHypotheses(
        beam::PrefixBeamSearch(gra, gra_vocab, bc, Level::kGrapheme), gra_vocab);
    auto at1 = JointDecode(syl, gra, syl_vocab, gra_vocab, {1.0, bc});
    auto at0 = JointDecode(syl, gra, syl_vocab, gra_vocab, {0.0, bc});
    ASSERT_FALSE(syl_top.empty());
    ASSERT_FALSE(gra_top.empty());
    EXPECT_EQ(at1.candidates.front().text, syl_top.front().text) << text;
    EXPECT_EQ(at0.candidates.front().text, gra_top.front().text) << text;
  }
}

TEST_F(JointTest, CandidatesSortedAndUnique) {
  auto syl = synth::RandomLattice(3, syl_.size(), 4);
  auto gra = synth::RandomLattice(6, gra_.size(), 5);
  auto result = JointDecode(syl, gra, syl_, gra_, {0.5, {8, 8, 0}});
  std::set<std::string> seen;
  for (std::size_t k = 0; k < result.candidates.size(); ++k) {
    const auto &c = result.candidates[k];
    EXPECT_TRUE(seen.insert(c.text).second) << c.text;
    EXPECT_NE(c.provenance, 0u);
    if (k > 0) {
      const auto &p = result.candidates[k - 1];
      EXPECT_TRUE(p.joint_score > c.joint_score ||
                  (p.joint_score == c.joint_score && p.text < c.text));
    }
  }
  // Random grapheme lattices emit lone vowels; those hypotheses are dropped.
  EXPECT_GT(result.dropped_noncomposable, 0u);
}

TEST_F(JointTest, RenderDropsNonComposable) {
  std::vector<beam::Hypothesis> hyps = {
      {{6}, -1.0, Level::kGrapheme},            // ㅏ
      {{4, 6}, -2.0, Level::kGrapheme},         // 가
  };
  std::size_t dropped = 0;
  auto texts = RenderHypotheses(hyps, gra_, &dropped);
  EXPECT_EQ(dropped, 1u);
  ASSERT_EQ(texts.size(), 1u);
  EXPECT_EQ(texts[0].text, "가");
}

TEST_F(JointTest, ConfigValidation) {
  EXPECT_THROW((JointConfig{-0.1, {}}.Validate()), Error);
  EXPECT_THROW((JointConfig{1.1, {}}.Validate()), Error);
  EXPECT_NO_THROW((JointConfig{0.0, {}}.Validate()));
}

}  // namespace
}  // namespace hanjoint::joint
