#include "hanjoint/ctc.h"

#include <gtest/gtest.h>

#include <cmath>

#include "hanjoint/error.h"
#include "hanjoint/synth.h"
#include "oracles.h"

namespace hanjoint::ctc {
namespace {

EmissionLattice Probs(const std::vector<std::vector<double>> &rows) {
  std::vector<std::vector<double>> logs = rows;
  for (auto &r : logs) {
    for (auto &v : r) v = std::log(v);
  }
  return EmissionLattice::FromRows(logs, true);
}

TokenSeq RandomLabel(synth::Rng &rng, std::size_t max_len, std::size_t V) {
  TokenSeq label(rng.Below(max_len + 1));
  for (auto &t : label) t = static_cast<TokenId>(1 + rng.Below(V - 1));
  return label;
}

TEST(CtcLogProb, UniformTwoFrames) {
  auto lat = Probs({{0.5, 0.5}, {0.5, 0.5}});
  auto s = CtcLogProb(lat, {1});
  EXPECT_TRUE(s.feasible);
  EXPECT_NEAR(s.log_prob, std::log(0.75), 1e-12);
}

TEST(CtcLogProb, SingleFrame) {
  auto lat = Probs({{0.1, 0.9}});
  EXPECT_NEAR(CtcLogProb(lat, {1}).log_prob, std::log(0.9), 1e-12);
  EXPECT_NEAR(CtcLogProb(lat, {}).log_prob, std::log(0.1), 1e-12);
}

TEST(CtcLogProb, RepeatNeedsSeparatingBlank) {
  auto lat = Probs({{0.1, 0.9}});
  auto s = CtcLogProb(lat, {1, 1});
  EXPECT_FALSE(s.feasible);
  EXPECT_EQ(s.log_prob, -INFINITY);
  EXPECT_FALSE(IsFeasible(2, {1, 1}));
  EXPECT_TRUE(IsFeasible(3, {1, 1}));
  EXPECT_TRUE(IsFeasible(2, {1, 2}));
  EXPECT_TRUE(IsFeasible(0, {}));
}

TEST(CtcLogProb, EmptyLattice) {
  EmissionLattice lat(0, 3, {}, true);
  EXPECT_EQ(CtcLogProb(lat, {}).log_prob, 0.0);
  EXPECT_FALSE(CtcLogProb(lat, {1}).feasible);
}

TEST(CtcLogProb, Preconditions) {
  EmissionLattice raw(1, 2, {0, 0}, false);
  try {
    CtcLogProb(raw, {1});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotNormalized);
  }
  auto lat = Probs({{0.5, 0.5}});
  try {
    CtcLogProb(lat, {0});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kBlankInLabel);
  }
  try {
    CtcLogProb(lat, {2});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelOutOfRange);
  }
}

TEST(CtcLogProb, MatchesPathEnumeration) {
  synth::Rng rng(1234);
  for (int i = 0; i < 300; ++i) {
    std::size_t F = 1 + rng.Below(6), V = 2 + rng.Below(3);
    auto lat = synth::RandomLattice(F, V, rng.Next(), 3.0);
    TokenSeq label = RandomLabel(rng, 3, V);
    double expected = oracle::PathSumLogProb(lat, label);
    double got = CtcLogProb(lat, label).log_prob;
    if (std::isinf(expected)) {
      EXPECT_EQ(got, expected);
    } else {
      EXPECT_NEAR(got, expected, 1e-9) << "instance " << i;
    }
  }
}

TEST(CtcLogProb, SumOverAllLabelsIsOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto lat = synth::RandomLattice(4, 3, seed);
    auto dist = synth::CollapsedDistribution(lat);
    long double total = 0;
    for (const auto &[label, lp] : dist) {
      EXPECT_NEAR(CtcLogProb(lat, label).log_prob, lp, 1e-9);
      total += std::exp((long double)lp);
    }
    EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12);
  }
}

TEST(CtcLossAndGrad, SingleFrameClosedForm) {
  EmissionLattice logits(1, 3, {0.2, 1.3, -0.4}, false);
  auto r = CtcLossAndGrad(logits, {1});
  double z = std::exp(0.2) + std::exp(1.3) + std::exp(-0.4);
  EXPECT_NEAR(r.gradient.at(0, 1), 1 - std::exp(1.3) / z, 1e-12);
  EXPECT_NEAR(r.gradient.at(0, 0), -std::exp(0.2) / z, 1e-12);
  EXPECT_NEAR(r.score.log_prob, 1.3 - std::log(z), 1e-12);
}

TEST(CtcLossAndGrad, MatchesFiniteDifferences) {
  synth::Rng rng(77);
  constexpr double kEps = 1e-4;
  for (int i = 0; i < 20; ++i) {
    std::size_t F = 1 + rng.Below(6), V = 2 + rng.Below(3);
    std::vector<double> x(F * V);
    for (auto &v : x) v = 4 * (rng.Unit() - 0.5);
    TokenSeq label = RandomLabel(rng, std::min<std::size_t>(F, 3), V);
    if (!IsFeasible(F, label)) continue;
    auto r = CtcLossAndGrad({F, V, x, false}, label);
    for (std::size_t k = 0; k < x.size(); ++k) {
      auto y = x;
      y[k] = x[k] + kEps;
      double up = CtcLossAndGrad({F, V, y, false}, label).score.log_prob;
      y[k] = x[k] - kEps;
      double down = CtcLossAndGrad({F, V, y, false}, label).score.log_prob;
      double fd = (up - down) / (2 * kEps);
      EXPECT_NEAR(r.gradient.data[k], fd, 1e-3 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(CtcLossAndGrad, RowsSumToZero) {
  auto lat = synth::RandomLattice(6, 4, 5);
  std::vector<double> x(lat.scores().begin(), lat.scores().end());
  auto r = CtcLossAndGrad({6, 4, x, false}, {1, 2, 1});
  for (std::size_t f = 0; f < 6; ++f) {
    double sum = 0;
    for (std::size_t v = 0; v < 4; ++v) sum += r.gradient.at(f, v);
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(CtcLossAndGrad, SymmetricFramesHaveEqualGradients) {
  EmissionLattice logits(2, 2, {0, 0, 0, 0}, false);
  auto r = CtcLossAndGrad(logits, {1});
  EXPECT_NEAR(r.gradient.at(0, 0), r.gradient.at(1, 0), 1e-15);
  EXPECT_NEAR(r.gradient.at(0, 1), r.gradient.at(1, 1), 1e-15);
}

TEST(CtcLossAndGrad, InfeasibleGivesZeroGradient) {
  EmissionLattice logits(1, 2, {0, 0}, false);
  auto r = CtcLossAndGrad(logits, {1, 1});
  EXPECT_FALSE(r.score.feasible);
  for (double g : r.gradient.data) EXPECT_EQ(g, 0.0);
}

class MultiTaskLossTest : public ::testing::Test {
 protected:
  Vocabulary syl_ = Vocabulary::FromTokens({"<ctc_blank>", "|", "가", "나"});
  Vocabulary gra_ =
      Vocabulary::FromTokens({"<ctc_blank>", "|", "ㄱ", "ㅏ", "ㄴ"});
  EmissionLattice syl_lat_ = synth::RandomLattice(6, 4, 1);
  EmissionLattice gra_lat_ = synth::RandomLattice(9, 5, 2);
};

TEST_F(MultiTaskLossTest, EndpointsAndMean) {
  auto at = [&](double lambda) {
    return MultiTaskLoss(syl_lat_, gra_lat_, "가 나", syl_, gra_, {lambda});
  };
  auto one = at(1.0), zero = at(0.0), half = at(0.5);
  EXPECT_EQ(one.total, one.syllable_log_prob);
  EXPECT_EQ(zero.total, zero.grapheme_log_prob);
  EXPECT_NEAR(half.total, (half.syllable_log_prob + half.grapheme_log_prob) / 2,
              1e-12);
  EXPECT_EQ(half.syllable_log_prob,
            CtcLogProb(syl_lat_, TextToTokens("가 나", syl_, Level::kSyllable))
                .log_prob);
}

TEST_F(MultiTaskLossTest, GradientsAreScaledHeads) {
  auto r = MultiTaskLoss(syl_lat_, gra_lat_, "가나", syl_, gra_, {0.25}, true);
  ASSERT_TRUE(r.gradients.has_value());
  auto head = CtcLossAndGrad(syl_lat_, {2, 3});
  for (std::size_t k = 0; k < head.gradient.data.size(); ++k) {
    EXPECT_NEAR(r.gradients->first.data[k], 0.25 * head.gradient.data[k], 1e-15);
  }
}

TEST_F(MultiTaskLossTest, HeadErrors) {
  try {
    MultiTaskLoss(syl_lat_, gra_lat_, "다", syl_, gra_, {0.5});
    FAIL();
  } catch (const HeadError &e) {
    EXPECT_EQ(e.head(), "syllable");
    EXPECT_EQ(e.inner_code(), ErrorCode::kOutOfVocabulary);
    EXPECT_EQ(e.unit(), "다");
  }
  auto short_gra = synth::RandomLattice(2, 5, 3);
  try {
    MultiTaskLoss(syl_lat_, short_gra, "가나", syl_, gra_, {0.5});
    FAIL();
  } catch (const HeadError &e) {
    EXPECT_EQ(e.head(), "grapheme");
    EXPECT_EQ(e.inner_code(), ErrorCode::kInfeasibleLabel);
  }
  EXPECT_THROW(MultiTaskLoss(syl_lat_, gra_lat_, "가", syl_, gra_, {1.5}), Error);
}

TEST(Greedy, Collapse) {
  // Peaked rows along [blank, a, a, blank, b].
  auto peaked = [](std::vector<int> path) {
    std::vector<std::vector<double>> rows;
    for (int t : path) {
      std::vector<double> r(3, 0.1);
      r[t] = 0.8;
      rows.push_back(r);
    }
    return Probs(rows);
  };
  EXPECT_EQ(GreedyTokens(peaked({0, 1, 1, 0, 2})), (TokenSeq{1, 2}));
  EXPECT_EQ(GreedyTokens(peaked({0, 0, 0})), TokenSeq{});
  EXPECT_EQ(GreedyTokens(peaked({1, 0, 1})), (TokenSeq{1, 1}));
  auto vocab = Vocabulary::FromTokens({"<ctc_blank>", "|", "a"});
  EXPECT_EQ(GreedyDecode(peaked({2, 1, 2}), vocab, Level::kSyllable), "a a");
}

TEST(Greedy, TiesGoToLowestIndex) {
  EXPECT_EQ(GreedyTokens(Probs({{0.5, 0.5}})), TokenSeq{});
  EXPECT_EQ(GreedyTokens(Probs({{0.2, 0.4, 0.4}})), TokenSeq{1});
}

}  // namespace
}  // namespace hanjoint::ctc
