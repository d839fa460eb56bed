// hanjoint/selfcheck.cc

#include "hanjoint/selfcheck.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hanjoint/beam_search.h"
#include "hanjoint/ctc.h"
#include "hanjoint/hangul.h"
#include "hanjoint/joint_decoder.h"
#include "hanjoint/synth.h"
#include "hanjoint/utf8.h"

namespace hanjoint::selfcheck {

namespace {

bool Close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

TokenSeq RandomLabel(synth::Rng &rng, std::size_t max_len, std::size_t vocab) {
  TokenSeq label(rng.Below(max_len + 1));
  for (auto &t : label) t = static_cast<TokenId>(1 + rng.Below(vocab - 1));
  return label;
}

CheckResult CtcVsBruteForce() {
  synth::Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::size_t frames = 1 + rng.Below(6);
    std::size_t vocab = 2 + rng.Below(3);
    auto lattice = synth::RandomLattice(frames, vocab, rng.Next());
    TokenSeq label = RandomLabel(rng, frames, vocab);
    double fast = ctc::CtcLogProb(lattice, label).log_prob;
    double slow = synth::BruteForceCtc(lattice, label);
    if (!Close(fast, slow, 1e-9)) {
      return {"ctc_brute_force", false,
              "instance " + std::to_string(i) + " differs"};
    }
    if (!std::isinf(fast)) worst = std::max(worst, std::abs(fast - slow));
  }
  std::ostringstream ss;
  ss << "50 instances, max |diff| " << worst;
  return {"ctc_brute_force", true, ss.str()};
}

CheckResult GradientVsFiniteDifference() {
  synth::Rng rng(23);
  constexpr double kEps = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    std::size_t frames = 2 + rng.Below(5);
    std::size_t vocab = 2 + rng.Below(4);
    auto probs = synth::RandomLattice(frames, vocab, rng.Next());
    EmissionLattice logits(frames, vocab,
                           {probs.scores().begin(), probs.scores().end()},
                           false);
    TokenSeq label = RandomLabel(rng, frames / 2, vocab);
    auto analytic = ctc::CtcLossAndGrad(logits, label);
    std::vector<double> scores(logits.scores().begin(), logits.scores().end());
    for (std::size_t k = 0; k < scores.size(); ++k) {
      double saved = scores[k];
      scores[k] = saved + kEps;
      double up = ctc::CtcLossAndGrad({frames, vocab, scores, false}, label)
                      .score.log_prob;
      scores[k] = saved - kEps;
      double down = ctc::CtcLossAndGrad({frames, vocab, scores, false}, label)
                        .score.log_prob;
      scores[k] = saved;
      double fd = (up - down) / (2 * kEps);
      double g = analytic.gradient.data[k];
      double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  std::ostringstream ss;
  ss << "10 instances, max relative error " << worst;
  return {"ctc_gradient", worst <= 1e-3, ss.str()};
}

CheckResult HangulRoundTrip() {
  for (char32_t cp = hangul::kSyllableFirst; cp <= hangul::kSyllableLast; ++cp) {
    std::string text = Utf8Encode(cp);
    if (hangul::ComposeJamo(hangul::DecomposeText(text)) != text) {
      return {"hangul_round_trip", false, "failed at U+" + std::to_string(cp)};
    }
  }
  return {"hangul_round_trip", true, "11172 syllables"};
}

CheckResult LatticeRoundTrip() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto lattice = synth::RandomLattice(1 + seed % 7, 2 + seed % 5, seed);
    auto text = ParseTextLattice(SerializeTextLattice(lattice));
    auto binary = ParseBinaryLattice(SerializeBinaryLattice(lattice));
    for (std::size_t k = 0; k < lattice.scores().size(); ++k) {
      double v = lattice.scores()[k];
      if (text.scores()[k] != v ||
          binary.scores()[k] != static_cast<double>(static_cast<float>(v))) {
        return {"lattice_round_trip", false, "seed " + std::to_string(seed)};
      }
    }
  }
  return {"lattice_round_trip", true, "20 lattices, text and binary"};
}

CheckResult BeamExactness() {
  synth::Rng rng(37);
  for (int i = 0; i < 30; ++i) {
    std::size_t frames = 1 + rng.Below(5);
    std::size_t vocab_size = 2 + rng.Below(2);
    std::vector<std::string> tokens = {std::string(kBlankToken),
                                       std::string(kDelimiterToken)};
    for (std::size_t v = 2; v < vocab_size; ++v) tokens.push_back(Utf8Encode(U'a' + v));
    auto vocab = Vocabulary::FromTokens(tokens);
    auto lattice = synth::RandomLattice(frames, vocab_size, rng.Next());
    auto hyps = beam::PrefixBeamSearch(lattice, vocab, {1000, 1000, 0},
                                       Level::kSyllable);
    auto best = synth::BruteForceBest(lattice, frames);
    if (hyps.empty() || hyps.front().tokens != best.tokens ||
        !Close(hyps.front().log_prob, best.log_prob, 1e-9)) {
      return {"beam_exactness", false, "instance " + std::to_string(i)};
    }
  }
  return {"beam_exactness", true, "30 instances"};
}

CheckResult JointEndpoints() {
  synth::SynthSpec spec;
  spec.noise = 0.3;
  auto corpus = synth::GenOovCorpus(synth::RandomTexts(10, 5), {}, spec);
  for (const auto &u : corpus.utterances) {
    for (double gamma : {0.0, 1.0}) {
      auto result = joint::JointDecode(u.syllable_lattice, u.grapheme_lattice,
                                       corpus.syllable_vocab,
                                       corpus.grapheme_vocab,
                                       {gamma, {16, 16, 0}});
      for (const auto &c : result.candidates) {
        const auto &head = gamma == 1.0 ? c.syllable_log_prob : c.grapheme_log_prob;
        double expected = head ? *head : -INFINITY;
        if (!Close(c.joint_score, expected, 1e-12)) {
          return {"joint_endpoints", false, u.id + " '" + c.text + "'"};
        }
      }
    }
  }
  return {"joint_endpoints", true, "10 utterances, gamma 0 and 1"};
}

}  // namespace

std::vector<CheckResult> RunAll() {
  std::vector<CheckResult> results;
  for (auto check : {CtcVsBruteForce, GradientVsFiniteDifference,
                     HangulRoundTrip, LatticeRoundTrip, BeamExactness,
                     JointEndpoints}) {
    try {
      results.push_back(check());
    } catch (const std::exception &e) {
      results.push_back({"exception", false, e.what()});
    }
  }
  return results;
}

}  // namespace hanjoint::selfcheck
