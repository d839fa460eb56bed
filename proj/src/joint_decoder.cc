// hanjoint/joint_decoder.cc

#include "hanjoint/joint_decoder.h"

#include <algorithm>
#include <map>

#include "hanjoint/ctc.h"
#include "hanjoint/error.h"
#include "hanjoint/log_math.h"
#include "hanjoint/tokenize.h"

namespace hanjoint::joint {

namespace {

std::optional<double> HeadLogProb(std::string_view text,
                                  const EmissionLattice &lattice,
                                  const Vocabulary &vocab, Level level) {
  TokenSeq tokens;
  try {
    tokens = TextToTokens(text, vocab, level);
  } catch (const OutOfVocabularyError &) {
    return std::nullopt;
  }
  return ctc::CtcLogProb(lattice, tokens).log_prob;
}

}  // namespace

void JointConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
  beam.Validate();
}

std::vector<TextHypothesis> RenderHypotheses(
    const std::vector<beam::Hypothesis> &hyps, const Vocabulary &vocab,
    std::size_t *dropped) {
  std::vector<TextHypothesis> out;
  out.reserve(hyps.size());
  for (const auto &h : hyps) {
    try {
      out.push_back({TokensToText(h.tokens, vocab, h.level), h.log_prob});
    } catch (const NonComposableError &) {
      if (dropped != nullptr) ++*dropped;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TextHypothesis &a, const TextHypothesis &b) {
                     if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                     return a.text < b.text;
                   });
  return out;
}

ScoredCandidate RescoreCandidate(std::string_view text,
                                 const EmissionLattice &syllable_lattice,
                                 const EmissionLattice &grapheme_lattice,
                                 const Vocabulary &syllable_vocab,
                                 const Vocabulary &grapheme_vocab,
                                 double gamma) {
  ScoredCandidate c;
  c.text = std::string(text);
  c.syllable_log_prob =
      HeadLogProb(text, syllable_lattice, syllable_vocab, Level::kSyllable);
  c.grapheme_log_prob =
      HeadLogProb(text, grapheme_lattice, grapheme_vocab, Level::kGrapheme);
  c.joint_score =
      WeightedLogAdd(gamma, c.syllable_log_prob.value_or(kLogZero),
                     1.0 - gamma, c.grapheme_log_prob.value_or(kLogZero));
  return c;
}

JointResult JointDecode(const EmissionLattice &syllable_lattice,
                        const EmissionLattice &grapheme_lattice,
                        const Vocabulary &syllable_vocab,
                        const Vocabulary &grapheme_vocab,
                        const JointConfig &config) {
  config.Validate();
  JointResult result;

  auto syll_hyps = beam::PrefixBeamSearch(syllable_lattice, syllable_vocab,
                                          config.beam, Level::kSyllable);
  auto grap_hyps = beam::PrefixBeamSearch(grapheme_lattice, grapheme_vocab,
                                          config.beam, Level::kGrapheme);

  // Ordered map keeps the union deterministic.
  std::map<std::string, unsigned> provenance;
  for (const auto &h : RenderHypotheses(syll_hyps, syllable_vocab)) {
    provenance[h.text] |= kFromSyllableBeam;
  }
  for (const auto &h : RenderHypotheses(grap_hyps, grapheme_vocab,
                                        &result.dropped_noncomposable)) {
    provenance[h.text] |= kFromGraphemeBeam;
  }
  if (provenance.empty()) {
    throw Error(ErrorCode::kBothBeamsEmpty, "no candidates from either beam");
  }

  result.candidates.reserve(provenance.size());
  for (const auto &[text, bits] : provenance) {
    ScoredCandidate c =
        RescoreCandidate(text, syllable_lattice, grapheme_lattice,
                         syllable_vocab, grapheme_vocab, config.gamma);
    c.provenance = bits;
    result.candidates.push_back(std::move(c));
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const ScoredCandidate &a, const ScoredCandidate &b) {
                     if (a.joint_score != b.joint_score) {
                       return a.joint_score > b.joint_score;
                     }
                     return a.text < b.text;
                   });
  return result;
}

}  // namespace hanjoint::joint
