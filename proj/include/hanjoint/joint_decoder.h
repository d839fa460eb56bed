// hanjoint/joint_decoder.h
//
// Joint decoding over syllable and grapheme CTC heads. The candidate set is
// the union of both beams, with grapheme hypotheses composed into syllable
// text. Every candidate is rescored on both lattices and ranked by
//
//   log(gamma * p_syll(Y) + (1 - gamma) * p_grap(Y))
//
// where a head that cannot represent Y (out-of-vocabulary unit) contributes
// probability zero.

#ifndef HANJOINT_JOINT_DECODER_H_
#define HANJOINT_JOINT_DECODER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hanjoint/beam_search.h"
#include "hanjoint/lattice.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint::joint {

enum Provenance : unsigned {
  kFromSyllableBeam = 1u << 0,
  kFromGraphemeBeam = 1u << 1,
};

struct JointConfig {
  double gamma = 0.5;
  beam::BeamConfig beam;
  // Throws InvalidConfig unless 0 <= gamma <= 1 and the beam config is valid.
  void Validate() const;
};

struct ScoredCandidate {
  std::string text;
  // Absent when the text has a unit missing from that head's vocabulary.
  // Present but -inf when the label does not fit in the lattice.
  std::optional<double> syllable_log_prob;
  std::optional<double> grapheme_log_prob;
  double joint_score;
  unsigned provenance = 0;  // Provenance bits; 0 from RescoreCandidate
};

// A beam hypothesis rendered as syllable text.
struct TextHypothesis {
  std::string text;
  double log_prob;
};

// Renders hypotheses as text ordered by log_prob descending, then text
// ascending (the candidate order of JointDecode). At the grapheme level
// hypotheses that cannot be composed are skipped and counted in *dropped.
std::vector<TextHypothesis> RenderHypotheses(
    const std::vector<beam::Hypothesis> &hyps, const Vocabulary &vocab,
    std::size_t *dropped = nullptr);

ScoredCandidate RescoreCandidate(std::string_view text,
                                 const EmissionLattice &syllable_lattice,
                                 const EmissionLattice &grapheme_lattice,
                                 const Vocabulary &syllable_vocab,
                                 const Vocabulary &grapheme_vocab,
                                 double gamma);

struct JointResult {
  // Sorted by joint_score descending, then text ascending (byte order).
  std::vector<ScoredCandidate> candidates;
  // Grapheme hypotheses that could not be composed into syllables.
  std::size_t dropped_noncomposable = 0;
};

JointResult JointDecode(const EmissionLattice &syllable_lattice,
                        const EmissionLattice &grapheme_lattice,
                        const Vocabulary &syllable_vocab,
                        const Vocabulary &grapheme_vocab,
                        const JointConfig &config);

}  // namespace hanjoint::joint

#endif  // HANJOINT_JOINT_DECODER_H_
