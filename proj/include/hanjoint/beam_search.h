// hanjoint/beam_search.h
//
// CTC prefix beam search. Each beam entry is a collapsed label prefix with
// separate blank-ending and non-blank-ending log probabilities; duplicate
// prefixes reached through different alignments are merged by summing.

#ifndef HANJOINT_BEAM_SEARCH_H_
#define HANJOINT_BEAM_SEARCH_H_

#include <vector>

#include "hanjoint/lattice.h"
#include "hanjoint/tokenize.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint::beam {

struct BeamConfig {
  int beam_width = 100;
  int max_output = 100;
  // When positive, only the `token_cutoff` most probable non-blank tokens of
  // each frame may extend a prefix. 0 disables the cutoff.
  int token_cutoff = 0;

  // Throws InvalidConfig unless 1 <= max_output <= beam_width and
  // token_cutoff >= 0.
  void Validate() const;
};

struct Hypothesis {
  TokenSeq tokens;
  // ctc::CtcLogProb of `tokens`. Equal to the search's accumulated mass
  // when nothing was pruned, and never below it.
  double log_prob;
  Level level;
};

// Requires a normalized lattice whose width equals vocab.size(). Returns up
// to max_output hypotheses by descending log_prob; equal scores are
// ordered lexicographically by token ids. An empty lattice yields the
// single empty hypothesis with log_prob 0.
std::vector<Hypothesis> PrefixBeamSearch(const EmissionLattice &lattice,
                                         const Vocabulary &vocab,
                                         const BeamConfig &config,
                                         Level level);

}  // namespace hanjoint::beam

#endif  // HANJOINT_BEAM_SEARCH_H_
