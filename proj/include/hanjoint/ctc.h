// hanjoint/ctc.h
//
// CTC scoring over emission lattices. Labels never contain the blank; the
// dynamic programs run over the 2L+1 blank-interleaved state sequence in
// the log domain.

#ifndef HANJOINT_CTC_H_
#define HANJOINT_CTC_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hanjoint/lattice.h"
#include "hanjoint/tokenize.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint::ctc {

// log p(label | lattice). An infeasible label (too few frames) has
// log_prob == -inf and feasible == false; a feasible label always has
// feasible == true even if its probability underflows.
struct CtcScore {
  double log_prob;
  bool feasible;
};

// F >= L + (number of adjacent equal pairs in the label).
bool IsFeasible(std::size_t frames, const TokenSeq &label);

// Requires a normalized lattice (NotNormalized otherwise). Throws
// BlankInLabel and LabelOutOfRange.
CtcScore CtcLogProb(const EmissionLattice &lattice, const TokenSeq &label);

// Row-major F x V matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double &at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

struct CtcGradient {
  CtcScore score;
  // d log p(label) / d logits. All zeros for infeasible labels.
  Matrix gradient;
};

// `logits` may be unnormalized; log-softmax is applied per row. The
// gradient is the state occupancy per token minus the softmax posterior.
CtcGradient CtcLossAndGrad(const EmissionLattice &logits, const TokenSeq &label);

struct MultiTaskLossConfig {
  double lambda = 0.5;
  // Throws InvalidConfig unless 0 <= lambda <= 1.
  void Validate() const;
};

struct LossResult {
  // lambda * syllable_log_prob + (1 - lambda) * grapheme_log_prob.
  double total;
  double syllable_log_prob;
  double grapheme_log_prob;
  // Gradients of `total` w.r.t. the syllable and grapheme logits.
  std::optional<std::pair<Matrix, Matrix>> gradients;
};

// Tokenizes `reference` at both levels and scores each head. Per-head
// failures (OutOfVocabulary, InfeasibleLabel) are thrown as HeadError with
// head() == "syllable" or "grapheme".
LossResult MultiTaskLoss(const EmissionLattice &syllable_logits,
                         const EmissionLattice &grapheme_logits,
                         std::string_view reference,
                         const Vocabulary &syllable_vocab,
                         const Vocabulary &grapheme_vocab,
                         const MultiTaskLossConfig &config,
                         bool with_gradients = false);

// Per-frame argmax (lowest index wins ties), then repeats collapsed and
// blanks removed.
TokenSeq GreedyTokens(const EmissionLattice &lattice);

// GreedyTokens rendered as text. At the grapheme level the result is
// composed into syllables and may throw NonComposableError.
std::string GreedyDecode(const EmissionLattice &lattice,
                         const Vocabulary &vocab, Level level);

}  // namespace hanjoint::ctc

#endif  // HANJOINT_CTC_H_
