// hanjoint/ctc.cc

#include "hanjoint/ctc.h"

#include <cmath>

#include "hanjoint/error.h"
#include "hanjoint/log_math.h"

namespace hanjoint::ctc {

namespace {

void CheckLabel(const TokenSeq &label, std::size_t vocab_size) {
  for (TokenId id : label) {
    if (id == kBlankId) {
      throw Error(ErrorCode::kBlankInLabel, "label contains the blank token");
    }
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label token " + std::to_string(id) + " outside lattice of width " +
                      std::to_string(vocab_size));
    }
  }
}

// Blank-interleaved label: b y1 b y2 ... yL b.
std::vector<TokenId> Extend(const TokenSeq &label) {
  std::vector<TokenId> ext(2 * label.size() + 1, kBlankId);
  for (std::size_t i = 0; i < label.size(); ++i) ext[2 * i + 1] = label[i];
  return ext;
}

// State s may be entered directly from s-2 (skipping a blank).
bool CanSkip(const std::vector<TokenId> &ext, std::size_t s) {
  return s >= 2 && ext[s] != kBlankId && ext[s] != ext[s - 2];
}

// Forward variables over all frames, alpha[f * S + s], including the
// emission at frame f. `log_probs` is F x V log-softmax output.
std::vector<double> Forward(std::span<const double> log_probs,
                            std::size_t frames, std::size_t vocab,
                            const std::vector<TokenId> &ext) {
  const std::size_t S = ext.size();
  std::vector<double> alpha(frames * S, kLogZero);
  if (frames == 0) return alpha;
  alpha[0] = log_probs[ext[0]];
  if (S > 1) alpha[1] = log_probs[ext[1]];
  for (std::size_t f = 1; f < frames; ++f) {
    const double *prev = alpha.data() + (f - 1) * S;
    double *cur = alpha.data() + f * S;
    const double *emit = log_probs.data() + f * vocab;
    for (std::size_t s = 0; s < S; ++s) {
      double a = prev[s];
      if (s >= 1) a = LogAdd(a, prev[s - 1]);
      if (CanSkip(ext, s)) a = LogAdd(a, prev[s - 2]);
      cur[s] = a == kLogZero ? kLogZero : a + emit[ext[s]];
    }
  }
  return alpha;
}

double Terminal(const std::vector<double> &alpha, std::size_t frames,
                std::size_t S) {
  const double *last = alpha.data() + (frames - 1) * S;
  return S > 1 ? LogAdd(last[S - 1], last[S - 2]) : last[S - 1];
}

}  // namespace

bool IsFeasible(std::size_t frames, const TokenSeq &label) {
  std::size_t needed = label.size();
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] == label[i - 1]) ++needed;
  }
  return frames >= needed;
}

CtcScore CtcLogProb(const EmissionLattice &lattice, const TokenSeq &label) {
  if (!lattice.normalized()) {
    throw Error(ErrorCode::kNotNormalized,
                "CTC scoring requires a normalized lattice");
  }
  CheckLabel(label, lattice.vocab_size());
  if (!IsFeasible(lattice.frames(), label)) return {kLogZero, false};
  if (lattice.frames() == 0) return {0.0, true};

  // Two rolling rows are enough when only the total is needed.
  const std::vector<TokenId> ext = Extend(label);
  const std::size_t S = ext.size();
  std::vector<double> prev(S, kLogZero), cur(S, kLogZero);
  prev[0] = lattice.at(0, ext[0]);
  if (S > 1) prev[1] = lattice.at(0, ext[1]);
  for (std::size_t f = 1; f < lattice.frames(); ++f) {
    auto emit = lattice.row(f);
    for (std::size_t s = 0; s < S; ++s) {
      double a = prev[s];
      if (s >= 1) a = LogAdd(a, prev[s - 1]);
      if (CanSkip(ext, s)) a = LogAdd(a, prev[s - 2]);
      cur[s] = a == kLogZero ? kLogZero : a + emit[ext[s]];
    }
    std::swap(prev, cur);
  }
  double total = S > 1 ? LogAdd(prev[S - 1], prev[S - 2]) : prev[S - 1];
  return {total, true};
}

CtcGradient CtcLossAndGrad(const EmissionLattice &logits, const TokenSeq &label) {
  CheckLabel(label, logits.vocab_size());
  const std::size_t F = logits.frames();
  const std::size_t V = logits.vocab_size();

  CtcGradient result;
  result.gradient = Matrix{F, V, std::vector<double>(F * V, 0.0)};
  if (!IsFeasible(F, label)) {
    result.score = {kLogZero, false};
    return result;
  }
  if (F == 0) {
    result.score = {0.0, true};
    return result;
  }

  std::vector<double> log_probs(F * V);
  for (std::size_t f = 0; f < F; ++f) {
    LogSoftmax(logits.row(f), std::span<double>(log_probs.data() + f * V, V));
  }

  const std::vector<TokenId> ext = Extend(label);
  const std::size_t S = ext.size();
  std::vector<double> alpha = Forward(log_probs, F, V, ext);
  const double log_p = Terminal(alpha, F, S);

  // beta[f * S + s]: log probability of frames f+1..F-1 given state s at f,
  // excluding the emission at f.
  std::vector<double> beta(F * S, kLogZero);
  beta[(F - 1) * S + S - 1] = 0.0;
  if (S > 1) beta[(F - 1) * S + S - 2] = 0.0;
  for (std::size_t f = F - 1; f-- > 0;) {
    const double *next = beta.data() + (f + 1) * S;
    const double *emit = log_probs.data() + (f + 1) * V;
    double *cur = beta.data() + f * S;
    for (std::size_t s = 0; s < S; ++s) {
      double b = next[s] + emit[ext[s]];
      if (s + 1 < S) b = LogAdd(b, next[s + 1] + emit[ext[s + 1]]);
      if (s + 2 < S && CanSkip(ext, s + 2)) {
        b = LogAdd(b, next[s + 2] + emit[ext[s + 2]]);
      }
      cur[s] = b;
    }
  }

  std::vector<double> occupancy(V);
  for (std::size_t f = 0; f < F; ++f) {
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (std::size_t s = 0; s < S; ++s) {
      double a = alpha[f * S + s];
      double b = beta[f * S + s];
      if (a == kLogZero || b == kLogZero) continue;
      occupancy[ext[s]] = LogAdd(occupancy[ext[s]], a + b - log_p);
    }
    for (std::size_t v = 0; v < V; ++v) {
      result.gradient.at(f, v) =
          std::exp(occupancy[v]) - std::exp(log_probs[f * V + v]);
    }
  }
  result.score = {log_p, true};
  return result;
}

void MultiTaskLossConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

namespace {

CtcGradient ScoreHead(const char *head, const EmissionLattice &logits,
                      std::string_view reference, const Vocabulary &vocab,
                      Level level) {
  try {
    TokenSeq label = TextToTokens(reference, vocab, level);
    if (logits.vocab_size() != vocab.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "lattice width " + std::to_string(logits.vocab_size()) +
                      " != vocabulary size " + std::to_string(vocab.size()));
    }
    CtcGradient g = CtcLossAndGrad(logits, label);
    if (!g.score.feasible) {
      throw Error(ErrorCode::kInfeasibleLabel,
                  "label of length " + std::to_string(label.size()) +
                      " does not fit in " + std::to_string(logits.frames()) +
                      " frames");
    }
    return g;
  } catch (const Error &e) {
    throw HeadError(head, e);
  }
}

}  // namespace

LossResult MultiTaskLoss(const EmissionLattice &syllable_logits,
                         const EmissionLattice &grapheme_logits,
                         std::string_view reference,
                         const Vocabulary &syllable_vocab,
                         const Vocabulary &grapheme_vocab,
                         const MultiTaskLossConfig &config,
                         bool with_gradients) {
  config.Validate();
  CtcGradient syll = ScoreHead("syllable", syllable_logits, reference,
                               syllable_vocab, Level::kSyllable);
  CtcGradient grap = ScoreHead("grapheme", grapheme_logits, reference,
                               grapheme_vocab, Level::kGrapheme);
  const double lambda = config.lambda;

  LossResult result;
  result.syllable_log_prob = syll.score.log_prob;
  result.grapheme_log_prob = grap.score.log_prob;
  result.total = lambda * result.syllable_log_prob +
                 (1.0 - lambda) * result.grapheme_log_prob;
  if (with_gradients) {
    for (double &g : syll.gradient.data) g *= lambda;
    for (double &g : grap.gradient.data) g *= 1.0 - lambda;
    result.gradients.emplace(std::move(syll.gradient), std::move(grap.gradient));
  }
  return result;
}

TokenSeq GreedyTokens(const EmissionLattice &lattice) {
  TokenSeq out;
  TokenId prev = kBlankId;
  for (std::size_t f = 0; f < lattice.frames(); ++f) {
    auto row = lattice.row(f);
    TokenId best = 0;
    for (std::size_t v = 1; v < row.size(); ++v) {
      if (row[v] > row[best]) best = static_cast<TokenId>(v);
    }
    if (best != kBlankId && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

std::string GreedyDecode(const EmissionLattice &lattice,
                         const Vocabulary &vocab, Level level) {
  return TokensToText(GreedyTokens(lattice), vocab, level);
}

}  // namespace hanjoint::ctc
