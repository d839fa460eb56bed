// hanjoint/synth.h
//
// Brute-force CTC oracles and synthetic lattice/corpus generators. The
// oracles enumerate every frame-level path, so they are exponential in the
// number of frames and guarded at kMaxPaths.

#ifndef HANJOINT_SYNTH_H_
#define HANJOINT_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hanjoint/lattice.h"
#include "hanjoint/tokenize.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint::synth {

inline constexpr double kMaxPaths = 1e7;
// Smallest probability given to a wrong token, so that noise-free
// lattices stay finite in the log domain.
inline constexpr double kMinWrongProb = 1e-12;

// log p(label) summed over all V^F paths that collapse to `label`.
// Requires a normalized lattice; throws TooLarge past kMaxPaths.
double BruteForceCtc(const EmissionLattice &lattice, const TokenSeq &label);

// Probability of every collapsed output of the lattice, in log domain.
std::map<TokenSeq, double> CollapsedDistribution(const EmissionLattice &lattice);

struct BestLabel {
  TokenSeq tokens;
  double log_prob;
};

// Most probable collapsed label of length <= max_len; ties go to the
// lexicographically smallest token sequence.
BestLabel BruteForceBest(const EmissionLattice &lattice, std::size_t max_len);

struct SynthSpec {
  std::string text;
  int frames_per_token = 1;
  int blank_gap = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidConfig on frames_per_token < 1, blank_gap < 0 or noise
  // outside [0, 1).
  void Validate() const;
};

enum class OovPolicy {
  kReject,   // OutOfVocabulary error
  kUniform,  // the unit's frames carry a uniform distribution over all tokens
};

// Each token of `spec.text` occupies frames_per_token frames where it has
// probability 1 - noise and the rest is spread evenly over the other
// tokens. blank_gap blank-dominant frames separate consecutive tokens; at
// least one separates two equal tokens. Empty text yields one blank frame
// (or blank_gap, if larger). The result depends only on `spec`.
EmissionLattice GenLattice(const SynthSpec &spec, const Vocabulary &vocab,
                           Level level, OovPolicy oov = OovPolicy::kReject);

// Seeded 64-bit generator with platform-independent derived draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t Next();
  // Uniform in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Uniform in [0, 1).
  double Unit();

 private:
  std::uint64_t state_;
};

// Normalized F x V lattice whose logits are uniform in [-scale, scale].
EmissionLattice RandomLattice(std::size_t frames, std::size_t vocab_size,
                              std::uint64_t seed, double scale = 2.0);

// Random texts of 1-4 words with 1-4 syllables each, drawn from a pool of
// `pool_size` syllables chosen by the seed.
std::vector<std::string> RandomTexts(std::size_t count, std::uint64_t seed,
                                     std::size_t pool_size = 40);

struct OovUtterance {
  std::string id;
  std::string reference;
  EmissionLattice syllable_lattice;
  EmissionLattice grapheme_lattice;
  bool contains_holdout;
};

struct OovCorpus {
  std::vector<OovUtterance> utterances;
  // Units of the base texts minus the holdouts, in code point order.
  Vocabulary syllable_vocab;
  // Grapheme units of the base texts with holdout syllables removed.
  Vocabulary grapheme_vocab;
};

// Paired lattices for every base text. Holdout syllables are excluded from
// the syllable vocabulary, so their syllable-lattice frames are uniform.
// Throws UncoverableHoldout when a holdout's jamo are not all in the
// grapheme vocabulary. Utterance ids are "utt0000", "utt0001", ...
OovCorpus GenOovCorpus(const std::vector<std::string> &base_texts,
                       const std::vector<std::string> &holdouts,
                       const SynthSpec &spec);

}  // namespace hanjoint::synth

#endif  // HANJOINT_SYNTH_H_
