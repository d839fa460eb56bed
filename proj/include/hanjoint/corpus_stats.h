// hanjoint/corpus_stats.h
//
// Vocabulary coverage of evaluation text against a training vocabulary,
// and accounting of how many out-of-vocabulary syllables a decoder
// produced correctly.

#ifndef HANJOINT_CORPUS_STATS_H_
#define HANJOINT_CORPUS_STATS_H_

#include <map>
#include <string>
#include <vector>

#include "hanjoint/tokenize.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint::stats {

struct SplitStats {
  std::string name;
  // Distinct units absent from the training inventory, in code point order.
  std::vector<std::string> oov_units;
  std::size_t oov_occurrences = 0;
  // Syllable level only: OOV units whose graphemes all occur in training.
  std::size_t constructible = 0;
  std::size_t unconstructible = 0;
};

struct VocabStats {
  Level level;
  // Distinct non-space units in the training text.
  std::size_t vocab_size = 0;
  std::vector<SplitStats> splits;
};

struct NamedTexts {
  std::string name;
  std::vector<std::string> texts;
};

VocabStats ComputeVocabStats(const std::vector<std::string> &train,
                             const std::vector<NamedTexts> &evals, Level level);

// Distinct non-space units of `texts` at `level`, in code point order.
std::vector<std::string> CollectUnits(const std::vector<std::string> &texts,
                                      Level level);

// A syllable is constructible when every grapheme unit of it is in the
// grapheme vocabulary.
bool IsConstructible(const std::string &unit, const Vocabulary &grapheme_vocab);

struct Recovery {
  std::string mode;
  std::size_t vocab = 0;        // distinct OOV syllables produced at least once
  std::size_t occurrences = 0;  // OOV occurrences produced correctly
};

struct OovReport {
  std::size_t total_vocab = 0;        // distinct reference units
  std::size_t total_occurrences = 0;  // reference units
  std::size_t oov_vocab = 0;          // constructible OOV units
  std::size_t oov_occurrences = 0;
  std::size_t unconstructible_vocab = 0;
  std::size_t unconstructible_occurrences = 0;
  std::vector<std::string> oov_units;
  std::vector<Recovery> recoveries;
};

struct Reference {
  std::string id;
  std::string text;
};

struct ModeOutputs {
  std::string mode;
  std::map<std::string, std::string> hypotheses;  // id -> top-1 text
};

// An OOV occurrence is recovered when the character alignment (spaces
// removed) of reference and hypothesis matches it exactly. A missing
// hypothesis counts as empty.
OovReport BuildOovReport(const std::vector<Reference> &refs,
                         const std::vector<ModeOutputs> &modes,
                         const Vocabulary &syllable_vocab,
                         const Vocabulary &grapheme_vocab);

// Two-row table: "# Vocab." and "# Occur." with Total, OOV and one
// Recovery column per mode.
std::string FormatOovTable(const OovReport &report);
std::string FormatVocabStats(const std::vector<VocabStats> &stats);

}  // namespace hanjoint::stats

#endif  // HANJOINT_CORPUS_STATS_H_
