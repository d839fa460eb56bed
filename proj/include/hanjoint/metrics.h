// hanjoint/metrics.h
//
// Edit-distance error rates. CER counts characters with spaces removed,
// WER counts space-delimited words, and sWER is WER after the hypothesis
// has been re-spaced to follow the reference.

#ifndef HANJOINT_METRICS_H_
#define HANJOINT_METRICS_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hanjoint::metrics {

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

struct EditSummary {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t reference_length = 0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  // errors() / reference_length; may exceed 1. NaN for an empty reference.
  double rate() const;

  EditSummary &operator+=(const EditSummary &other);
};

struct Alignment {
  EditSummary summary;
  // Reference-to-hypothesis edit script in left-to-right order. Deletions
  // consume a reference unit, insertions a hypothesis unit.
  std::vector<EditOp> ops;
};

// Unit-cost Levenshtein alignment. Among equal-cost scripts the backtrace
// prefers match, then substitution, then deletion, then insertion.
Alignment Levenshtein(const std::vector<std::string> &reference,
                      const std::vector<std::string> &hypothesis);

// Characters of `text` excluding U+0020.
std::vector<std::string> CharUnits(std::string_view text);
// Maximal runs of non-space characters.
std::vector<std::string> WordUnits(std::string_view text);

// CER, WER and sWER throw EmptyReference when the reference has no units.
EditSummary Cer(std::string_view reference, std::string_view hypothesis);
EditSummary Wer(std::string_view reference, std::string_view hypothesis);

// Removes all spaces from the hypothesis, aligns its characters with the
// space-free reference, and inserts a space after every hypothesis
// character matched or substituted against a reference character that is
// followed by a space in the reference.
std::string SpaceNormalize(std::string_view reference,
                           std::string_view hypothesis);

EditSummary Swer(std::string_view reference, std::string_view hypothesis);

struct UtteranceScore {
  std::string id;
  EditSummary cer;
  EditSummary wer;
  EditSummary swer;
};

struct EvalReport {
  std::vector<UtteranceScore> utterances;
  // Micro-averaged: summed edits over summed reference lengths.
  EditSummary cer;
  EditSummary wer;
  EditSummary swer;
};

struct ScoredPair {
  std::string id;
  std::string reference;
  std::string hypothesis;
};

EvalReport Evaluate(const std::vector<ScoredPair> &pairs);

}  // namespace hanjoint::metrics

#endif  // HANJOINT_METRICS_H_
