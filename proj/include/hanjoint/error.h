// hanjoint/error.h
//
// Error types shared by every module. All failures are reported as
// exceptions derived from hanjoint::Error; the code() identifies the
// failure class so callers (CLI, bindings) can map it without parsing
// messages.

#ifndef HANJOINT_ERROR_H_
#define HANJOINT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hanjoint {

enum class ErrorCode {
  kInvalidSyllable,
  kNonComposable,
  kMissingBlank,
  kMissingDelimiter,
  kDuplicateToken,
  kEmptyToken,
  kBadMagic,
  kBadFormat,
  kTruncatedFile,
  kNonFiniteScore,
  kDimensionMismatch,
  kNotNormalized,
  kOutOfVocabulary,
  kBlankInLabel,
  kLabelOutOfRange,
  kInfeasibleLabel,
  kEmptyReference,
  kTooLarge,
  kUncoverableHoldout,
  kUnmatchedId,
  kBothBeamsEmpty,
  kMissingLattice,
  kInvalidConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A jamo sequence item could not be placed into a syllable block.
class NonComposableError : public Error {
 public:
  explicit NonComposableError(std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class OutOfVocabularyError : public Error {
 public:
  OutOfVocabularyError(std::string unit, std::size_t position);
  const std::string &unit() const { return unit_; }
  std::size_t position() const { return position_; }

 private:
  std::string unit_;
  std::size_t position_;
};

class DuplicateTokenError : public Error {
 public:
  DuplicateTokenError(std::string token, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NonFiniteScoreError : public Error {
 public:
  NonFiniteScoreError(std::size_t frame, std::size_t index);
  std::size_t frame() const { return frame_; }
  std::size_t index() const { return index_; }

 private:
  std::size_t frame_;
  std::size_t index_;
};

// Wraps a per-head failure of the multi-task loss so the caller knows
// which output head (syllable or grapheme) could not be scored.
class HeadError : public Error {
 public:
  HeadError(std::string head, const Error &inner);
  const std::string &head() const { return head_; }
  ErrorCode inner_code() const { return inner_code_; }
  // OOV unit when inner_code() == kOutOfVocabulary, empty otherwise.
  const std::string &unit() const { return unit_; }

 private:
  std::string head_;
  ErrorCode inner_code_;
  std::string unit_;
};

}  // namespace hanjoint

#endif  // HANJOINT_ERROR_H_
