// hanjoint/error.cc

#include "hanjoint/error.h"

namespace hanjoint {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSyllable: return "InvalidSyllable";
    case ErrorCode::kNonComposable: return "NonComposable";
    case ErrorCode::kMissingBlank: return "MissingBlank";
    case ErrorCode::kMissingDelimiter: return "MissingDelimiter";
    case ErrorCode::kDuplicateToken: return "DuplicateToken";
    case ErrorCode::kEmptyToken: return "EmptyToken";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kOutOfVocabulary: return "OutOfVocabulary";
    case ErrorCode::kBlankInLabel: return "BlankInLabel";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kInfeasibleLabel: return "InfeasibleLabel";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUncoverableHoldout: return "UncoverableHoldout";
    case ErrorCode::kUnmatchedId: return "UnmatchedId";
    case ErrorCode::kBothBeamsEmpty: return "BothBeamsEmpty";
    case ErrorCode::kMissingLattice: return "MissingLattice";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

NonComposableError::NonComposableError(std::size_t position)
    : Error(ErrorCode::kNonComposable,
            "jamo at position " + std::to_string(position) +
                " cannot be placed in a syllable block"),
      position_(position) {}

OutOfVocabularyError::OutOfVocabularyError(std::string unit,
                                           std::size_t position)
    : Error(ErrorCode::kOutOfVocabulary,
            "unit '" + unit + "' at position " + std::to_string(position) +
                " is not in the vocabulary"),
      unit_(std::move(unit)),
      position_(position) {}

DuplicateTokenError::DuplicateTokenError(std::string token, std::size_t line)
    : Error(ErrorCode::kDuplicateToken,
            "duplicate token '" + token + "' on line " + std::to_string(line)),
      line_(line) {}

NonFiniteScoreError::NonFiniteScoreError(std::size_t frame, std::size_t index)
    : Error(ErrorCode::kNonFiniteScore,
            "non-finite score at frame " + std::to_string(frame) +
                ", index " + std::to_string(index)),
      frame_(frame),
      index_(index) {}

HeadError::HeadError(std::string head, const Error &inner)
    : Error(inner.code(), head + " head: " + inner.what()),
      head_(std::move(head)),
      inner_code_(inner.code()) {
  if (const auto *oov = dynamic_cast<const OutOfVocabularyError *>(&inner)) {
    unit_ = oov->unit();
  }
}

}  // namespace hanjoint
