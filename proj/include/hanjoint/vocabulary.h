// hanjoint/vocabulary.h

#ifndef HANJOINT_VOCABULARY_H_
#define HANJOINT_VOCABULARY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hanjoint {

using TokenId = int32_t;
using TokenSeq = std::vector<TokenId>;

inline constexpr std::string_view kBlankToken = "<ctc_blank>";
inline constexpr std::string_view kDelimiterToken = "|";
inline constexpr TokenId kBlankId = 0;

// Ordered token inventory for one modeling level. Index 0 is always the CTC
// blank "<ctc_blank>" and exactly one token is the word delimiter "|".
// Immutable after construction.
class Vocabulary {
 public:
  // Throws MissingBlank, MissingDelimiter, DuplicateToken, EmptyToken.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  // One token per line, UTF-8. A trailing newline and CR line endings are
  // tolerated. Line numbers in errors are 1-based.
  static Vocabulary Load(const std::string &path);
  void Save(const std::string &path) const;

  // Blank, delimiter, then the given units in the order supplied (after
  // removing duplicates and blank/delimiter themselves).
  static Vocabulary Build(const std::vector<std::string> &units);

  std::size_t size() const { return tokens_.size(); }
  const std::string &token(TokenId id) const { return tokens_.at(id); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  TokenId delimiter_index() const { return delimiter_; }
  std::optional<TokenId> Find(std::string_view token) const;
  bool Contains(std::string_view token) const {
    return Find(token).has_value();
  }

 private:
  Vocabulary() = default;

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId delimiter_ = -1;
};

}  // namespace hanjoint

#endif  // HANJOINT_VOCABULARY_H_
