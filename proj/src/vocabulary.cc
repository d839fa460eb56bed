// hanjoint/vocabulary.cc

#include "hanjoint/vocabulary.h"

#include <fstream>

#include "hanjoint/error.h"

namespace hanjoint {

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  if (tokens.empty() || tokens[0] != kBlankToken) {
    throw Error(ErrorCode::kMissingBlank,
                "vocabulary must start with " + std::string(kBlankToken));
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) {
      throw Error(ErrorCode::kEmptyToken,
                  "empty token on line " + std::to_string(i + 1));
    }
    auto [it, inserted] =
        vocab.index_.emplace(tokens[i], static_cast<TokenId>(i));
    if (!inserted) throw DuplicateTokenError(tokens[i], i + 1);
    if (tokens[i] == kDelimiterToken) vocab.delimiter_ = static_cast<TokenId>(i);
  }
  if (vocab.delimiter_ < 0) {
    throw Error(ErrorCode::kMissingDelimiter,
                "vocabulary has no delimiter token " +
                    std::string(kDelimiterToken));
  }
  vocab.tokens_ = std::move(tokens);
  return vocab;
}

Vocabulary Vocabulary::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open vocabulary " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return FromTokens(std::move(lines));
}

void Vocabulary::Save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write vocabulary " + path);
  for (const auto &t : tokens_) out << t << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

Vocabulary Vocabulary::Build(const std::vector<std::string> &units) {
  std::vector<std::string> tokens = {std::string(kBlankToken),
                                     std::string(kDelimiterToken)};
  std::unordered_map<std::string, bool> seen;
  seen[tokens[0]] = true;
  seen[tokens[1]] = true;
  for (const auto &u : units) {
    if (u.empty() || seen.count(u)) continue;
    seen[u] = true;
    tokens.push_back(u);
  }
  return FromTokens(std::move(tokens));
}

std::optional<TokenId> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace hanjoint
