// hanjoint/metrics.cc

#include "hanjoint/metrics.h"

#include <algorithm>
#include <limits>

#include "hanjoint/error.h"
#include "hanjoint/utf8.h"

namespace hanjoint::metrics {

double EditSummary::rate() const {
  if (reference_length == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(errors()) / static_cast<double>(reference_length);
}

EditSummary &EditSummary::operator+=(const EditSummary &other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  reference_length += other.reference_length;
  return *this;
}

Alignment Levenshtein(const std::vector<std::string> &reference,
                      const std::vector<std::string> &hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t cols = m + 1;
  std::vector<std::size_t> dist((n + 1) * cols);
  for (std::size_t i = 0; i <= n; ++i) dist[i * cols] = i;
  for (std::size_t j = 0; j <= m; ++j) dist[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = dist[(i - 1) * cols + j - 1] +
                         (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      std::size_t del = dist[(i - 1) * cols + j] + 1;
      std::size_t ins = dist[i * cols + j - 1] + 1;
      dist[i * cols + j] = std::min({diag, del, ins});
    }
  }

  Alignment out;
  out.summary.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    std::size_t here = dist[i * cols + j];
    if (i > 0 && j > 0) {
      bool same = reference[i - 1] == hypothesis[j - 1];
      std::size_t diag = dist[(i - 1) * cols + j - 1];
      if (same && diag == here) {
        out.ops.push_back(EditOp::kMatch);
        --i, --j;
        continue;
      }
      if (!same && diag + 1 == here) {
        out.ops.push_back(EditOp::kSubstitution);
        ++out.summary.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && dist[(i - 1) * cols + j] + 1 == here) {
      out.ops.push_back(EditOp::kDeletion);
      ++out.summary.deletions;
      --i;
      continue;
    }
    out.ops.push_back(EditOp::kInsertion);
    ++out.summary.insertions;
    --j;
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

std::vector<std::string> CharUnits(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t cp : Utf8Decode(text)) {
    if (cp != U' ') out.push_back(Utf8Encode(cp));
  }
  return out;
}

std::vector<std::string> WordUnits(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

namespace {

EditSummary Score(const std::vector<std::string> &ref,
                  const std::vector<std::string> &hyp) {
  if (ref.empty()) {
    throw Error(ErrorCode::kEmptyReference, "reference has no units");
  }
  return Levenshtein(ref, hyp).summary;
}

}  // namespace

EditSummary Cer(std::string_view reference, std::string_view hypothesis) {
  return Score(CharUnits(reference), CharUnits(hypothesis));
}

EditSummary Wer(std::string_view reference, std::string_view hypothesis) {
  return Score(WordUnits(reference), WordUnits(hypothesis));
}

std::string SpaceNormalize(std::string_view reference,
                           std::string_view hypothesis) {
  std::u32string ref = Utf8Decode(reference);
  std::vector<std::string> ref_chars;
  std::vector<bool> space_after;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (ref[k] == U' ') continue;
    ref_chars.push_back(Utf8Encode(ref[k]));
    space_after.push_back(k + 1 < ref.size() && ref[k + 1] == U' ');
  }
  std::vector<std::string> hyp_chars = CharUnits(hypothesis);

  Alignment align = Levenshtein(ref_chars, hyp_chars);
  std::string out;
  std::size_t r = 0, h = 0;
  for (EditOp op : align.ops) {
    switch (op) {
      case EditOp::kMatch:
      case EditOp::kSubstitution:
        out += hyp_chars[h++];
        if (space_after[r++]) out.push_back(' ');
        break;
      case EditOp::kDeletion:
        ++r;
        break;
      case EditOp::kInsertion:
        out += hyp_chars[h++];
        break;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

EditSummary Swer(std::string_view reference, std::string_view hypothesis) {
  return Wer(reference, SpaceNormalize(reference, hypothesis));
}

EvalReport Evaluate(const std::vector<ScoredPair> &pairs) {
  EvalReport report;
  report.utterances.reserve(pairs.size());
  for (const auto &p : pairs) {
    UtteranceScore s{p.id, Cer(p.reference, p.hypothesis),
                     Wer(p.reference, p.hypothesis),
                     Swer(p.reference, p.hypothesis)};
    report.cer += s.cer;
    report.wer += s.wer;
    report.swer += s.swer;
    report.utterances.push_back(std::move(s));
  }
  return report;
}

}  // namespace hanjoint::metrics
