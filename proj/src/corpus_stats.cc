// hanjoint/corpus_stats.cc

#include "hanjoint/corpus_stats.h"

#include <cstdio>
#include <set>

#include "hanjoint/metrics.h"

namespace hanjoint::stats {

namespace {

std::string Percent(std::size_t num, std::size_t den) {
  char buf[32];
  double pct = den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / den;
  std::snprintf(buf, sizeof(buf), "%zu(%.1f%%)", num, pct);
  return buf;
}

std::string Pad(const std::string &s, std::size_t width) {
  // Width in bytes is fine for the ASCII-only table cells.
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::vector<std::string> CollectUnits(const std::vector<std::string> &texts,
                                      Level level) {
  std::set<std::string> units;
  for (const auto &t : texts) {
    for (auto &u : TextUnits(t, level)) units.insert(std::move(u));
  }
  return {units.begin(), units.end()};
}

bool IsConstructible(const std::string &unit, const Vocabulary &grapheme_vocab) {
  for (const auto &g : TextUnits(unit, Level::kGrapheme)) {
    if (!grapheme_vocab.Contains(g)) return false;
  }
  return true;
}

VocabStats ComputeVocabStats(const std::vector<std::string> &train,
                             const std::vector<NamedTexts> &evals, Level level) {
  std::vector<std::string> train_units = CollectUnits(train, level);
  std::set<std::string> known(train_units.begin(), train_units.end());
  Vocabulary grapheme_vocab =
      Vocabulary::Build(CollectUnits(train, Level::kGrapheme));

  VocabStats stats{level, train_units.size(), {}};
  for (const auto &split : evals) {
    SplitStats s;
    s.name = split.name;
    std::set<std::string> oov;
    for (const auto &t : split.texts) {
      for (const auto &u : TextUnits(t, level)) {
        if (known.count(u)) continue;
        oov.insert(u);
        ++s.oov_occurrences;
      }
    }
    s.oov_units.assign(oov.begin(), oov.end());
    if (level == Level::kSyllable) {
      for (const auto &u : s.oov_units) {
        (IsConstructible(u, grapheme_vocab) ? s.constructible : s.unconstructible)++;
      }
    }
    stats.splits.push_back(std::move(s));
  }
  return stats;
}

OovReport BuildOovReport(const std::vector<Reference> &refs,
                         const std::vector<ModeOutputs> &modes,
                         const Vocabulary &syllable_vocab,
                         const Vocabulary &grapheme_vocab) {
  OovReport report;
  std::set<std::string> all_units, oov_units, impossible;
  for (const auto &ref : refs) {
    for (const auto &u : metrics::CharUnits(ref.text)) {
      all_units.insert(u);
      ++report.total_occurrences;
      if (syllable_vocab.Contains(u)) continue;
      if (IsConstructible(u, grapheme_vocab)) {
        oov_units.insert(u);
        ++report.oov_occurrences;
      } else {
        impossible.insert(u);
        ++report.unconstructible_occurrences;
      }
    }
  }
  report.total_vocab = all_units.size();
  report.oov_vocab = oov_units.size();
  report.unconstructible_vocab = impossible.size();
  report.oov_units.assign(oov_units.begin(), oov_units.end());

  for (const auto &mode : modes) {
    Recovery rec{mode.mode, 0, 0};
    std::set<std::string> recovered;
    for (const auto &ref : refs) {
      auto it = mode.hypotheses.find(ref.id);
      std::string hyp = it == mode.hypotheses.end() ? "" : it->second;
      auto ref_chars = metrics::CharUnits(ref.text);
      auto align = metrics::Levenshtein(ref_chars, metrics::CharUnits(hyp));
      std::size_t r = 0;
      for (metrics::EditOp op : align.ops) {
        if (op == metrics::EditOp::kInsertion) continue;
        if (op == metrics::EditOp::kMatch && oov_units.count(ref_chars[r])) {
          ++rec.occurrences;
          recovered.insert(ref_chars[r]);
        }
        ++r;
      }
    }
    rec.vocab = recovered.size();
    report.recoveries.push_back(rec);
  }
  return report;
}

std::string FormatOovTable(const OovReport &report) {
  std::string out = Pad("", 10) + Pad("Total", 10) + Pad("OOV", 8);
  for (const auto &rec : report.recoveries) {
    out += Pad("Recovery(" + rec.mode + ")", 22);
  }
  out += "\n" + Pad("# Vocab.", 10) + Pad(std::to_string(report.total_vocab), 10) +
         Pad(std::to_string(report.oov_vocab), 8);
  for (const auto &rec : report.recoveries) {
    out += Pad(Percent(rec.vocab, report.oov_vocab), 22);
  }
  out += "\n" + Pad("# Occur.", 10) +
         Pad(std::to_string(report.total_occurrences), 10) +
         Pad(std::to_string(report.oov_occurrences), 8);
  for (const auto &rec : report.recoveries) {
    out += Pad(Percent(rec.occurrences, report.oov_occurrences), 22);
  }
  out += "\n";
  if (report.unconstructible_vocab > 0) {
    out += "(" + std::to_string(report.unconstructible_vocab) +
           " OOV syllables not constructible from the grapheme vocabulary, " +
           std::to_string(report.unconstructible_occurrences) +
           " occurrences)\n";
  }
  return out;
}

std::string FormatVocabStats(const std::vector<VocabStats> &stats) {
  std::string out = "unit        #vocabs";
  if (!stats.empty()) {
    for (const auto &s : stats.front().splits) out += Pad("#OOV " + s.name, 16);
  }
  out += "\n";
  for (const auto &st : stats) {
    std::string unit(LevelName(st.level));
    out += unit + std::string(12 - unit.size(), ' ') +
           Pad(std::to_string(st.vocab_size), 7);
    for (const auto &s : st.splits) {
      out += Pad(std::to_string(s.oov_units.size()), 16);
    }
    out += "\n";
  }
  for (const auto &st : stats) {
    if (st.level != Level::kSyllable) continue;
    for (const auto &s : st.splits) {
      out += s.name + ": " + std::to_string(s.constructible) +
             " OOV syllables constructible from training graphemes, " +
             std::to_string(s.unconstructible) + " not\n";
    }
  }
  return out;
}

}  // namespace hanjoint::stats
