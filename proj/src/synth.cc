// hanjoint/synth.cc

#include "hanjoint/synth.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "hanjoint/error.h"
#include "hanjoint/hangul.h"
#include "hanjoint/log_math.h"
#include "hanjoint/utf8.h"

namespace hanjoint::synth {

namespace {

void CheckEnumerable(const EmissionLattice &lattice) {
  if (!lattice.normalized()) {
    throw Error(ErrorCode::kNotNormalized, "oracle requires a normalized lattice");
  }
  double paths = std::pow(static_cast<double>(lattice.vocab_size()),
                          static_cast<double>(lattice.frames()));
  if (paths > kMaxPaths) {
    throw Error(ErrorCode::kTooLarge,
                "lattice has " + std::to_string(paths) + " paths, limit is 1e7");
  }
}

// Calls fn(path_log_prob, collapsed_label) for every frame-level path.
template <typename Fn>
void ForEachPath(const EmissionLattice &lattice, Fn fn) {
  const std::size_t F = lattice.frames();
  const std::size_t V = lattice.vocab_size();
  std::vector<std::size_t> path(F, 0);
  TokenSeq label;
  while (true) {
    double log_p = 0.0;
    label.clear();
    std::size_t prev = kBlankId;
    for (std::size_t f = 0; f < F; ++f) {
      log_p += lattice.at(f, path[f]);
      if (path[f] != kBlankId && path[f] != prev) {
        label.push_back(static_cast<TokenId>(path[f]));
      }
      prev = path[f];
    }
    fn(log_p, label);
    // Odometer increment; done after wrapping the first frame.
    std::size_t f = F;
    while (f > 0) {
      if (++path[f - 1] < V) break;
      path[f - 1] = 0;
      --f;
    }
    if (f == 0) return;
  }
}

}  // namespace

double BruteForceCtc(const EmissionLattice &lattice, const TokenSeq &label) {
  CheckEnumerable(lattice);
  long double sum = 0.0L;
  ForEachPath(lattice, [&](double log_p, const TokenSeq &collapsed) {
    if (collapsed == label) sum += std::exp(static_cast<long double>(log_p));
  });
  return sum > 0.0L ? static_cast<double>(std::log(sum)) : kLogZero;
}

std::map<TokenSeq, double> CollapsedDistribution(const EmissionLattice &lattice) {
  CheckEnumerable(lattice);
  std::map<TokenSeq, long double> sums;
  ForEachPath(lattice, [&](double log_p, const TokenSeq &collapsed) {
    sums[collapsed] += std::exp(static_cast<long double>(log_p));
  });
  std::map<TokenSeq, double> out;
  for (const auto &[label, p] : sums) {
    out.emplace(label, static_cast<double>(std::log(p)));
  }
  return out;
}

BestLabel BruteForceBest(const EmissionLattice &lattice, std::size_t max_len) {
  BestLabel best{{}, kLogZero};
  bool found = false;
  // std::map iterates in lexicographic order, so strict > keeps the
  // smallest sequence among ties.
  for (const auto &[label, log_p] : CollapsedDistribution(lattice)) {
    if (label.size() > max_len) continue;
    if (!found || log_p > best.log_prob) {
      best = {label, log_p};
      found = true;
    }
  }
  return best;
}

void SynthSpec::Validate() const {
  if (frames_per_token < 1 || blank_gap < 0 || !(noise >= 0.0 && noise < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "synth spec needs frames_per_token >= 1, blank_gap >= 0 and "
                "0 <= noise < 1");
  }
}

EmissionLattice GenLattice(const SynthSpec &spec, const Vocabulary &vocab,
                           Level level, OovPolicy oov) {
  spec.Validate();
  const std::size_t V = vocab.size();
  // Target per frame; -1 marks a uniform (out-of-vocabulary) frame.
  std::vector<TokenId> tokens;
  {
    std::vector<std::string> units;
    if (level == Level::kSyllable) {
      for (char32_t cp : Utf8Decode(spec.text)) {
        units.push_back(cp == U' ' ? std::string() : Utf8Encode(cp));
      }
    } else {
      for (const auto &item : hangul::DecomposeText(spec.text)) {
        bool space = std::holds_alternative<hangul::WordDelimiter>(item);
        units.push_back(space ? std::string() : hangul::ItemToString(item));
      }
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (units[i].empty()) {
        tokens.push_back(vocab.delimiter_index());
        continue;
      }
      auto id = vocab.Find(units[i]);
      if (!id) {
        if (oov == OovPolicy::kReject) throw OutOfVocabularyError(units[i], i);
        tokens.push_back(-1);
        continue;
      }
      tokens.push_back(*id);
    }
  }

  std::vector<TokenId> frames;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    int gap = i == 0 ? 0 : spec.blank_gap;
    if (i > 0 && gap == 0 && tokens[i] >= 0 && tokens[i] == tokens[i - 1]) gap = 1;
    frames.insert(frames.end(), gap, kBlankId);
    frames.insert(frames.end(), spec.frames_per_token, tokens[i]);
  }
  if (frames.empty()) frames.assign(std::max(spec.blank_gap, 1), kBlankId);

  const double wrong = std::max(spec.noise / static_cast<double>(V - 1), kMinWrongProb);
  const double log_wrong = std::log(wrong);
  const double log_right = std::log1p(-wrong * static_cast<double>(V - 1));
  const double log_uniform = -std::log(static_cast<double>(V));

  std::vector<double> scores(frames.size() * V);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    double *row = scores.data() + f * V;
    if (frames[f] < 0) {
      std::fill(row, row + V, log_uniform);
      continue;
    }
    std::fill(row, row + V, log_wrong);
    row[frames[f]] = log_right;
  }
  return EmissionLattice(frames.size(), V, std::move(scores), true);
}

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::Next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::Below(std::uint64_t n) { return Next() % n; }

double Rng::Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

EmissionLattice RandomLattice(std::size_t frames, std::size_t vocab_size,
                              std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<double> logits(frames * vocab_size);
  for (double &x : logits) x = (2.0 * rng.Unit() - 1.0) * scale;
  return Normalize(EmissionLattice(frames, vocab_size, std::move(logits), false));
}

std::vector<std::string> RandomTexts(std::size_t count, std::uint64_t seed,
                                     std::size_t pool_size) {
  Rng rng(seed);
  std::vector<char32_t> pool;
  std::set<char32_t> seen;
  while (pool.size() < pool_size) {
    char32_t cp = hangul::kSyllableFirst +
                  static_cast<char32_t>(rng.Below(hangul::kSyllableCount));
    if (seen.insert(cp).second) pool.push_back(cp);
  }
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string text;
    std::uint64_t words = 1 + rng.Below(4);
    for (std::uint64_t w = 0; w < words; ++w) {
      if (w > 0) text.push_back(' ');
      std::uint64_t syllables = 1 + rng.Below(4);
      for (std::uint64_t s = 0; s < syllables; ++s) {
        Utf8Append(pool[rng.Below(pool.size())], &text);
      }
    }
    out.push_back(std::move(text));
  }
  return out;
}

OovCorpus GenOovCorpus(const std::vector<std::string> &base_texts,
                       const std::vector<std::string> &holdouts,
                       const SynthSpec &spec) {
  spec.Validate();
  std::set<std::string> held(holdouts.begin(), holdouts.end());

  std::set<std::string> syllable_units, grapheme_units;
  for (const auto &text : base_texts) {
    std::string kept;
    for (const auto &unit : TextUnits(text, Level::kSyllable)) {
      if (held.count(unit)) continue;
      syllable_units.insert(unit);
      kept += unit;
    }
    for (const auto &unit : TextUnits(kept, Level::kGrapheme)) {
      grapheme_units.insert(unit);
    }
  }
  for (const auto &h : holdouts) {
    for (const auto &unit : TextUnits(h, Level::kGrapheme)) {
      if (!grapheme_units.count(unit)) {
        throw Error(ErrorCode::kUncoverableHoldout,
                    "holdout '" + h + "' needs grapheme '" + unit +
                        "' which the corpus does not provide");
      }
    }
  }

  OovCorpus corpus{
      {},
      Vocabulary::Build({syllable_units.begin(), syllable_units.end()}),
      Vocabulary::Build({grapheme_units.begin(), grapheme_units.end()})};
  corpus.utterances.reserve(base_texts.size());
  for (std::size_t i = 0; i < base_texts.size(); ++i) {
    SynthSpec utt = spec;
    utt.text = base_texts[i];
    utt.seed = spec.seed + i;
    char id[16];
    std::snprintf(id, sizeof(id), "utt%04zu", i);
    bool has_holdout = false;
    for (const auto &unit : TextUnits(base_texts[i], Level::kSyllable)) {
      has_holdout = has_holdout || held.count(unit) > 0;
    }
    corpus.utterances.push_back(
        {id, base_texts[i],
         GenLattice(utt, corpus.syllable_vocab, Level::kSyllable,
                    OovPolicy::kUniform),
         GenLattice(utt, corpus.grapheme_vocab, Level::kGrapheme), has_holdout});
  }
  return corpus;
}

}  // namespace hanjoint::synth
