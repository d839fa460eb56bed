// hanjoint/cli_commands.cc

#include "hanjoint/cli_commands.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hanjoint/beam_search.h"
#include "hanjoint/corpus.h"
#include "hanjoint/corpus_stats.h"
#include "hanjoint/ctc.h"
#include "hanjoint/error.h"
#include "hanjoint/joint_decoder.h"
#include "hanjoint/metrics.h"
#include "hanjoint/selfcheck.h"
#include "hanjoint/synth.h"
#include "hanjoint/tokenize.h"
#include "json.hpp"

namespace hanjoint::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json LogProbJson(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

json OptionalLogProbJson(const std::optional<double> &v) {
  return v ? LogProbJson(*v) : json(nullptr);
}

json ErrorJson(const Error &e) {
  json err;
  err["code"] = std::string(ErrorCodeName(e.code()));
  if (const auto *head = dynamic_cast<const HeadError *>(&e)) {
    err["head"] = head->head();
    if (!head->unit().empty()) err["unit"] = head->unit();
  }
  if (const auto *oov = dynamic_cast<const OutOfVocabularyError *>(&e)) {
    err["unit"] = oov->unit();
    err["position"] = oov->position();
  }
  err["message"] = e.what();
  return err;
}

std::string ErrorRecord(const std::string &id, const json &err) {
  json rec;
  rec["id"] = id;
  rec["error"] = err;
  return rec.dump();
}

void WriteLines(const std::vector<std::string> &lines, const std::string &path,
                std::ostream &fallback) {
  if (path.empty()) {
    for (const auto &l : lines) fallback << l << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (const auto &l : lines) out << l << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

// Everything needed to reproduce an output: rerunning `argv` through
// `hanjoint replay` regenerates the same bytes.
void WriteRunManifest(const std::string &path, const std::string &command,
                      const std::vector<std::string> &args, json config,
                      const std::vector<std::string> &inputs,
                      std::optional<std::uint64_t> seed) {
  json m;
  m["tool"] = "hanjoint";
  m["version"] = HANJOINT_VERSION;
  m["command"] = command;
  m["argv"] = args;
  m["config"] = std::move(config);
  m["inputs"] = inputs;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << m.dump(2) << '\n';
}

std::string FormatRate(const metrics::EditSummary &s) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << 100.0 * s.rate();
  return ss.str();
}

const EmissionLattice &Require(const std::optional<EmissionLattice> &lattice,
                               const char *level, const std::string &id) {
  if (!lattice) {
    throw Error(ErrorCode::kMissingLattice,
                "utterance '" + id + "' has no " + level + " lattice");
  }
  return *lattice;
}

EmissionLattice AsNormalized(const EmissionLattice &lattice,
                             const Vocabulary &vocab) {
  if (lattice.vocab_size() != vocab.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice width " + std::to_string(lattice.vocab_size()) +
                    " != vocabulary size " + std::to_string(vocab.size()));
  }
  return lattice.normalized() ? lattice : Normalize(lattice);
}

// ---------------------------------------------------------------- decode

struct DecodeContext {
  const DecodeOptions &options;
  Level level;
  LatticeFormat format;
  std::optional<Vocabulary> syllable_vocab;
  std::optional<Vocabulary> grapheme_vocab;

  const Vocabulary &VocabFor(Level l) const {
    return l == Level::kSyllable ? *syllable_vocab : *grapheme_vocab;
  }
};

std::string DecodeOne(const DecodeContext &ctx,
                      const corpus::UtteranceEntry &entry) {
  const DecodeOptions &o = ctx.options;
  corpus::Utterance utt = corpus::LoadUtterance(entry, ctx.format);
  beam::BeamConfig beam_config{o.beam, o.beam, o.token_cutoff};

  json rec;
  rec["id"] = utt.id;
  rec["mode"] = o.mode;
  json hyps = json::array();

  if (o.mode == "joint") {
    const Vocabulary &sv = *ctx.syllable_vocab;
    const Vocabulary &gv = *ctx.grapheme_vocab;
    EmissionLattice syl = AsNormalized(
        Require(utt.syllable_lattice, "syllable", utt.id), sv);
    EmissionLattice gra = AsNormalized(
        Require(utt.grapheme_lattice, "grapheme", utt.id), gv);
    joint::JointResult result =
        joint::JointDecode(syl, gra, sv, gv, {o.gamma, beam_config});
    std::size_t n = std::min<std::size_t>(o.nbest, result.candidates.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto &c = result.candidates[i];
      json h;
      h["text"] = c.text;
      h["syllable_log_prob"] = OptionalLogProbJson(c.syllable_log_prob);
      h["grapheme_log_prob"] = OptionalLogProbJson(c.grapheme_log_prob);
      h["joint_score"] = LogProbJson(c.joint_score);
      json prov = json::array();
      if (c.provenance & joint::kFromSyllableBeam) prov.push_back("syllable_beam");
      if (c.provenance & joint::kFromGraphemeBeam) prov.push_back("grapheme_beam");
      h["provenance"] = prov;
      hyps.push_back(std::move(h));
    }
    rec["hypotheses"] = std::move(hyps);
    rec["dropped_noncomposable"] = result.dropped_noncomposable;
    return rec.dump();
  }

  rec["level"] = std::string(LevelName(ctx.level));
  const Vocabulary &vocab = ctx.VocabFor(ctx.level);
  const auto &raw = ctx.level == Level::kSyllable ? utt.syllable_lattice
                                                  : utt.grapheme_lattice;
  EmissionLattice lattice = AsNormalized(
      Require(raw, LevelName(ctx.level).data(), utt.id), vocab);

  if (o.mode == "greedy") {
    TokenSeq tokens = ctc::GreedyTokens(lattice);
    json h;
    h["text"] = TokensToText(tokens, vocab, ctx.level);
    h["log_prob"] = LogProbJson(ctc::CtcLogProb(lattice, tokens).log_prob);
    hyps.push_back(std::move(h));
    rec["hypotheses"] = std::move(hyps);
    return rec.dump();
  }

  std::size_t dropped = 0;
  auto texts = joint::RenderHypotheses(
      beam::PrefixBeamSearch(lattice, vocab, beam_config, ctx.level), vocab,
      &dropped);
  std::size_t n = std::min<std::size_t>(o.nbest, texts.size());
  for (std::size_t i = 0; i < n; ++i) {
    json h;
    h["text"] = texts[i].text;
    h["log_prob"] = LogProbJson(texts[i].log_prob);
    hyps.push_back(std::move(h));
  }
  rec["hypotheses"] = std::move(hyps);
  rec["dropped_noncomposable"] = dropped;
  return rec.dump();
}

json DecodeConfigJson(const DecodeOptions &o) {
  json c;
  c["mode"] = o.mode;
  c["level"] = o.level;
  c["beam"] = o.beam;
  c["nbest"] = o.nbest;
  c["token_cutoff"] = o.token_cutoff;
  c["gamma"] = o.gamma;
  c["format"] = o.format;
  return c;
}

int RunDecode(const DecodeOptions &o, const std::vector<std::string> &args,
              std::ostream &out, std::ostream &log) {
  DecodeOutput result = DecodeCorpus(o);
  WriteLines(result.records, o.out, out);
  if (!o.out.empty()) {
    std::vector<std::string> inputs = {o.corpus};
    if (!o.syllable_vocab.empty()) inputs.push_back(o.syllable_vocab);
    if (!o.grapheme_vocab.empty()) inputs.push_back(o.grapheme_vocab);
    WriteRunManifest(o.out + ".manifest.json", "decode", args,
                     DecodeConfigJson(o), inputs, std::nullopt);
  }
  double rate = result.seconds > 0 ? result.records.size() / result.seconds : 0.0;
  log << "decoded " << result.records.size() << " utterances (" << result.failures
      << " failed) in " << std::fixed << std::setprecision(3) << result.seconds
      << " s, " << std::setprecision(2) << rate << " utt/s\n";
  return result.failures > 0 ? kExitUtteranceError : kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string refs;
  std::string hyps;
  std::string out;
};

json SummaryJson(const metrics::EditSummary &s) {
  json j;
  j["substitutions"] = s.substitutions;
  j["insertions"] = s.insertions;
  j["deletions"] = s.deletions;
  j["reference_length"] = s.reference_length;
  j["rate"] = s.reference_length > 0 ? json(s.rate()) : json(nullptr);
  return j;
}

int RunEval(const EvalOptions &o, const std::vector<std::string> &args,
            std::ostream &out, std::ostream &log) {
  auto refs = corpus::LoadReferences(o.refs);
  auto hyps = corpus::LoadHypotheses(o.hyps);
  for (const auto &[id, text] : hyps.texts) {
    bool found = std::any_of(refs.begin(), refs.end(),
                             [&](const stats::Reference &r) { return r.id == id; });
    if (!found) {
      throw Error(ErrorCode::kUnmatchedId,
                  "hypothesis id '" + id + "' has no reference");
    }
  }
  for (const auto &r : refs) {
    if (!hyps.texts.count(r.id)) {
      throw Error(ErrorCode::kUnmatchedId,
                  "reference id '" + r.id + "' has no hypothesis");
    }
  }

  std::vector<std::string> records;
  metrics::EditSummary cer, wer, swer;
  std::size_t failures = 0;
  for (const auto &r : refs) {
    const std::string &hyp = hyps.texts.at(r.id);
    json rec;
    rec["id"] = r.id;
    try {
      metrics::UtteranceScore s{r.id, metrics::Cer(r.text, hyp),
                                metrics::Wer(r.text, hyp),
                                metrics::Swer(r.text, hyp)};
      rec["cer"] = SummaryJson(s.cer);
      rec["wer"] = SummaryJson(s.wer);
      rec["swer"] = SummaryJson(s.swer);
      cer += s.cer;
      wer += s.wer;
      swer += s.swer;
    } catch (const Error &e) {
      rec["error"] = ErrorJson(e);
      ++failures;
    }
    records.push_back(rec.dump());
  }
  json corpus_rec;
  corpus_rec["id"] = nullptr;
  corpus_rec["corpus"] = true;
  corpus_rec["cer"] = SummaryJson(cer);
  corpus_rec["wer"] = SummaryJson(wer);
  corpus_rec["swer"] = SummaryJson(swer);
  records.push_back(corpus_rec.dump());

  if (!o.out.empty()) {
    WriteLines(records, o.out, out);
    WriteRunManifest(o.out + ".manifest.json", "eval", args, json::object(),
                     {o.refs, o.hyps}, std::nullopt);
  }
  std::ostream &table = o.out.empty() ? out : log;
  table << "utterances " << refs.size() << " (" << failures << " failed, "
        << hyps.failed_ids.size() << " decode errors scored as empty)\n";
  table << "          CER      WER     sWER\n";
  table << "corpus" << std::setw(8) << FormatRate(cer) << std::setw(9)
        << FormatRate(wer) << std::setw(9) << FormatRate(swer) << "\n";
  return failures > 0 ? kExitUtteranceError : kExitOk;
}

// ---------------------------------------------------------------- loss

struct LossOptions {
  std::string corpus;
  std::string syllable_vocab;
  std::string grapheme_vocab;
  double lambda = 0.5;
  std::string format = "auto";
  int threads = 0;
  std::string out;
};

int RunLoss(const LossOptions &o, const std::vector<std::string> &args,
            std::ostream &out, std::ostream &log) {
  ctc::MultiTaskLossConfig config{o.lambda};
  config.Validate();
  LatticeFormat format = ParseLatticeFormat(o.format);
  Vocabulary sv = Vocabulary::Load(o.syllable_vocab);
  Vocabulary gv = Vocabulary::Load(o.grapheme_vocab);
  auto entries = corpus::LoadManifest(o.corpus);

  std::vector<std::string> records(entries.size());
  std::vector<std::optional<double>> totals(entries.size());
  ParallelFor(entries.size(), ResolveThreads(o.threads), [&](std::size_t i) {
    const auto &entry = entries[i];
    try {
      if (!entry.reference) {
        throw Error(ErrorCode::kBadFormat,
                    "utterance '" + entry.id + "' has no reference");
      }
      corpus::Utterance utt = corpus::LoadUtterance(entry, format);
      ctc::LossResult r = ctc::MultiTaskLoss(
          Require(utt.syllable_lattice, "syllable", utt.id),
          Require(utt.grapheme_lattice, "grapheme", utt.id), *utt.reference,
          sv, gv, config);
      json rec;
      rec["id"] = utt.id;
      rec["total"] = LogProbJson(r.total);
      rec["syllable_log_prob"] = LogProbJson(r.syllable_log_prob);
      rec["grapheme_log_prob"] = LogProbJson(r.grapheme_log_prob);
      records[i] = rec.dump();
      totals[i] = r.total;
    } catch (const Error &e) {
      records[i] = ErrorRecord(entry.id, ErrorJson(e));
    }
  });

  double sum = 0.0;
  std::size_t ok = 0;
  for (const auto &t : totals) {
    if (t) sum += *t, ++ok;
  }
  WriteLines(records, o.out, out);
  if (!o.out.empty()) {
    json c;
    c["lambda"] = o.lambda;
    c["format"] = o.format;
    WriteRunManifest(o.out + ".manifest.json", "loss", args, c,
                     {o.corpus, o.syllable_vocab, o.grapheme_vocab}, std::nullopt);
  }
  log << "multi-task log-likelihood (lambda=" << o.lambda << "): mean "
      << std::setprecision(10) << (ok > 0 ? sum / ok : 0.0) << " over " << ok
      << " utterances, " << (entries.size() - ok) << " failed\n";
  return ok == entries.size() ? kExitOk : kExitUtteranceError;
}

// ---------------------------------------------------------------- vocab

std::vector<Level> ParseLevels(const std::string &name) {
  if (name == "both") return {Level::kSyllable, Level::kGrapheme};
  return {ParseLevel(name)};
}

struct VocabStatsOptions {
  std::string train;
  std::vector<std::string> evals;  // name=path or path
  std::string level = "both";
  std::string out;
};

int RunVocabStats(const VocabStatsOptions &o,
                  const std::vector<std::string> &args, std::ostream &out,
                  std::ostream &log) {
  auto train = corpus::LoadLines(o.train);
  std::vector<stats::NamedTexts> evals;
  std::vector<std::string> inputs = {o.train};
  for (const auto &spec : o.evals) {
    auto eq = spec.find('=');
    std::string name = eq == std::string::npos ? fs::path(spec).stem().string()
                                               : spec.substr(0, eq);
    std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    evals.push_back({name, corpus::LoadLines(path)});
    inputs.push_back(path);
  }
  std::vector<stats::VocabStats> all;
  json report = json::array();
  for (Level level : ParseLevels(o.level)) {
    all.push_back(stats::ComputeVocabStats(train, evals, level));
    const auto &st = all.back();
    json j;
    j["unit"] = std::string(LevelName(level));
    j["vocabs"] = st.vocab_size;
    json splits = json::array();
    for (const auto &s : st.splits) {
      json sj;
      sj["split"] = s.name;
      sj["oov"] = s.oov_units.size();
      sj["oov_occurrences"] = s.oov_occurrences;
      sj["oov_units"] = s.oov_units;
      if (level == Level::kSyllable) {
        sj["constructible"] = s.constructible;
        sj["unconstructible"] = s.unconstructible;
      }
      splits.push_back(std::move(sj));
    }
    j["splits"] = std::move(splits);
    report.push_back(std::move(j));
  }
  std::string table = stats::FormatVocabStats(all);
  if (o.out.empty()) {
    out << table;
  } else {
    WriteLines({report.dump(2)}, o.out, out);
    json c;
    c["level"] = o.level;
    WriteRunManifest(o.out + ".manifest.json", "vocab-stats", args, c, inputs,
                     std::nullopt);
    log << table;
  }
  return kExitOk;
}

struct BuildVocabOptions {
  std::string texts;
  std::string refs;
  std::string level = "syllable";
  std::string out;
};

int RunBuildVocab(const BuildVocabOptions &o, std::ostream &log) {
  std::vector<std::string> texts;
  if (!o.refs.empty()) {
    for (auto &r : corpus::LoadReferences(o.refs)) texts.push_back(std::move(r.text));
  } else {
    texts = corpus::LoadLines(o.texts);
  }
  Vocabulary vocab =
      Vocabulary::Build(stats::CollectUnits(texts, ParseLevel(o.level)));
  vocab.Save(o.out);
  log << "wrote " << vocab.size() << " tokens to " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- oov

struct OovReportOptions {
  std::string refs;
  std::string syllable_vocab;
  std::string grapheme_vocab;
  std::vector<std::string> decodes;  // mode=path
  std::string out;
};

int RunOovReport(const OovReportOptions &o, const std::vector<std::string> &args,
                 std::ostream &out, std::ostream &log) {
  auto refs = corpus::LoadReferences(o.refs);
  Vocabulary sv = Vocabulary::Load(o.syllable_vocab);
  Vocabulary gv = Vocabulary::Load(o.grapheme_vocab);
  std::vector<stats::ModeOutputs> modes;
  std::vector<std::string> inputs = {o.refs, o.syllable_vocab, o.grapheme_vocab};
  for (const auto &spec : o.decodes) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "--decode expects mode=path, got '" + spec + "'");
    }
    std::string path = spec.substr(eq + 1);
    modes.push_back({spec.substr(0, eq), corpus::LoadHypotheses(path).texts});
    inputs.push_back(path);
  }
  stats::OovReport report = stats::BuildOovReport(refs, modes, sv, gv);
  std::string table = stats::FormatOovTable(report);

  json j;
  j["total_vocab"] = report.total_vocab;
  j["total_occurrences"] = report.total_occurrences;
  j["oov_vocab"] = report.oov_vocab;
  j["oov_occurrences"] = report.oov_occurrences;
  j["unconstructible_vocab"] = report.unconstructible_vocab;
  j["unconstructible_occurrences"] = report.unconstructible_occurrences;
  j["oov_units"] = report.oov_units;
  json recs = json::array();
  for (const auto &r : report.recoveries) {
    json rj;
    rj["mode"] = r.mode;
    rj["vocab"] = r.vocab;
    rj["occurrences"] = r.occurrences;
    recs.push_back(std::move(rj));
  }
  j["recovery"] = std::move(recs);

  if (o.out.empty()) {
    out << table;
  } else {
    WriteLines({j.dump(2)}, o.out, out);
    WriteRunManifest(o.out + ".manifest.json", "oov-report", args,
                     json::object(), inputs, std::nullopt);
    log << table;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string out_dir;
  std::string texts;
  std::size_t random = 0;
  std::size_t pool = 40;
  std::vector<std::string> holdouts;
  double noise = 0.0;
  int frames_per_token = 1;
  int blank_gap = 0;
  std::uint64_t seed = 0;
  std::string format = "binary";
};

int RunSynth(const SynthOptions &o, const std::vector<std::string> &args,
             std::ostream &log) {
  LatticeFormat format = ParseLatticeFormat(o.format);
  if (format == LatticeFormat::kAuto) format = LatticeFormat::kBinary;
  std::vector<std::string> texts;
  if (!o.texts.empty()) {
    for (auto &line : corpus::LoadLines(o.texts)) {
      if (!line.empty()) texts.push_back(std::move(line));
    }
  } else {
    texts = synth::RandomTexts(o.random, o.seed, o.pool);
  }

  synth::SynthSpec spec;
  spec.frames_per_token = o.frames_per_token;
  spec.blank_gap = o.blank_gap;
  spec.noise = o.noise;
  spec.seed = o.seed;
  synth::OovCorpus corpus = synth::GenOovCorpus(texts, o.holdouts, spec);

  fs::path dir(o.out_dir);
  fs::create_directories(dir / "lattices");
  corpus.syllable_vocab.Save((dir / "syllable.vocab").string());
  corpus.grapheme_vocab.Save((dir / "grapheme.vocab").string());

  const char *ext = format == LatticeFormat::kText ? ".txt" : ".ctcl";
  std::vector<corpus::UtteranceEntry> entries;
  std::vector<std::string> ref_lines;
  json with_holdout = json::array();
  for (const auto &u : corpus.utterances) {
    std::string syl = "lattices/" + u.id + ".syl" + ext;
    std::string gra = "lattices/" + u.id + ".gra" + ext;
    SaveLattice(u.syllable_lattice, (dir / syl).string(), format);
    SaveLattice(u.grapheme_lattice, (dir / gra).string(), format);
    entries.push_back({u.id, u.reference, syl, gra});
    ref_lines.push_back(u.id + "\t" + u.reference);
    if (u.contains_holdout) with_holdout.push_back(u.id);
  }
  corpus::SaveManifest(entries, (dir / "corpus.jsonl").string());
  WriteLines(ref_lines, (dir / "refs.tsv").string(), log);

  json oov;
  oov["holdouts"] = o.holdouts;
  oov["utterances_with_holdout"] = with_holdout;
  WriteLines({oov.dump(2)}, (dir / "oov.json").string(), log);

  json c;
  c["noise"] = o.noise;
  c["frames_per_token"] = o.frames_per_token;
  c["blank_gap"] = o.blank_gap;
  c["format"] = o.format;
  c["random"] = o.random;
  c["pool"] = o.pool;
  c["holdouts"] = o.holdouts;
  std::vector<std::string> inputs;
  if (!o.texts.empty()) inputs.push_back(o.texts);
  WriteRunManifest((dir / "manifest.json").string(), "synth", args, c, inputs,
                   o.seed);
  log << "wrote " << corpus.utterances.size() << " utterances to " << o.out_dir
      << " (syllable vocab " << corpus.syllable_vocab.size() << ", grapheme vocab "
      << corpus.grapheme_vocab.size() << ")\n";
  return kExitOk;
}

int RunSelfcheck(std::ostream &out) {
  bool ok = true;
  for (const auto &r : selfcheck::RunAll()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitUtteranceError;
}

int RunReplay(const std::string &manifest_path, std::ostream &out,
              std::ostream &log) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kBadFormat, manifest_path + ": " + e.what());
  }
  auto args = m.at("argv").get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") {
    throw Error(ErrorCode::kInvalidConfig, "manifest replays itself");
  }
  return Dispatch(args, out, log);
}

}  // namespace

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("HANJOINT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)> &fn) {
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto &t : pool) t.join();
}

DecodeOutput DecodeCorpus(const DecodeOptions &o) {
  if (o.mode != "greedy" && o.mode != "beam" && o.mode != "joint") {
    throw Error(ErrorCode::kInvalidConfig, "unknown mode '" + o.mode + "'");
  }
  if (o.nbest < 1) throw Error(ErrorCode::kInvalidConfig, "--nbest must be >= 1");
  DecodeContext ctx{o, ParseLevel(o.level), ParseLatticeFormat(o.format), {}, {}};
  if (o.mode == "joint") {
    joint::JointConfig{o.gamma, {o.beam, o.beam, o.token_cutoff}}.Validate();
  } else if (o.mode == "beam") {
    beam::BeamConfig{o.beam, o.beam, o.token_cutoff}.Validate();
  }
  bool need_syllable = o.mode == "joint" || ctx.level == Level::kSyllable;
  bool need_grapheme = o.mode == "joint" || ctx.level == Level::kGrapheme;
  if (need_syllable) {
    if (o.syllable_vocab.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "--syllable-vocab is required");
    }
    ctx.syllable_vocab = Vocabulary::Load(o.syllable_vocab);
  }
  if (need_grapheme) {
    if (o.grapheme_vocab.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "--grapheme-vocab is required");
    }
    ctx.grapheme_vocab = Vocabulary::Load(o.grapheme_vocab);
  }
  auto entries = corpus::LoadManifest(o.corpus);

  DecodeOutput result;
  result.records.resize(entries.size());
  std::vector<char> failed(entries.size(), 0);
  auto start = std::chrono::steady_clock::now();
  ParallelFor(entries.size(), ResolveThreads(o.threads), [&](std::size_t i) {
    try {
      result.records[i] = DecodeOne(ctx, entries[i]);
    } catch (const Error &e) {
      result.records[i] = ErrorRecord(entries[i].id, ErrorJson(e));
      failed[i] = 1;
    }
  });
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  result.failures = std::count(failed.begin(), failed.end(), 1);
  return result;
}

int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &log) {
  CLI::App app{"Joint syllable/grapheme CTC decoding toolkit for Korean ASR",
               "hanjoint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HANJOINT_VERSION);

  DecodeOptions decode;
  auto *decode_cmd = app.add_subcommand("decode", "decode a corpus of lattices");
  decode_cmd->add_option("--corpus", decode.corpus, "corpus manifest (JSON lines)")
      ->required();
  decode_cmd->add_option("--mode", decode.mode, "greedy | beam | joint")
      ->check(CLI::IsMember({"greedy", "beam", "joint"}));
  decode_cmd->add_option("--level", decode.level,
                         "level for greedy/beam: syllable | grapheme")
      ->check(CLI::IsMember({"syllable", "grapheme"}));
  decode_cmd->add_option("--syllable-vocab", decode.syllable_vocab);
  decode_cmd->add_option("--grapheme-vocab", decode.grapheme_vocab);
  decode_cmd->add_option("--beam", decode.beam, "beam width")->capture_default_str();
  decode_cmd->add_option("--nbest", decode.nbest, "hypotheses per record")
      ->capture_default_str();
  decode_cmd->add_option("--token-cutoff", decode.token_cutoff,
                         "extend with the top-N tokens per frame only (0 = all)");
  decode_cmd->add_option("--gamma", decode.gamma, "joint syllable weight")
      ->capture_default_str();
  decode_cmd->add_option("--format", decode.format, "auto | binary | text");
  decode_cmd->add_option("--threads", decode.threads, "worker threads");
  decode_cmd->add_option("--out", decode.out, "output records (JSON lines)");

  EvalOptions eval;
  auto *eval_cmd = app.add_subcommand("eval", "CER / WER / sWER of hypotheses");
  eval_cmd->add_option("--refs", eval.refs, "id<TAB>text references")->required();
  eval_cmd->add_option("--hyps", eval.hyps, "id<TAB>text or decode records")
      ->required();
  eval_cmd->add_option("--out", eval.out, "per-utterance records (JSON lines)");

  LossOptions loss;
  auto *loss_cmd = app.add_subcommand("loss", "multi-task CTC log-likelihood");
  loss_cmd->add_option("--corpus", loss.corpus)->required();
  loss_cmd->add_option("--syllable-vocab", loss.syllable_vocab)->required();
  loss_cmd->add_option("--grapheme-vocab", loss.grapheme_vocab)->required();
  loss_cmd->add_option("--lambda", loss.lambda, "syllable-head weight")
      ->capture_default_str();
  loss_cmd->add_option("--format", loss.format);
  loss_cmd->add_option("--threads", loss.threads);
  loss_cmd->add_option("--out", loss.out);

  VocabStatsOptions vstats;
  auto *vstats_cmd =
      app.add_subcommand("vocab-stats", "training vocabulary size and OOV counts");
  vstats_cmd->add_option("--train", vstats.train, "training text, one per line")
      ->required();
  vstats_cmd->add_option("--eval", vstats.evals, "[name=]path, repeatable")
      ->required();
  vstats_cmd->add_option("--level", vstats.level, "syllable | grapheme | both")
      ->check(CLI::IsMember({"syllable", "grapheme", "both"}));
  vstats_cmd->add_option("--out", vstats.out, "JSON report");

  BuildVocabOptions bvocab;
  auto *bvocab_cmd =
      app.add_subcommand("build-vocab", "write a vocabulary file from text");
  auto *texts_opt = bvocab_cmd->add_option("--texts", bvocab.texts, "one utterance per line");
  auto *refs_opt = bvocab_cmd->add_option("--refs", bvocab.refs, "id<TAB>text file");
  texts_opt->excludes(refs_opt);
  bvocab_cmd->add_option("--level", bvocab.level)
      ->check(CLI::IsMember({"syllable", "grapheme"}));
  bvocab_cmd->add_option("--out", bvocab.out)->required();

  OovReportOptions oov;
  auto *oov_cmd = app.add_subcommand("oov-report", "OOV syllable recovery");
  oov_cmd->add_option("--refs", oov.refs)->required();
  oov_cmd->add_option("--syllable-vocab", oov.syllable_vocab, "training syllables")
      ->required();
  oov_cmd->add_option("--grapheme-vocab", oov.grapheme_vocab)->required();
  oov_cmd->add_option("--decode", oov.decodes, "mode=records, repeatable")
      ->required();
  oov_cmd->add_option("--out", oov.out, "JSON report");

  SynthOptions synth;
  auto *synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  auto *synth_texts = synth_cmd->add_option("--texts", synth.texts, "source texts");
  auto *synth_random =
      synth_cmd->add_option("--random", synth.random, "number of random texts");
  synth_texts->excludes(synth_random);
  synth_cmd->add_option("--pool", synth.pool, "syllable pool for random texts");
  synth_cmd->add_option("--holdout", synth.holdouts, "held-out syllable, repeatable");
  synth_cmd->add_option("--noise", synth.noise)->capture_default_str();
  synth_cmd->add_option("--frames-per-token", synth.frames_per_token);
  synth_cmd->add_option("--blank-gap", synth.blank_gap);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--format", synth.format, "binary | text")
      ->check(CLI::IsMember({"binary", "text"}));

  auto *selfcheck_cmd =
      app.add_subcommand("selfcheck", "run the built-in oracle suites");

  std::string replay_path;
  auto *replay_cmd = app.add_subcommand("replay", "re-run a command from its manifest");
  replay_cmd->add_option("manifest", replay_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, log);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (decode_cmd->parsed()) return RunDecode(decode, args, out, log);
    if (eval_cmd->parsed()) return RunEval(eval, args, out, log);
    if (loss_cmd->parsed()) return RunLoss(loss, args, out, log);
    if (vstats_cmd->parsed()) return RunVocabStats(vstats, args, out, log);
    if (bvocab_cmd->parsed()) {
      if (bvocab.texts.empty() && bvocab.refs.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "--texts or --refs is required");
      }
      return RunBuildVocab(bvocab, log);
    }
    if (oov_cmd->parsed()) return RunOovReport(oov, args, out, log);
    if (synth_cmd->parsed()) {
      if (synth.texts.empty() && synth.random == 0) {
        throw Error(ErrorCode::kInvalidConfig, "--texts or --random is required");
      }
      return RunSynth(synth, args, log);
    }
    if (selfcheck_cmd->parsed()) return RunSelfcheck(out);
    if (replay_cmd->parsed()) return RunReplay(replay_path, out, log);
  } catch (const Error &e) {
    log << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace hanjoint::cli
