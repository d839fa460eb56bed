// Python bindings for the hanjoint core. Lattices cross the boundary as
// float64 numpy arrays of shape (frames, vocab_size).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hanjoint/beam_search.h"
#include "hanjoint/cli_commands.h"
#include "hanjoint/ctc.h"
#include "hanjoint/error.h"
#include "hanjoint/hangul.h"
#include "hanjoint/joint_decoder.h"
#include "hanjoint/lattice.h"
#include "hanjoint/metrics.h"
#include "hanjoint/synth.h"
#include "hanjoint/tokenize.h"
#include "hanjoint/utf8.h"

namespace py = pybind11;
using namespace hanjoint;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

EmissionLattice ToLattice(const Array &scores, bool normalized) {
  if (scores.ndim() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "lattice must be a 2-d array");
  }
  std::size_t frames = scores.shape(0), vocab = scores.shape(1);
  std::vector<double> data(scores.data(), scores.data() + frames * vocab);
  return EmissionLattice(frames, vocab, std::move(data), normalized);
}

Array ToArray(std::size_t rows, std::size_t cols, std::span<const double> data) {
  Array out({rows, cols});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

Array ToArray(const EmissionLattice &lattice) {
  return ToArray(lattice.frames(), lattice.vocab_size(), lattice.scores());
}

py::object OptionalFloat(const std::optional<double> &v) {
  return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict CandidateDict(const joint::ScoredCandidate &c) {
  py::dict d;
  d["text"] = c.text;
  d["syllable_log_prob"] = OptionalFloat(c.syllable_log_prob);
  d["grapheme_log_prob"] = OptionalFloat(c.grapheme_log_prob);
  d["joint_score"] = c.joint_score;
  py::list prov;
  if (c.provenance & joint::kFromSyllableBeam) prov.append("syllable_beam");
  if (c.provenance & joint::kFromGraphemeBeam) prov.append("grapheme_beam");
  d["provenance"] = prov;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint syllable/grapheme CTC decoding for Korean ASR";
  m.attr("__version__") = HANJOINT_VERSION;

  static py::exception<Error> error_type(m, "HanjointError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      py::object exc =
          py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // Hangul.
  m.def("decompose_syllable", [](const std::string &syllable) {
    auto cps = Utf8Decode(syllable);
    if (cps.size() != 1) {
      throw Error(ErrorCode::kInvalidSyllable, "expected a single character");
    }
    std::vector<std::string> out;
    for (const auto &j : hangul::DecomposeSyllable(cps[0])) {
      out.push_back(Utf8Encode(j.codepoint()));
    }
    return out;
  });
  m.def("decompose_text", [](const std::string &text) {
    std::vector<std::string> out;
    for (const auto &item : hangul::DecomposeText(text)) {
      out.push_back(hangul::ItemToString(item));
    }
    return out;
  }, "Grapheme items of text; spaces appear as ' '.");
  m.def("compose_jamo", [](const std::vector<std::string> &items) {
    hangul::JamoSequence seq;
    for (const auto &s : items) {
      for (char32_t cp : Utf8Decode(s)) {
        if (cp == U' ') {
          seq.push_back(hangul::WordDelimiter{});
        } else if (hangul::IsSyllable(cp)) {
          for (const auto &j : hangul::DecomposeSyllable(cp)) seq.push_back(j);
        } else if (auto jamo = hangul::Jamo::Make(cp)) {
          seq.push_back(*jamo);
        } else {
          seq.push_back(hangul::Passthrough{cp});
        }
      }
    }
    return hangul::ComposeJamo(seq);
  }, "Compose grapheme items (jamo, ' ' or other characters) into text.");
  m.def("jamo_inventory", [] {
    std::vector<std::string> out;
    for (char32_t cp : hangul::JamoInventory()) out.push_back(Utf8Encode(cp));
    return out;
  });

  // Vocabulary.
  py::class_<Vocabulary>(m, "Vocabulary")
      .def_static("from_tokens", &Vocabulary::FromTokens)
      .def_static("load", &Vocabulary::Load)
      .def_static("build", &Vocabulary::Build)
      .def("save", &Vocabulary::Save)
      .def("find", &Vocabulary::Find)
      .def("__len__", &Vocabulary::size)
      .def("__contains__", &Vocabulary::Contains)
      .def_property_readonly("tokens", &Vocabulary::tokens)
      .def_property_readonly("delimiter_index", &Vocabulary::delimiter_index);

  m.def("text_to_tokens", [](const std::string &text, const Vocabulary &vocab,
                             const std::string &level) {
    return TextToTokens(text, vocab, ParseLevel(level));
  }, py::arg("text"), py::arg("vocab"), py::arg("level") = "syllable");
  m.def("tokens_to_text", [](const TokenSeq &tokens, const Vocabulary &vocab,
                             const std::string &level) {
    return TokensToText(tokens, vocab, ParseLevel(level));
  }, py::arg("tokens"), py::arg("vocab"), py::arg("level") = "syllable");

  // Lattices.
  m.def("load_lattice", [](const std::string &path, const std::string &format) {
    auto lattice = LoadLattice(path, ParseLatticeFormat(format));
    return py::make_tuple(ToArray(lattice), lattice.normalized());
  }, py::arg("path"), py::arg("format") = "auto",
     "Returns (scores, normalized).");
  m.def("save_lattice", [](const Array &scores, const std::string &path,
                           bool normalized, const std::string &format) {
    SaveLattice(ToLattice(scores, normalized), path, ParseLatticeFormat(format));
  }, py::arg("scores"), py::arg("path"), py::arg("normalized") = true,
     py::arg("format") = "auto");
  m.def("log_softmax", [](const Array &scores) {
    return ToArray(Normalize(ToLattice(scores, false)));
  });

  // CTC.
  m.def("ctc_log_prob", [](const Array &log_probs, const TokenSeq &label) {
    auto s = ctc::CtcLogProb(ToLattice(log_probs, true), label);
    return py::make_tuple(s.log_prob, s.feasible);
  }, py::arg("log_probs"), py::arg("label"),
     "Returns (log_prob, feasible) for a normalized lattice.");
  m.def("ctc_loss_and_grad", [](const Array &logits, const TokenSeq &label) {
    auto r = ctc::CtcLossAndGrad(ToLattice(logits, false), label);
    return py::make_tuple(r.score.log_prob,
                          ToArray(r.gradient.rows, r.gradient.cols, r.gradient.data));
  }, py::arg("logits"), py::arg("label"),
     "Returns (log_prob, d log_prob / d logits).");
  m.def("multitask_loss", [](const Array &syllable_logits, const Array &grapheme_logits,
                             const std::string &reference, const Vocabulary &sv,
                             const Vocabulary &gv, double lambda) {
    auto r = ctc::MultiTaskLoss(ToLattice(syllable_logits, false),
                                ToLattice(grapheme_logits, false), reference, sv, gv,
                                {lambda});
    py::dict d;
    d["total"] = r.total;
    d["syllable_log_prob"] = r.syllable_log_prob;
    d["grapheme_log_prob"] = r.grapheme_log_prob;
    return d;
  }, py::arg("syllable_logits"), py::arg("grapheme_logits"), py::arg("reference"),
     py::arg("syllable_vocab"), py::arg("grapheme_vocab"), py::arg("lam") = 0.5);
  m.def("greedy_decode", [](const Array &scores, const Vocabulary &vocab,
                            const std::string &level) {
    return ctc::GreedyDecode(ToLattice(scores, false), vocab, ParseLevel(level));
  }, py::arg("scores"), py::arg("vocab"), py::arg("level") = "syllable");

  // Decoding.
  m.def("prefix_beam_search", [](const Array &log_probs, const Vocabulary &vocab,
                                 int beam_width, int max_output, int token_cutoff,
                                 const std::string &level) {
    auto hyps = beam::PrefixBeamSearch(ToLattice(log_probs, true), vocab,
                                       {beam_width, max_output, token_cutoff},
                                       ParseLevel(level));
    py::list out;
    for (const auto &h : hyps) out.append(py::make_tuple(h.tokens, h.log_prob));
    return out;
  }, py::arg("log_probs"), py::arg("vocab"), py::arg("beam_width") = 100,
     py::arg("max_output") = 100, py::arg("token_cutoff") = 0,
     py::arg("level") = "syllable", "Returns [(tokens, log_prob), ...].");
  m.def("joint_decode", [](const Array &syllable, const Array &grapheme,
                           const Vocabulary &sv, const Vocabulary &gv, double gamma,
                           int beam_width) {
    auto r = joint::JointDecode(ToLattice(syllable, true), ToLattice(grapheme, true),
                                sv, gv, {gamma, {beam_width, beam_width, 0}});
    py::list out;
    for (const auto &c : r.candidates) out.append(CandidateDict(c));
    return py::make_tuple(out, r.dropped_noncomposable);
  }, py::arg("syllable_log_probs"), py::arg("grapheme_log_probs"),
     py::arg("syllable_vocab"), py::arg("grapheme_vocab"), py::arg("gamma") = 0.5,
     py::arg("beam_width") = 100, "Returns (candidates, dropped_noncomposable).");

  // Metrics.
  m.def("cer", [](const std::string &r, const std::string &h) { return metrics::Cer(r, h).rate(); });
  m.def("wer", [](const std::string &r, const std::string &h) { return metrics::Wer(r, h).rate(); });
  m.def("swer", [](const std::string &r, const std::string &h) { return metrics::Swer(r, h).rate(); });
  m.def("space_normalize", &metrics::SpaceNormalize);
  m.def("edit_distance", [](const std::vector<std::string> &r,
                            const std::vector<std::string> &h) {
    return metrics::Levenshtein(r, h).summary.errors();
  });

  // Synthetic data and oracles.
  m.def("gen_lattice", [](const std::string &text, const Vocabulary &vocab,
                          const std::string &level, int frames_per_token,
                          int blank_gap, double noise, bool uniform_oov) {
    return ToArray(synth::GenLattice(
        {text, frames_per_token, blank_gap, noise, 0}, vocab, ParseLevel(level),
        uniform_oov ? synth::OovPolicy::kUniform : synth::OovPolicy::kReject));
  }, py::arg("text"), py::arg("vocab"), py::arg("level") = "syllable",
     py::arg("frames_per_token") = 1, py::arg("blank_gap") = 0, py::arg("noise") = 0.0,
     py::arg("uniform_oov") = false);
  m.def("random_lattice", [](std::size_t frames, std::size_t vocab, std::uint64_t seed) {
    return ToArray(synth::RandomLattice(frames, vocab, seed));
  });
  m.def("brute_force_ctc", [](const Array &log_probs, const TokenSeq &label) {
    return synth::BruteForceCtc(ToLattice(log_probs, true), label);
  });

  // Command line.
  m.def("run_cli", [](const std::vector<std::string> &args) {
    std::ostringstream out, log;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::Dispatch(args, out, log);
    }
    return py::make_tuple(code, out.str(), log.str());
  }, "Runs a hanjoint subcommand; returns (exit_code, stdout, stderr).");
}
