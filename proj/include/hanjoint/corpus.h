// hanjoint/corpus.h
//
// On-disk corpus descriptions used by the command-line tool.
//
// Corpus manifest: JSON lines, one utterance per line:
//   {"id": "utt0000", "reference": "...",
//    "syllable_lattice": "lattices/utt0000.syl.ctcl",
//    "grapheme_lattice": "lattices/utt0000.gra.ctcl"}
// "reference" and either lattice may be omitted, but at least one lattice
// must be given. Relative lattice paths resolve against the manifest's
// directory.
//
// Reference / hypothesis files: "id<TAB>text" lines. Hypotheses may also be
// decode records (JSON lines), whose first hypothesis is used.

#ifndef HANJOINT_CORPUS_H_
#define HANJOINT_CORPUS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hanjoint/corpus_stats.h"
#include "hanjoint/lattice.h"

namespace hanjoint::corpus {

struct UtteranceEntry {
  std::string id;
  std::optional<std::string> reference;
  std::optional<std::string> syllable_path;
  std::optional<std::string> grapheme_path;
};

struct Utterance {
  std::string id;
  std::optional<std::string> reference;
  std::optional<EmissionLattice> syllable_lattice;
  std::optional<EmissionLattice> grapheme_lattice;
};

// Throws BadFormat (with line number) on malformed lines, duplicate ids, or
// entries without any lattice.
std::vector<UtteranceEntry> LoadManifest(const std::string &path);
// Paths are written as given.
void SaveManifest(const std::vector<UtteranceEntry> &entries,
                  const std::string &path);

// Loads the lattices an entry names. Lattice errors propagate with the
// file path in the message.
Utterance LoadUtterance(const UtteranceEntry &entry, LatticeFormat format);

std::vector<stats::Reference> LoadReferences(const std::string &path);

struct HypothesisFile {
  std::map<std::string, std::string> texts;
  // Ids whose decode record carried an error; their text is empty.
  std::vector<std::string> failed_ids;
};
HypothesisFile LoadHypotheses(const std::string &path);

// One utterance per line; CR line endings tolerated, empty lines kept.
std::vector<std::string> LoadLines(const std::string &path);

}  // namespace hanjoint::corpus

#endif  // HANJOINT_CORPUS_H_
