// hanjoint/corpus.cc

#include "hanjoint/corpus.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "hanjoint/error.h"
#include "json.hpp"

namespace hanjoint::corpus {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void BadLine(const std::string &path, std::size_t line,
                          const std::string &what) {
  throw Error(ErrorCode::kBadFormat,
              path + ":" + std::to_string(line) + ": " + what);
}

std::optional<std::string> OptionalString(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::vector<std::string> LoadLines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<UtteranceEntry> LoadManifest(const std::string &path) {
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&](std::optional<std::string> p) -> std::optional<std::string> {
    if (!p || fs::path(*p).is_absolute()) return p;
    return (base / *p).string();
  };

  std::vector<UtteranceEntry> entries;
  std::set<std::string> ids;
  auto lines = LoadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(lines[i]);
      if (!obj.is_object()) BadLine(path, i + 1, "expected a JSON object");
      UtteranceEntry e;
      e.id = obj.at("id").get<std::string>();
      e.reference = OptionalString(obj, "reference");
      e.syllable_path = resolve(OptionalString(obj, "syllable_lattice"));
      e.grapheme_path = resolve(OptionalString(obj, "grapheme_lattice"));
      if (!e.syllable_path && !e.grapheme_path) {
        BadLine(path, i + 1, "utterance '" + e.id + "' names no lattice");
      }
      if (!ids.insert(e.id).second) {
        BadLine(path, i + 1, "duplicate utterance id '" + e.id + "'");
      }
      entries.push_back(std::move(e));
    } catch (const json::exception &ex) {
      BadLine(path, i + 1, ex.what());
    }
  }
  return entries;
}

void SaveManifest(const std::vector<UtteranceEntry> &entries,
                  const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (const auto &e : entries) {
    json obj;
    obj["id"] = e.id;
    if (e.reference) obj["reference"] = *e.reference;
    if (e.syllable_path) obj["syllable_lattice"] = *e.syllable_path;
    if (e.grapheme_path) obj["grapheme_lattice"] = *e.grapheme_path;
    out << obj.dump() << '\n';
  }
}

Utterance LoadUtterance(const UtteranceEntry &entry, LatticeFormat format) {
  Utterance u{entry.id, entry.reference, std::nullopt, std::nullopt};
  if (entry.syllable_path) u.syllable_lattice = LoadLattice(*entry.syllable_path, format);
  if (entry.grapheme_path) u.grapheme_lattice = LoadLattice(*entry.grapheme_path, format);
  return u;
}

std::vector<stats::Reference> LoadReferences(const std::string &path) {
  std::vector<stats::Reference> refs;
  std::set<std::string> ids;
  auto lines = LoadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto tab = lines[i].find('\t');
    if (tab == std::string::npos) BadLine(path, i + 1, "expected id<TAB>text");
    stats::Reference r{lines[i].substr(0, tab), lines[i].substr(tab + 1)};
    if (!ids.insert(r.id).second) {
      BadLine(path, i + 1, "duplicate id '" + r.id + "'");
    }
    refs.push_back(std::move(r));
  }
  return refs;
}

HypothesisFile LoadHypotheses(const std::string &path) {
  HypothesisFile out;
  auto lines = LoadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string &line = lines[i];
    if (line.empty()) continue;
    std::string id, text;
    if (line.front() == '{') {
      try {
        json rec = json::parse(line);
        id = rec.at("id").get<std::string>();
        if (rec.contains("error")) {
          out.failed_ids.push_back(id);
        } else {
          const json &hyps = rec.at("hypotheses");
          if (!hyps.empty()) text = hyps.at(0).at("text").get<std::string>();
        }
      } catch (const json::exception &ex) {
        BadLine(path, i + 1, ex.what());
      }
    } else {
      auto tab = line.find('\t');
      if (tab == std::string::npos) BadLine(path, i + 1, "expected id<TAB>text");
      id = line.substr(0, tab);
      text = line.substr(tab + 1);
    }
    if (!out.texts.emplace(id, text).second) {
      BadLine(path, i + 1, "duplicate id '" + id + "'");
    }
  }
  return out;
}

}  // namespace hanjoint::corpus
