// hanjoint/lattice.cc

#include "hanjoint/lattice.h"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hanjoint/error.h"
#include "hanjoint/log_math.h"

namespace hanjoint {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'L'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagNormalized = 0x01;
constexpr std::size_t kHeaderSize = 14;
constexpr double kRowSumTolerance = 1e-6;

std::uint32_t ReadU32(const char *p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void AppendU32(std::uint32_t v, std::string *out) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits on ASCII whitespace.
std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double ParseDouble(std::string_view field, std::size_t frame, std::size_t index) {
  std::string buf(field);
  // Accept the typographic minus sign (U+2212).
  if (buf.rfind("\xE2\x88\x92", 0) == 0) buf.replace(0, 3, "-");
  const char *first = buf.data();
  const char *last = buf.data() + buf.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) throw NonFiniteScoreError(frame, index);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kBadFormat, "cannot parse score '" + std::string(field) +
                                           "' at frame " + std::to_string(frame));
  }
  return value;
}

std::size_t ParseCount(std::string_view field) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kBadFormat, "bad dimension '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

EmissionLattice::EmissionLattice(std::size_t frames, std::size_t vocab_size,
                                 std::vector<double> scores, bool normalized)
    : frames_(frames),
      vocab_size_(vocab_size),
      scores_(std::move(scores)),
      normalized_(normalized) {
  if (vocab_size_ == 0 || scores_.size() != frames_ * vocab_size_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice of " + std::to_string(frames_) + "x" +
                    std::to_string(vocab_size_) + " given " +
                    std::to_string(scores_.size()) + " scores");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i])) {
      throw NonFiniteScoreError(i / vocab_size_, i % vocab_size_);
    }
  }
  if (normalized_) {
    for (std::size_t f = 0; f < frames_; ++f) {
      double sum = std::exp(LogSumExp(row(f)));
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw Error(ErrorCode::kNotNormalized,
                    "frame " + std::to_string(f) +
                        " probabilities sum to " + std::to_string(sum));
      }
    }
  }
}

EmissionLattice EmissionLattice::FromRows(
    const std::vector<std::vector<double>> &rows, bool normalized) {
  std::size_t v = rows.empty() ? 0 : rows[0].size();
  std::vector<double> scores;
  scores.reserve(rows.size() * v);
  for (const auto &r : rows) {
    if (r.size() != v) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged lattice rows");
    }
    scores.insert(scores.end(), r.begin(), r.end());
  }
  return EmissionLattice(rows.size(), v, std::move(scores), normalized);
}

LatticeFormat ParseLatticeFormat(std::string_view name) {
  if (name == "auto") return LatticeFormat::kAuto;
  if (name == "binary") return LatticeFormat::kBinary;
  if (name == "text") return LatticeFormat::kText;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown lattice format '" + std::string(name) + "'");
}

EmissionLattice ParseBinaryLattice(std::string_view bytes) {
  std::size_t magic_len = std::min<std::size_t>(bytes.size(), 4);
  if (std::memcmp(bytes.data(), kMagic, magic_len) != 0) {
    throw Error(ErrorCode::kBadMagic, "missing CTCL magic");
  }
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorCode::kTruncatedFile, "lattice header truncated");
  }
  auto version = static_cast<std::uint8_t>(bytes[4]);
  auto flags = static_cast<std::uint8_t>(bytes[5]);
  if (version != kVersion) {
    throw Error(ErrorCode::kBadFormat,
                "unsupported lattice version " + std::to_string(version));
  }
  if ((flags & ~kFlagNormalized) != 0) {
    throw Error(ErrorCode::kBadFormat, "reserved lattice flag bits set");
  }
  std::size_t frames = ReadU32(bytes.data() + 6);
  std::size_t vocab = ReadU32(bytes.data() + 10);
  std::size_t expected = kHeaderSize + frames * vocab * 4;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncatedFile,
                "expected " + std::to_string(expected) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  if (bytes.size() > expected || vocab == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice payload does not match " + std::to_string(frames) +
                    "x" + std::to_string(vocab));
  }
  std::vector<double> scores(frames * vocab);
  const char *p = bytes.data() + kHeaderSize;
  for (std::size_t i = 0; i < scores.size(); ++i, p += 4) {
    scores[i] = std::bit_cast<float>(ReadU32(p));
  }
  return EmissionLattice(frames, vocab, std::move(scores),
                         (flags & kFlagNormalized) != 0);
}

EmissionLattice ParseTextLattice(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  // Drop trailing blank lines.
  while (!lines.empty() && Fields(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::kTruncatedFile, "empty lattice file");

  auto header = Fields(lines[0]);
  if (header.size() < 2 || header.size() > 3) {
    throw Error(ErrorCode::kBadFormat, "lattice header must be 'F V [norm|raw]'");
  }
  std::size_t frames = ParseCount(header[0]);
  std::size_t vocab = ParseCount(header[1]);
  bool normalized = false;
  if (header.size() == 3) {
    if (header[2] == "norm") {
      normalized = true;
    } else if (header[2] != "raw") {
      throw Error(ErrorCode::kBadFormat, "lattice header flag must be norm or raw");
    }
  }
  if (lines.size() - 1 < frames) {
    throw Error(ErrorCode::kTruncatedFile,
                "expected " + std::to_string(frames) + " rows, got " +
                    std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > frames) {
    throw Error(ErrorCode::kDimensionMismatch, "more rows than header declares");
  }
  std::vector<double> scores;
  scores.reserve(frames * vocab);
  for (std::size_t f = 0; f < frames; ++f) {
    auto fields = Fields(lines[f + 1]);
    if (fields.size() != vocab) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(f) + " has " +
                      std::to_string(fields.size()) + " values, expected " +
                      std::to_string(vocab));
    }
    for (std::size_t v = 0; v < vocab; ++v) {
      double x = ParseDouble(fields[v], f, v);
      if (!std::isfinite(x)) throw NonFiniteScoreError(f, v);
      scores.push_back(x);
    }
  }
  return EmissionLattice(frames, vocab, std::move(scores), normalized);
}

std::string SerializeBinaryLattice(const EmissionLattice &lattice) {
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  out.push_back(static_cast<char>(lattice.normalized() ? kFlagNormalized : 0));
  AppendU32(static_cast<std::uint32_t>(lattice.frames()), &out);
  AppendU32(static_cast<std::uint32_t>(lattice.vocab_size()), &out);
  out.reserve(out.size() + lattice.scores().size() * 4);
  for (double x : lattice.scores()) {
    AppendU32(std::bit_cast<std::uint32_t>(static_cast<float>(x)), &out);
  }
  return out;
}

std::string SerializeTextLattice(const EmissionLattice &lattice) {
  std::string out = std::to_string(lattice.frames()) + " " +
                    std::to_string(lattice.vocab_size()) +
                    (lattice.normalized() ? " norm\n" : " raw\n");
  char buf[64];
  for (std::size_t f = 0; f < lattice.frames(); ++f) {
    auto row = lattice.row(f);
    for (std::size_t v = 0; v < row.size(); ++v) {
      // Shortest representation that round-trips the double exactly.
      auto res = std::to_chars(buf, buf + sizeof(buf), row[v]);
      if (v > 0) out.push_back(' ');
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

EmissionLattice LoadLattice(const std::string &path, LatticeFormat format) {
  std::string bytes = ReadFile(path);
  if (format == LatticeFormat::kAuto) {
    format = bytes.compare(0, 4, std::string_view(kMagic, 4)) == 0
                 ? LatticeFormat::kBinary
                 : LatticeFormat::kText;
  }
  try {
    return format == LatticeFormat::kBinary ? ParseBinaryLattice(bytes)
                                            : ParseTextLattice(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void SaveLattice(const EmissionLattice &lattice, const std::string &path,
                 LatticeFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << (format == LatticeFormat::kText ? SerializeTextLattice(lattice)
                                         : SerializeBinaryLattice(lattice));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

void LogSoftmax(std::span<const double> in, std::span<double> out) {
  double lse = LogSumExp(in);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - lse;
}

EmissionLattice Normalize(const EmissionLattice &lattice) {
  std::vector<double> scores(lattice.scores().size());
  for (std::size_t f = 0; f < lattice.frames(); ++f) {
    LogSoftmax(lattice.row(f),
               std::span<double>(scores.data() + f * lattice.vocab_size(),
                                 lattice.vocab_size()));
  }
  return EmissionLattice(lattice.frames(), lattice.vocab_size(),
                         std::move(scores), true);
}

}  // namespace hanjoint
