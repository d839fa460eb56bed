// hanjoint/lattice.h
//
// Emission lattices: F x V matrices of per-frame token scores, either raw
// logits or log-probabilities ("normalized"). Scores are widened to double
// in memory; on disk they are 32-bit little-endian floats.
//
// Binary format "CTCL" v1:
//   bytes 0..3   magic "CTCL"
//   byte  4      version (1)
//   byte  5      flags: bit0 = normalized, bits 1..7 must be zero
//   bytes 6..9   F, uint32 little-endian
//   bytes 10..13 V, uint32 little-endian
//   then F*V float32 little-endian, row-major
//
// Text format: a header line "F V [norm|raw]" followed by F lines of V
// whitespace-separated decimals.

#ifndef HANJOINT_LATTICE_H_
#define HANJOINT_LATTICE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hanjoint {

class EmissionLattice {
 public:
  EmissionLattice() = default;

  // Throws NonFiniteScore, DimensionMismatch, or NotNormalized when
  // `normalized` is set but a row's probabilities do not sum to 1 +- 1e-6.
  EmissionLattice(std::size_t frames, std::size_t vocab_size,
                  std::vector<double> scores, bool normalized);

  static EmissionLattice FromRows(const std::vector<std::vector<double>> &rows,
                                  bool normalized);

  std::size_t frames() const { return frames_; }
  std::size_t vocab_size() const { return vocab_size_; }
  bool normalized() const { return normalized_; }

  std::span<const double> row(std::size_t frame) const {
    return {scores_.data() + frame * vocab_size_, vocab_size_};
  }
  double at(std::size_t frame, std::size_t token) const {
    return scores_[frame * vocab_size_ + token];
  }
  std::span<const double> scores() const { return scores_; }

 private:
  std::size_t frames_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<double> scores_;
  bool normalized_ = false;
};

enum class LatticeFormat { kAuto, kBinary, kText };

// "auto", "binary" or "text"; throws InvalidConfig otherwise.
LatticeFormat ParseLatticeFormat(std::string_view name);

EmissionLattice ParseBinaryLattice(std::string_view bytes);
EmissionLattice ParseTextLattice(std::string_view text);
std::string SerializeBinaryLattice(const EmissionLattice &lattice);
std::string SerializeTextLattice(const EmissionLattice &lattice);

// kAuto picks binary when the file starts with the magic, text otherwise.
// Errors carry the path in their message.
EmissionLattice LoadLattice(const std::string &path,
                            LatticeFormat format = LatticeFormat::kAuto);
// kAuto saves binary.
void SaveLattice(const EmissionLattice &lattice, const std::string &path,
                 LatticeFormat format = LatticeFormat::kAuto);

// Row-wise log-softmax. Max-subtracted, so large logits do not overflow.
void LogSoftmax(std::span<const double> in, std::span<double> out);
EmissionLattice Normalize(const EmissionLattice &lattice);

}  // namespace hanjoint

#endif  // HANJOINT_LATTICE_H_
