#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hanjoint/error.h"
#include "hanjoint/lattice.h"
#include "hanjoint/synth.h"
#include "hanjoint/vocabulary.h"

namespace hanjoint {
namespace {

namespace fs = std::filesystem;

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::string BinaryHeader(std::uint8_t version, std::uint8_t flags,
                         std::uint32_t F, std::uint32_t V) {
  std::string out = "CTCL";
  out += static_cast<char>(version);
  out += static_cast<char>(flags);
  for (std::uint32_t v : {F, V}) {
    for (int b = 0; b < 4; ++b) out += static_cast<char>((v >> (8 * b)) & 0xFF);
  }
  return out;
}

void AppendFloat(std::string *out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  for (int b = 0; b < 4; ++b) *out += static_cast<char>((bits >> (8 * b)) & 0xFF);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hanjoint_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Write(const std::string &name, const std::string &bytes) {
    auto path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << bytes;
    return path;
  }
  fs::path dir_;
};

using VocabularyTest = TempDir;

TEST_F(VocabularyTest, LoadsWellFormedFile) {
  auto v = Vocabulary::Load(Write("v", "<ctc_blank>\n|\n가\n나\n"));
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.delimiter_index(), 1);
  EXPECT_EQ(v.Find("나"), 3);
  EXPECT_FALSE(v.Find("다").has_value());
}

TEST_F(VocabularyTest, ToleratesCrLfAndMissingTrailingNewline) {
  auto v = Vocabulary::Load(Write("v", "<ctc_blank>\r\n|\r\n가"));
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<ctc_blank>", "|", "가"}));
}

TEST_F(VocabularyTest, Errors) {
  EXPECT_EQ(CodeOf([&] { Vocabulary::Load(Write("a", "가\n<ctc_blank>\n|\n")); }),
            ErrorCode::kMissingBlank);
  EXPECT_EQ(CodeOf([&] { Vocabulary::Load(Write("b", "<ctc_blank>\n가\n")); }),
            ErrorCode::kMissingDelimiter);
  EXPECT_EQ(CodeOf([&] { Vocabulary::Load(Write("c", "<ctc_blank>\n|\n가\n가\n")); }),
            ErrorCode::kDuplicateToken);
  EXPECT_EQ(CodeOf([&] { Vocabulary::Load(Write("d", "<ctc_blank>\n|\n\n가\n")); }),
            ErrorCode::kEmptyToken);
  EXPECT_EQ(CodeOf([&] { Vocabulary::Load((dir_ / "missing").string()); }),
            ErrorCode::kIo);
  try {
    Vocabulary::Load(Write("e", "<ctc_blank>\n|\n가\n가\n"));
  } catch (const DuplicateTokenError &e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST_F(VocabularyTest, SaveLoadRoundTrip) {
  auto v = Vocabulary::Build({"나", "가", "나", "|"});
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<ctc_blank>", "|", "나", "가"}));
  auto path = (dir_ / "out.vocab").string();
  v.Save(path);
  EXPECT_EQ(Vocabulary::Load(path).tokens(), v.tokens());
}

using LatticeTest = TempDir;

TEST_F(LatticeTest, ParsesBinary) {
  std::string bytes = BinaryHeader(1, 0, 2, 3);
  for (float f : {1.f, 2.f, 3.f, -1.f, -2.f, 0.5f}) AppendFloat(&bytes, f);
  auto lat = ParseBinaryLattice(bytes);
  EXPECT_EQ(lat.frames(), 2u);
  EXPECT_EQ(lat.vocab_size(), 3u);
  EXPECT_FALSE(lat.normalized());
  EXPECT_EQ(lat.at(1, 2), 0.5);
  EXPECT_EQ(lat.at(0, 1), 2.0);
}

TEST_F(LatticeTest, BinaryErrors) {
  std::string good = BinaryHeader(1, 0, 1, 2);
  AppendFloat(&good, 0.f);
  AppendFloat(&good, 1.f);
  EXPECT_NO_THROW(ParseBinaryLattice(good));

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(bad_magic); }), ErrorCode::kBadMagic);
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(good.substr(0, good.size() - 1)); }),
            ErrorCode::kTruncatedFile);
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(good.substr(0, 7)); }),
            ErrorCode::kTruncatedFile);
  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(bad_version); }), ErrorCode::kBadFormat);
  std::string bad_flags = good;
  bad_flags[5] = 0x02;
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(bad_flags); }), ErrorCode::kBadFormat);
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(good + "x"); }),
            ErrorCode::kDimensionMismatch);

  std::string nan = BinaryHeader(1, 0, 1, 2);
  AppendFloat(&nan, 0.f);
  AppendFloat(&nan, std::nanf(""));
  try {
    ParseBinaryLattice(nan);
    FAIL();
  } catch (const NonFiniteScoreError &e) {
    EXPECT_EQ(e.frame(), 0u);
    EXPECT_EQ(e.index(), 1u);
  }

  std::string unnormalized = BinaryHeader(1, 1, 1, 2);
  AppendFloat(&unnormalized, 0.f);
  AppendFloat(&unnormalized, 0.f);
  EXPECT_EQ(CodeOf([&] { ParseBinaryLattice(unnormalized); }),
            ErrorCode::kNotNormalized);
}

TEST_F(LatticeTest, ParsesText) {
  auto lat = ParseTextLattice("1 2 norm\n−0.693147 −0.693147\n");
  EXPECT_TRUE(lat.normalized());
  EXPECT_EQ(lat.frames(), 1u);
  EXPECT_DOUBLE_EQ(lat.at(0, 1), -0.693147);

  auto raw = ParseTextLattice("2 2\n1 2\n3 4\n");
  EXPECT_FALSE(raw.normalized());
  EXPECT_EQ(raw.at(1, 0), 3.0);
}

TEST_F(LatticeTest, TextErrors) {
  EXPECT_EQ(CodeOf([] { ParseTextLattice("2 2\n1 2\n"); }), ErrorCode::kTruncatedFile);
  EXPECT_EQ(CodeOf([] { ParseTextLattice("1 2\n1 2 3\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ParseTextLattice("1 2\n1 nan\n"); }), ErrorCode::kNonFiniteScore);
  EXPECT_EQ(CodeOf([] { ParseTextLattice("1 2\n1 x\n"); }), ErrorCode::kBadFormat);
  EXPECT_EQ(CodeOf([] { ParseTextLattice("1 2 maybe\n1 2\n"); }), ErrorCode::kBadFormat);
}

TEST_F(LatticeTest, RoundTripsThroughFiles) {
  auto lat = synth::RandomLattice(5, 7, 99);
  auto text_path = (dir_ / "l.txt").string();
  auto bin_path = (dir_ / "l.ctcl").string();
  SaveLattice(lat, text_path, LatticeFormat::kText);
  SaveLattice(lat, bin_path);
  auto text = LoadLattice(text_path);
  auto bin = LoadLattice(bin_path);
  EXPECT_TRUE(text.normalized());
  EXPECT_TRUE(bin.normalized());
  for (std::size_t k = 0; k < lat.scores().size(); ++k) {
    EXPECT_EQ(text.scores()[k], lat.scores()[k]);
    EXPECT_EQ(bin.scores()[k], static_cast<float>(lat.scores()[k]));
  }
}

TEST_F(LatticeTest, LoadErrorsNameThePath) {
  auto path = Write("corrupt.ctcl", "CTCL\x01");
  try {
    LoadLattice(path);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedFile);
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}

TEST(Normalize, Examples) {
  double out[2];
  double zeros[2] = {0, 0};
  LogSoftmax(zeros, out);
  EXPECT_DOUBLE_EQ(out[0], std::log(0.5));
  EXPECT_DOUBLE_EQ(out[1], std::log(0.5));

  double probs[2] = {std::log(0.3), std::log(0.7)};
  LogSoftmax(probs, out);
  EXPECT_NEAR(out[0], probs[0], 1e-9);
  EXPECT_NEAR(out[1], probs[1], 1e-9);

  // log(1 + e^-1000) underflows to 0 in double; the oracle is exact there.
  double big[2] = {1000, 0};
  LogSoftmax(big, out);
  EXPECT_TRUE(std::isfinite(out[0]) && std::isfinite(out[1]));
  EXPECT_NEAR(out[0], 0.0, 1e-12);
  EXPECT_NEAR(out[1], -1000.0, 1e-9);
}

TEST(Normalize, RowsSumToOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::Rng rng(seed);
    std::vector<double> raw(4 * 6);
    for (auto &v : raw) v = 50 * (rng.Unit() - 0.5);
    auto lat = Normalize(EmissionLattice(4, 6, raw, false));
    EXPECT_TRUE(lat.normalized());
    for (std::size_t f = 0; f < 4; ++f) {
      long double sum = 0;
      for (double v : lat.row(f)) sum += std::exp((long double)v);
      EXPECT_NEAR(static_cast<double>(sum), 1.0, 1e-12);
    }
  }
}

TEST(EmissionLatticeTest, ConstructorValidates) {
  EXPECT_EQ(CodeOf([] { EmissionLattice(2, 2, {0, 0, 0}, false); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { EmissionLattice(1, 2, {0, INFINITY}, false); }),
            ErrorCode::kNonFiniteScore);
  EXPECT_NO_THROW(EmissionLattice(0, 3, {}, true));
}

}  // namespace
}  // namespace hanjoint
