#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dctfuse/dct.hpp"
#include "dctfuse/measures.hpp"
#include "oracles.hpp"

namespace dctfuse {
namespace {

using testing::naive_fdct2;
using testing::naive_idct2;
using testing::random_block;
using testing::Rng;
using testing::uniform_real;

constexpr int kCases = 1000;

double max_abs_diff(const std::array<double, 64>& a, const std::array<double, 64>& b) {
  double m = 0;
  for (int i = 0; i < 64; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Dct, MatrixIsOrthonormal) {
  const auto& m = dct_matrix();
  double worst = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double s = 0;
      for (int k = 0; k < 8; ++k) s += m[i * 8 + k] * m[j * 8 + k];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Dct, MatrixMatchesDefinition) {
  const auto& m = dct_matrix();
  for (int i = 0; i < 8; ++i) {
    const double a = i == 0 ? std::sqrt(0.125) : 0.5;
    for (int j = 0; j < 8; ++j) {
      EXPECT_NEAR(m[i * 8 + j], a * std::cos((2 * j + 1) * i * M_PI / 16), 1e-15);
    }
  }
}

TEST(Dct, ZeroCoefficientsGiveZeroBlock) {
  const CoeffBlock zero{};
  for (double v : idct2(zero)) EXPECT_EQ(v, 0.0);
  for (double v : idct2_fixed(FixedCoeffBlock{})) EXPECT_EQ(v, 0.0);
}

TEST(Dct, DcOnlyFixedBlockIsConstant) {
  FixedCoeffBlock c{};
  c[0] = Fixed35::from_raw(1000 * Fixed35::kOneRaw >> kFixedInputShift);  // DC 1000
  const Block b = idct2_fixed(c);
  for (double v : b) EXPECT_NEAR(v, 125.0, 0.5);
}

TEST(Dct, ForwardMatchesNaiveDefinition) {
  Rng rng(21);
  for (int i = 0; i < kCases; ++i) {
    const Block b = random_block(rng);
    EXPECT_LE(max_abs_diff(fdct2(b), naive_fdct2(b)), 1e-9);
  }
}

TEST(Dct, InverseMatchesNaiveDefinition) {
  Rng rng(22);
  for (int i = 0; i < kCases; ++i) {
    CoeffBlock c{};
    for (auto& v : c) v = uniform_real(rng, -500.0, 500.0);
    EXPECT_LE(max_abs_diff(idct2(c), naive_idct2(c)), 1e-9);
  }
}

TEST(Dct, Parseval) {
  Rng rng(23);
  for (int i = 0; i < kCases; ++i) {
    const Block b = random_block(rng);
    const CoeffBlock d = fdct2(b);
    double ex = 0, ed = 0;
    for (int k = 0; k < 64; ++k) {
      ex += b[k] * b[k];
      ed += d[k] * d[k];
    }
    EXPECT_LE(std::abs(ed - ex), 1e-6 * std::max(ex, 1.0));
  }
}

TEST(Dct, Linearity) {
  Rng rng(24);
  for (int i = 0; i < kCases; ++i) {
    const Block x = random_block(rng);
    const Block y = random_block(rng);
    const double a = uniform_real(rng, -3.0, 3.0);
    const double b = uniform_real(rng, -3.0, 3.0);
    Block mix{};
    for (int k = 0; k < 64; ++k) mix[k] = a * x[k] + b * y[k];
    const CoeffBlock dx = fdct2(x), dy = fdct2(y), dm = fdct2(mix);
    for (int k = 0; k < 64; ++k) EXPECT_NEAR(dm[k], a * dx[k] + b * dy[k], 1e-9);
  }
}

TEST(Dct, EightBitRoundTripExactAfterRounding) {
  Rng rng(25);
  for (int i = 0; i < kCases; ++i) {
    const Block b = random_block(rng);
    const Block back = idct2(fdct2(b));
    const Block back_fixed = idct2_fixed(fdct2_fixed(b));
    for (int k = 0; k < 64; ++k) {
      ASSERT_EQ(to_pixel(back[k]), b[k]);
      ASSERT_EQ(to_pixel(back_fixed[k]), b[k]);
    }
  }
}

TEST(DctFixed, AgreesWithFloatWithinTolerance) {
  Rng rng(26);
  const double tol = std::ldexp(1.0, -16);
  double worst = 0;
  for (int i = 0; i < 4 * kCases; ++i) {
    const Block b = random_block(rng);
    SaturationFlag flag;
    const CoeffBlock fixed = to_coeff_block(fdct2_fixed(b, flag));
    ASSERT_FALSE(flag.raised());
    worst = std::max(worst, max_abs_diff(fixed, fdct2(b)));
  }
  EXPECT_LE(worst, tol);
}

TEST(DctFixed, ExtremeBlocksDoNotSaturate) {
  std::vector<Block> blocks;
  Block full{}, checker{}, stripes{};
  full.fill(255.0);
  for (int k = 0; k < 64; ++k) {
    checker[k] = ((k / 8 + k % 8) % 2) ? 255.0 : 0.0;
    stripes[k] = (k % 8 < 4) ? 255.0 : 0.0;
  }
  blocks = {Block{}, full, checker, stripes};
  for (const auto& b : blocks) {
    SaturationFlag flag;
    const auto c = fdct2_fixed(b, flag);
    EXPECT_FALSE(flag.raised());
    EXPECT_LE(max_abs_diff(to_coeff_block(c), fdct2(b)), std::ldexp(1.0, -16));
    SaturationFlag back_flag;
    idct2_fixed(c, back_flag);
    EXPECT_FALSE(back_flag.raised());
  }
  EXPECT_DOUBLE_EQ(fixed_coefficient_value(fdct2_fixed(full)[0]), 2040.0);
}

TEST(DctFixed, OneDimensionalPassIsPlainCosineSum) {
  Rng rng(27);
  for (int i = 0; i < kCases; ++i) {
    std::array<Fixed35, 8> x;
    for (auto& v : x) v = Fixed35::from_raw(testing::uniform_int(rng, -16, 16) * Fixed35::kOneRaw);
    SaturationFlag flag;
    // The alpha factors are applied after both passes, not here.
    const auto y = fdct1_fixed(x, flag);
    for (int k = 0; k < 8; ++k) {
      double s = 0;
      for (int n = 0; n < 8; ++n) s += x[n].to_double() * std::cos((2 * n + 1) * k * M_PI / 16);
      EXPECT_NEAR(y[k].to_double(), s, 1e-6);
    }
  }
}

TEST(DctFixed, EnergyOrderingPreserved) {
  Rng rng(28);
  int compared = 0;
  for (int i = 0; i < 2 * kCases; ++i) {
    const Block x = random_block(rng, 0, testing::uniform_int(rng, 1, 255));
    const Block y = random_block(rng, 0, testing::uniform_int(rng, 1, 255));
    OpCounter ops;
    const double fx = amp_max(fdct2(x), ops).value;
    const double fy = amp_max(fdct2(y), ops).value;
    if (std::abs(fx - fy) <= std::ldexp(1.0, -10)) continue;
    ++compared;
    const auto qx = amp_max_raw(fdct2_fixed(x), ops);
    const auto qy = amp_max_raw(fdct2_fixed(y), ops);
    EXPECT_EQ(fx > fy, qx > qy);
  }
  EXPECT_GE(compared, kCases);
}

TEST(DctFixed, RomSymmetry) {
  const auto& rom = fixed_dct_rom();
  EXPECT_EQ(rom.cosine[0], std::int64_t{1} << kRomFractionBits);
  for (int k = 1; k < 8; ++k) {
    std::int64_t sum = 0;
    for (int n = 0; n < 8; ++n) {
      sum += rom.cosine[k * 8 + n];
      const int sign = (k % 2) ? -1 : 1;
      EXPECT_EQ(rom.cosine[k * 8 + 7 - n], sign * rom.cosine[k * 8 + n]);
    }
    EXPECT_EQ(sum, 0);
  }
}

}  // namespace
}  // namespace dctfuse
