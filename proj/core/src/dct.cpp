#include "dctfuse/dct.hpp"

#include <cmath>
#include <numbers>

#include "dctfuse/error.hpp"

namespace dctfuse {
namespace {

constexpr int N = kBlockSize;

double alpha(int k) { return k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0); }

// cos(m pi / 16) folded into the first quadrant so that entries equal in
// magnitude come from the same evaluation and round to the same ROM word.
double cos_sixteenth(int m) {
  m %= 32;
  if (m < 0) m += 32;
  double sign = 1.0;
  if (m > 16) m = 32 - m;
  if (m > 8) {
    m = 16 - m;
    sign = -1.0;
  }
  if (m == 8) return 0.0;
  return sign * std::cos(m * std::numbers::pi / 16.0);
}

DctMatrix make_matrix() {
  DctMatrix m{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m[block_index(i, j)] = alpha(i) * cos_sixteenth((2 * j + 1) * i);
  return m;
}

FixedDctRom make_rom() {
  FixedDctRom rom{};
  for (int k = 0; k < N; ++k)
    for (int n = 0; n < N; ++n)
      rom.cosine[block_index(k, n)] = to_rom_constant(cos_sixteenth((2 * n + 1) * k));
  for (int u = 0; u < N; ++u)
    for (int v = 0; v < N; ++v) rom.scale[block_index(u, v)] = to_rom_constant(alpha(u) * alpha(v));
  return rom;
}

template <typename T>
std::array<T, kBlockArea> transpose(const std::array<T, kBlockArea>& in) {
  std::array<T, kBlockArea> out{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out[block_index(j, i)] = in[block_index(i, j)];
  return out;
}

// Applies `pass` to each row of `in`, transposes, applies it again and
// transposes back.
template <typename T, typename Pass>
std::array<T, kBlockArea> separable(const std::array<T, kBlockArea>& in, Pass&& pass) {
  std::array<T, kBlockArea> stage{};
  for (int r = 0; r < N; ++r) {
    std::array<T, N> row;
    for (int c = 0; c < N; ++c) row[c] = in[block_index(r, c)];
    const auto out = pass(row);
    for (int c = 0; c < N; ++c) stage[block_index(r, c)] = out[c];
  }
  const auto t = transpose(stage);
  std::array<T, kBlockArea> result{};
  for (int r = 0; r < N; ++r) {
    std::array<T, N> col;
    for (int c = 0; c < N; ++c) col[c] = t[block_index(r, c)];
    const auto out = pass(col);
    for (int c = 0; c < N; ++c) result[block_index(r, c)] = out[c];
  }
  return transpose(result);
}

}  // namespace

const DctMatrix& dct_matrix() {
  static const DctMatrix m = make_matrix();
  return m;
}

const FixedDctRom& fixed_dct_rom() {
  static const FixedDctRom rom = make_rom();
  return rom;
}

CoeffBlock fdct2(const Block& block) {
  const auto& m = dct_matrix();
  return separable(block, [&m](const std::array<double, N>& x) {
    std::array<double, N> y{};
    for (int k = 0; k < N; ++k) {
      double s = 0.0;
      for (int n = 0; n < N; ++n) s += m[block_index(k, n)] * x[n];
      y[k] = s;
    }
    return y;
  });
}

Block idct2(const CoeffBlock& coeffs) {
  const auto& m = dct_matrix();
  return separable(coeffs, [&m](const std::array<double, N>& y) {
    std::array<double, N> x{};
    for (int n = 0; n < N; ++n) {
      double s = 0.0;
      for (int k = 0; k < N; ++k) s += m[block_index(k, n)] * y[k];
      x[n] = s;
    }
    return x;
  });
}

std::array<Fixed35, kBlockSize> fdct1_fixed(const std::array<Fixed35, kBlockSize>& in,
                                            SaturationFlag& flag) {
  const auto& rom = fixed_dct_rom();
  std::array<Fixed35, N> out{};
  for (int k = 0; k < N; ++k) {
    out[k] = dot_rounded(in, std::span<const std::int64_t>(rom.cosine).subspan(k * N, N), flag);
  }
  return out;
}

std::array<Fixed35, kBlockSize> idct1_fixed(const std::array<Fixed35, kBlockSize>& in,
                                            SaturationFlag& flag) {
  const auto& rom = fixed_dct_rom();
  std::array<Fixed35, N> out{};
  std::array<std::int64_t, N> column{};
  for (int n = 0; n < N; ++n) {
    for (int k = 0; k < N; ++k) column[k] = rom.cosine[block_index(k, n)];
    out[n] = dot_rounded(in, column, flag);
  }
  return out;
}

FixedCoeffBlock fdct2_fixed(const Block& block, SaturationFlag& flag) {
  FixedCoeffBlock words{};
  for (int i = 0; i < kBlockArea; ++i) {
    words[i] = to_fixed(std::ldexp(block[i], -kFixedInputShift), flag);
  }
  auto unscaled = separable(words, [&flag](const std::array<Fixed35, N>& x) {
    return fdct1_fixed(x, flag);
  });
  const auto& rom = fixed_dct_rom();
  for (int i = 0; i < kBlockArea; ++i) {
    const WideInt product = WideInt{unscaled[i].raw()} * rom.scale[i];
    unscaled[i] = saturate(round_shift(product, kRomFractionBits), flag);
  }
  return unscaled;
}

FixedCoeffBlock fdct2_fixed(const Block& block) {
  SaturationFlag flag;
  auto out = fdct2_fixed(block, flag);
  if (flag.raised()) throw SaturationError("fdct2_fixed: intermediate left the Q(1,10,24) range");
  return out;
}

Block idct2_fixed(const FixedCoeffBlock& coeffs, SaturationFlag& flag) {
  const auto& rom = fixed_dct_rom();
  FixedCoeffBlock scaled{};
  for (int i = 0; i < kBlockArea; ++i) {
    const WideInt product = WideInt{coeffs[i].raw()} * rom.scale[i];
    scaled[i] = saturate(round_shift(product, kRomFractionBits), flag);
  }
  const auto words = separable(scaled, [&flag](const std::array<Fixed35, N>& y) {
    return idct1_fixed(y, flag);
  });
  Block out{};
  for (int i = 0; i < kBlockArea; ++i) out[i] = fixed_coefficient_value(words[i]);
  return out;
}

Block idct2_fixed(const FixedCoeffBlock& coeffs) {
  SaturationFlag flag;
  auto out = idct2_fixed(coeffs, flag);
  if (flag.raised()) throw SaturationError("idct2_fixed: intermediate left the Q(1,10,24) range");
  return out;
}

double fixed_coefficient_value(Fixed35 word) {
  return std::ldexp(word.to_double(), kFixedInputShift);
}

CoeffBlock to_coeff_block(const FixedCoeffBlock& coeffs) {
  CoeffBlock out{};
  for (int i = 0; i < kBlockArea; ++i) out[i] = fixed_coefficient_value(coeffs[i]);
  return out;
}

}  // namespace dctfuse
