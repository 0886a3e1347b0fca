#pragma once

#include <array>
#include <cstdint>

#include "dctfuse/fixed_point.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse {

// Orthonormal DCT-II basis: c(i, j) = a(i) * cos((2j + 1) i pi / 16),
// a(0) = sqrt(1/8), a(i > 0) = sqrt(2/8). Row i is frequency i.
using DctMatrix = std::array<double, kBlockArea>;
const DctMatrix& dct_matrix();

// coeffs = M * block * M^T, computed as a row pass, a transpose and a
// column pass. No level shift is applied.
CoeffBlock fdct2(const Block& block);
// block = M^T * coeffs * M.
Block idct2(const CoeffBlock& coeffs);

// ---------------------------------------------------------------------------
// Fixed-point datapath.
//
// Samples enter as Q(1,10,24) words pre-scaled by 2^-kFixedInputShift. Both
// 1D passes use unnormalized cosine constants cos(m pi / 16) from a ROM with
// kRomFractionBits fractional bits and round once per output word; the
// a(u) * a(v) normalization is a separate constant multiply at the end of
// the forward transform (start of the inverse). The DC cosine row is exactly
// 1, so adding a constant to every sample changes only the DC word.
//
// With the 2^-4 pre-scale, an 8-bit block peaks at 64 * 255 / 16 = 1020 in
// the second pass, inside the +-1024 word range.
// ---------------------------------------------------------------------------

inline constexpr int kFixedInputShift = 4;

// Coefficients held at the datapath's internal scale: the real coefficient
// is raw * 2^-24 * 2^kFixedInputShift.
using FixedCoeffBlock = std::array<Fixed35, kBlockArea>;

struct FixedDctRom {
  // cosine[k * 8 + n] = cos((2n + 1) k pi / 16) for frequency k, sample n.
  std::array<std::int64_t, kBlockArea> cosine;
  // scale[u * 8 + v] = a(u) * a(v).
  std::array<std::int64_t, kBlockArea> scale;
};
const FixedDctRom& fixed_dct_rom();

// One 8-point pass: out[k] = sum_n cos_rom[k][n] * in[n] (forward) or
// out[n] = sum_k cos_rom[k][n] * in[k] (inverse), each rounded once.
std::array<Fixed35, kBlockSize> fdct1_fixed(const std::array<Fixed35, kBlockSize>& in,
                                            SaturationFlag& flag);
std::array<Fixed35, kBlockSize> idct1_fixed(const std::array<Fixed35, kBlockSize>& in,
                                            SaturationFlag& flag);

// Samples are expected in [0, 255]; saturation cannot happen for such input.
FixedCoeffBlock fdct2_fixed(const Block& block, SaturationFlag& flag);
// Throws SaturationError if any intermediate saturates.
FixedCoeffBlock fdct2_fixed(const Block& block);

// Output samples at pixel scale, exact conversions of the final words.
Block idct2_fixed(const FixedCoeffBlock& coeffs, SaturationFlag& flag);
Block idct2_fixed(const FixedCoeffBlock& coeffs);

// Exact conversion of the internal words to real coefficients.
double fixed_coefficient_value(Fixed35 word);
CoeffBlock to_coeff_block(const FixedCoeffBlock& coeffs);

}  // namespace dctfuse
