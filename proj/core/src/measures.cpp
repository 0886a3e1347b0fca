#include "dctfuse/measures.hpp"

#include <cmath>

#include "dctfuse/error.hpp"

namespace dctfuse {
namespace {
constexpr int kAcTerms = kBlockArea - 1;
}

std::string_view measure_name(MeasureId id) {
  switch (id) {
    case MeasureId::AmpMax:
      return "ampmax";
    case MeasureId::Variance:
      return "variance";
    case MeasureId::SpatialFrequency:
      return "sf";
    case MeasureId::AcMax:
      return "acmax";
  }
  return "unknown";
}

std::optional<MeasureId> parse_measure(std::string_view name) {
  if (name == "ampmax") return MeasureId::AmpMax;
  if (name == "variance") return MeasureId::Variance;
  if (name == "sf") return MeasureId::SpatialFrequency;
  if (name == "acmax") return MeasureId::AcMax;
  return std::nullopt;
}

FocusScore amp_max(const CoeffBlock& coeffs, OpCounter& counter) {
  double sum = 0.0;
  for (int i = 1; i < kBlockArea; ++i) sum += std::fabs(coeffs[i]);
  counter.additions += kAcTerms;
  return {MeasureId::AmpMax, sum};
}

std::int64_t amp_max_raw(const FixedCoeffBlock& coeffs, OpCounter& counter) {
  SaturationFlag flag;
  Accumulator41 acc;
  for (int i = 1; i < kBlockArea; ++i) acc.add_abs(coeffs[i], flag);
  counter.additions += kAcTerms;
  if (flag.raised()) throw SaturationError("amp_max: 41-bit accumulator overflow");
  return acc.raw();
}

FocusScore amp_max(const FixedCoeffBlock& coeffs, OpCounter& counter) {
  const std::int64_t raw = amp_max_raw(coeffs, counter);
  // Below 2^41 in magnitude, so the conversion is exact.
  return {MeasureId::AmpMax,
          std::ldexp(static_cast<double>(raw), kFixedInputShift - Fixed35::kFractionBits)};
}

FocusScore variance(const CoeffBlock& coeffs, OpCounter& counter) {
  double energy = 0.0;
  double dc_square = 0.0;
  for (int i = 0; i < kBlockArea; ++i) {
    const double sq = coeffs[i] * coeffs[i];
    if (i == 0) dc_square = sq;
    energy += sq;
  }
  counter.multiplications += kBlockArea;
  counter.additions += kAcTerms;
  // The 1/64 normalizations are power-of-two shifts.
  double v = energy / kBlockArea - dc_square / kBlockArea;
  FocusScore score{MeasureId::Variance, v};
  if (v < 0.0) {
    score.value = 0.0;
    score.clamped = true;
  }
  return score;
}

FocusScore spatial_frequency_measure(const Block& block, OpCounter& counter) {
  double rf = 0.0;
  double cf = 0.0;
  for (int i = 0; i < kBlockSize; ++i) {
    for (int j = 1; j < kBlockSize; ++j) {
      const double d = block[block_index(i, j)] - block[block_index(i, j - 1)];
      rf += d * d;
    }
  }
  for (int i = 1; i < kBlockSize; ++i) {
    for (int j = 0; j < kBlockSize; ++j) {
      const double d = block[block_index(i, j)] - block[block_index(i - 1, j)];
      cf += d * d;
    }
  }
  constexpr int kTermsPerDirection = kBlockSize * (kBlockSize - 1);
  counter.multiplications += 2 * kTermsPerDirection;
  // differences + two running sums + the final RF^2 + CF^2
  counter.additions += 2 * kTermsPerDirection + 2 * (kTermsPerDirection - 1) + 1;
  return {MeasureId::SpatialFrequency, rf / kBlockArea + cf / kBlockArea};
}

FocusScore ac_max(const CoeffBlock& coeffs, double threshold, OpCounter& counter) {
  if (!(threshold >= 0.0)) throw InvalidArgumentError("ac_max: threshold must be non-negative");
  int count = 0;
  for (int i = 1; i < kBlockArea; ++i) count += std::fabs(coeffs[i]) > threshold ? 1 : 0;
  counter.conditional_increments += kAcTerms;
  return {MeasureId::AcMax, static_cast<double>(count)};
}

}  // namespace dctfuse
