#pragma once

#include <optional>
#include <string_view>

#include "dctfuse/dct.hpp"
#include "dctfuse/image.hpp"
#include "dctfuse/op_counter.hpp"

namespace dctfuse {

enum class MeasureId { AmpMax, Variance, SpatialFrequency, AcMax };

std::string_view measure_name(MeasureId id);
// Accepts "ampmax", "variance", "sf" and "acmax".
std::optional<MeasureId> parse_measure(std::string_view name);

// Block focus score. Scores are only comparable within one measure.
struct FocusScore {
  MeasureId measure = MeasureId::AmpMax;
  double value = 0.0;
  // Set when a negative variance from rounding was clamped to zero.
  bool clamped = false;
};

// Sum of absolute AC coefficients. Adds 63 additions to the counter.
FocusScore amp_max(const CoeffBlock& coeffs, OpCounter& counter);
// Fixed-point flavor: |AC| words summed in a 41-bit accumulator. The value
// is the exact accumulator contents at coefficient scale.
FocusScore amp_max(const FixedCoeffBlock& coeffs, OpCounter& counter);
// Raw accumulator of the fixed flavor, at the datapath's internal scale.
std::int64_t amp_max_raw(const FixedCoeffBlock& coeffs, OpCounter& counter);

// Pixel-domain variance recovered from orthonormal coefficients:
// sum(d^2) / 64 - (d(0,0) / 8)^2. Counts 64 multiplications and 63 additions.
FocusScore variance(const CoeffBlock& coeffs, OpCounter& counter);

// RF^2 + CF^2 of the 8x8 samples, both normalized by 64. Counts one
// squaring per difference term (2 x 56) and 223 additions.
FocusScore spatial_frequency_measure(const Block& block, OpCounter& counter);

// Number of AC coefficients with |d| > threshold. Counts 63 conditional
// increments. Throws InvalidArgumentError for a negative threshold.
FocusScore ac_max(const CoeffBlock& coeffs, double threshold, OpCounter& counter);

}  // namespace dctfuse
