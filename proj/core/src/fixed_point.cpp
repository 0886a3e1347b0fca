#include "dctfuse/fixed_point.hpp"

#include <cmath>

#include "dctfuse/error.hpp"

namespace dctfuse {

Fixed35 to_fixed(double x, SaturationFlag& flag) {
  if (std::isnan(x)) {
    flag.raise();
    return Fixed35{};
  }
  // Scaling by a power of two is exact, so std::round sees the true value.
  const double scaled = std::round(std::ldexp(x, Fixed35::kFractionBits));
  if (scaled > static_cast<double>(Fixed35::kMaxRaw)) {
    flag.raise();
    return Fixed35::max();
  }
  if (scaled < static_cast<double>(Fixed35::kMinRaw)) {
    flag.raise();
    return Fixed35::min();
  }
  return Fixed35::from_raw(static_cast<std::int64_t>(scaled));
}

double from_fixed(Fixed35 f) { return f.to_double(); }

WideInt round_shift(WideInt value, int shift) {
  if (shift <= 0) return value;
  const WideInt half = WideInt{1} << (shift - 1);
  if (value >= 0) return (value + half) >> shift;
  return -((-value + half) >> shift);
}

Fixed35 saturate(WideInt raw, SaturationFlag& flag) {
  if (raw > Fixed35::kMaxRaw) {
    flag.raise();
    return Fixed35::max();
  }
  if (raw < Fixed35::kMinRaw) {
    flag.raise();
    return Fixed35::min();
  }
  return Fixed35::from_raw(static_cast<std::int64_t>(raw));
}

Fixed35 add(Fixed35 a, Fixed35 b, SaturationFlag& flag) {
  return saturate(WideInt{a.raw()} + b.raw(), flag);
}

Fixed35 sub(Fixed35 a, Fixed35 b, SaturationFlag& flag) {
  return saturate(WideInt{a.raw()} - b.raw(), flag);
}

Fixed35 mul(Fixed35 a, Fixed35 b, SaturationFlag& flag) {
  const WideInt product = WideInt{a.raw()} * b.raw();
  return saturate(round_shift(product, Fixed35::kFractionBits), flag);
}

std::int64_t to_rom_constant(double c) {
  if (!(std::fabs(c) <= 1.0)) {
    throw InvalidArgumentError("ROM constants must lie in [-1, 1]");
  }
  return static_cast<std::int64_t>(std::round(std::ldexp(c, kRomFractionBits)));
}

Fixed35 dot_rounded(std::span<const Fixed35> data, std::span<const std::int64_t> rom,
                    SaturationFlag& flag) {
  if (data.size() != rom.size()) {
    throw InvalidArgumentError("dot_rounded: operand lengths differ");
  }
  WideInt acc = 0;
  for (std::size_t k = 0; k < data.size(); ++k) acc += WideInt{data[k].raw()} * rom[k];
  return saturate(round_shift(acc, kRomFractionBits), flag);
}

void Accumulator41::add(Fixed35 x, SaturationFlag& flag) {
  std::int64_t next = raw_ + x.raw();
  if (next > kMaxRaw) {
    flag.raise();
    next = kMaxRaw;
  } else if (next < kMinRaw) {
    flag.raise();
    next = kMinRaw;
  }
  raw_ = next;
}

void Accumulator41::add_abs(Fixed35 x, SaturationFlag& flag) {
  add(x.raw() < 0 ? Fixed35::from_raw(-x.raw()) : x, flag);
}

}  // namespace dctfuse
