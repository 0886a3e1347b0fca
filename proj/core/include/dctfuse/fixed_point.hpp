#pragma once

#include <cstdint>
#include <span>

namespace dctfuse {

__extension__ using WideInt = __int128;

// Signed Q(1,10,24) fixed-point word: 1 sign bit, 10 integer bits and
// 24 fractional bits, stored in the low 35 bits of an int64.
// Representable range is [-1024, 1024 - 2^-24].
class Fixed35 {
 public:
  static constexpr int kFractionBits = 24;
  static constexpr int kIntegerBits = 10;
  static constexpr int kWordBits = 1 + kIntegerBits + kFractionBits;
  static constexpr std::int64_t kOneRaw = std::int64_t{1} << kFractionBits;
  static constexpr std::int64_t kMaxRaw = (std::int64_t{1} << (kWordBits - 1)) - 1;
  static constexpr std::int64_t kMinRaw = -(std::int64_t{1} << (kWordBits - 1));

  constexpr Fixed35() = default;

  // Raw values outside [kMinRaw, kMaxRaw] are clamped.
  static constexpr Fixed35 from_raw(std::int64_t raw) {
    Fixed35 f;
    f.raw_ = raw > kMaxRaw ? kMaxRaw : (raw < kMinRaw ? kMinRaw : raw);
    return f;
  }
  static constexpr Fixed35 max() { return from_raw(kMaxRaw); }
  static constexpr Fixed35 min() { return from_raw(kMinRaw); }

  constexpr std::int64_t raw() const { return raw_; }
  // Exact: every 35-bit raw value is representable in a double.
  constexpr double to_double() const {
    return static_cast<double>(raw_) / static_cast<double>(kOneRaw);
  }

  friend constexpr bool operator==(Fixed35, Fixed35) = default;
  friend constexpr auto operator<=>(Fixed35, Fixed35) = default;

 private:
  std::int64_t raw_ = 0;
};

// Sticky record of saturation events across a sequence of operations.
class SaturationFlag {
 public:
  void raise() { ++count_; }
  bool raised() const { return count_ != 0; }
  int count() const { return count_; }
  void merge(const SaturationFlag& other) { count_ += other.count_; }

 private:
  int count_ = 0;
};

// Nearest representable value, ties away from zero. Inputs outside the
// representable range clamp to the range limit and raise `flag`; NaN maps
// to zero and also raises it.
Fixed35 to_fixed(double x, SaturationFlag& flag);
double from_fixed(Fixed35 f);

// Rounds `value`, which carries `shift` fractional bits, to an integer:
// round to nearest, ties away from zero.
WideInt round_shift(WideInt value, int shift);

// Clamps a raw value into the word, raising `flag` when clamping happens.
Fixed35 saturate(WideInt raw, SaturationFlag& flag);

Fixed35 add(Fixed35 a, Fixed35 b, SaturationFlag& flag);
Fixed35 sub(Fixed35 a, Fixed35 b, SaturationFlag& flag);
// Single rounding of the exact product.
Fixed35 mul(Fixed35 a, Fixed35 b, SaturationFlag& flag);

// Constant-coefficient ROM entry with kRomFractionBits fractional bits.
inline constexpr int kRomFractionBits = 40;
std::int64_t to_rom_constant(double c);

// sum(data[k] * rom[k]) accumulated exactly, then rounded once into a
// Fixed35. Models a multiply-accumulate lane fed from a constant ROM.
// Spans must have the same length.
Fixed35 dot_rounded(std::span<const Fixed35> data, std::span<const std::int64_t> rom,
                    SaturationFlag& flag);

// Accumulator with 6 guard bits over the Fixed35 word (41 bits), enough for
// the 63 AC magnitudes of a block.
class Accumulator41 {
 public:
  static constexpr int kBits = Fixed35::kWordBits + 6;
  static constexpr std::int64_t kMaxRaw = (std::int64_t{1} << (kBits - 1)) - 1;
  static constexpr std::int64_t kMinRaw = -(std::int64_t{1} << (kBits - 1));

  void add(Fixed35 x, SaturationFlag& flag);
  void add_abs(Fixed35 x, SaturationFlag& flag);
  std::int64_t raw() const { return raw_; }

 private:
  std::int64_t raw_ = 0;
};

}  // namespace dctfuse
