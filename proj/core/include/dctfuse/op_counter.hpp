#pragma once

#include <cstdint>

namespace dctfuse {

// Arithmetic operation tally for the focus-measure and decision stages.
// Not thread-safe: use one counter per worker and merge with +=.
struct OpCounter {
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t conditional_increments = 0;

  OpCounter& operator+=(const OpCounter& other) {
    additions += other.additions;
    multiplications += other.multiplications;
    comparisons += other.comparisons;
    conditional_increments += other.conditional_increments;
    return *this;
  }

  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

}  // namespace dctfuse
