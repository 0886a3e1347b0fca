#pragma once

#include <cstdint>
#include <vector>

namespace dctfuse {

// Per-block selection labels: +1 picks source A, -1 picks source B.
class DecisionMap {
 public:
  DecisionMap() = default;
  // All labels start at -1. Throws InvalidArgumentError for a non-positive
  // grid dimension.
  DecisionMap(int blocks_x, int blocks_y);

  int blocks_x() const { return blocks_x_; }
  int blocks_y() const { return blocks_y_; }
  int block_count() const { return blocks_x_ * blocks_y_; }

  int at(int bx, int by) const { return labels_[index(bx, by)]; }
  // Throws InvalidArgumentError unless label is +1 or -1.
  void set(int bx, int by, int label);

  // Number of cells labelled +1.
  int count_a() const;
  // Cells whose label differs from `other` (same grid required).
  int count_differences(const DecisionMap& other) const;
  DecisionMap negated() const;

  friend bool operator==(const DecisionMap&, const DecisionMap&) = default;

 private:
  int index(int bx, int by) const { return by * blocks_x_ + bx; }

  int blocks_x_ = 0;
  int blocks_y_ = 0;
  std::vector<std::int8_t> labels_;
};

}  // namespace dctfuse
