#include "dctfuse/decision_map.hpp"

#include <algorithm>

#include "dctfuse/error.hpp"

namespace dctfuse {

DecisionMap::DecisionMap(int blocks_x, int blocks_y) : blocks_x_(blocks_x), blocks_y_(blocks_y) {
  if (blocks_x < 1 || blocks_y < 1) {
    throw InvalidArgumentError("decision map needs at least one block in each direction");
  }
  labels_.assign(static_cast<std::size_t>(blocks_x) * static_cast<std::size_t>(blocks_y), -1);
}

void DecisionMap::set(int bx, int by, int label) {
  if (label != 1 && label != -1) {
    throw InvalidArgumentError("decision labels must be +1 or -1");
  }
  labels_[index(bx, by)] = static_cast<std::int8_t>(label);
}

int DecisionMap::count_a() const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), std::int8_t{1}));
}

int DecisionMap::count_differences(const DecisionMap& other) const {
  if (blocks_x_ != other.blocks_x_ || blocks_y_ != other.blocks_y_) {
    throw DimensionMismatchError("decision maps have different grids");
  }
  int n = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) n += labels_[i] != other.labels_[i];
  return n;
}

DecisionMap DecisionMap::negated() const {
  DecisionMap out = *this;
  for (auto& l : out.labels_) l = static_cast<std::int8_t>(-l);
  return out;
}

}  // namespace dctfuse
