#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dctfuse/dct.hpp"
#include "dctfuse/decision_map.hpp"
#include "dctfuse/image.hpp"
#include "dctfuse/measures.hpp"
#include "dctfuse/op_counter.hpp"

namespace dctfuse {

enum class Arithmetic { Float, Fixed };

std::string_view arithmetic_name(Arithmetic a);
std::optional<Arithmetic> parse_arithmetic(std::string_view name);

struct FusionOptions {
  MeasureId measure = MeasureId::AmpMax;
  // Majority-filter the raw decision map before selecting blocks.
  bool consistency_verification = false;
  // Window is (2r + 1) x (2r + 1) blocks.
  int majority_radius = 1;
  Arithmetic arithmetic = Arithmetic::Float;
  // AC-count threshold; 0.5 counts coefficients that stay nonzero after
  // rounding to integers.
  double ac_threshold = 0.5;
  // Block-parallel workers for the transform and scoring stages. Output is
  // bit-identical for every worker count.
  int workers = 1;
};

// Throws InvalidArgumentError for a radius < 1, a negative threshold or a
// worker count < 1.
void validate(const FusionOptions& opts);

// Image split into 8x8 blocks in raster order. Partial edge blocks are
// padded by replicating the last row/column.
struct TiledImage {
  std::vector<Block> blocks;
  int blocks_x = 0;
  int blocks_y = 0;
  int pad_right = 0;
  int pad_bottom = 0;
  int width = 0;
  int height = 0;

  const Block& block(int bx, int by) const { return blocks[by * blocks_x + bx]; }
  int block_count() const { return blocks_x * blocks_y; }
};

TiledImage tile(const GrayImage& img);
// Rounds each sample (half away from zero), clamps to [0,255] and drops the
// padding.
GrayImage untile(const TiledImage& tiled);

struct FusionReport {
  MeasureId measure = MeasureId::AmpMax;
  Arithmetic arithmetic = Arithmetic::Float;
  bool consistency_verification = false;
  int sources = 0;
  int blocks_x = 0;
  int blocks_y = 0;
  // Focus measures plus the per-block comparisons.
  OpCounter decision_ops;
  // Majority-filter window sums and sign tests.
  OpCounter consistency_ops;
  // Blocks taken from each source after refinement.
  std::vector<int> blocks_per_source;
  // Blocks whose label the majority filter changed.
  int blocks_changed_by_filter = 0;
  int saturation_events = 0;
  int clamped_scores = 0;

  int block_count() const { return blocks_x * blocks_y; }
};

// Focus scores for every block of one image, raster order.
std::vector<FocusScore> score_blocks(const GrayImage& img, const FusionOptions& opts,
                                     OpCounter& counter);

// W(n) = +1 if C(A_n) > C(B_n), else -1. Adds the measure costs and one
// comparison per block pair to `report` when given.
DecisionMap build_decision_map(const GrayImage& a, const GrayImage& b, const FusionOptions& opts,
                               FusionReport* report = nullptr);

// R(n) = sum of labels in the window clipped to the map; +1 if R > 0, else
// -1. Out-of-map cells contribute 0.
DecisionMap majority_filter(const DecisionMap& map, int radius, OpCounter* ops = nullptr);

struct FusionResult {
  GrayImage fused;
  DecisionMap raw_map;
  // Map used for selection; equals raw_map without consistency verification.
  DecisionMap map;
  // Selected coefficient blocks, raster order.
  std::vector<CoeffBlock> coefficients;
  // Selected datapath words; filled only for Arithmetic::Fixed.
  std::vector<FixedCoeffBlock> fixed_coefficients;
  FusionReport report;
};

FusionResult fuse(const GrayImage& a, const GrayImage& b, const FusionOptions& opts = {});

struct MultiFusionResult {
  GrayImage fused;
  // Winning source index per block before and after refinement.
  std::vector<int> raw_sources;
  std::vector<int> sources;
  std::vector<CoeffBlock> coefficients;
  std::vector<FixedCoeffBlock> fixed_coefficients;
  FusionReport report;
};

// Per block the source with the largest score wins, ties to the lowest
// index. With consistency verification each block takes the source that
// wins most often in its clipped window; on a count tie the block keeps its
// own raw winner when that is among the tied sources, else the lowest index.
MultiFusionResult fuse_multi(std::span<const GrayImage> images, const FusionOptions& opts = {});

}  // namespace dctfuse
