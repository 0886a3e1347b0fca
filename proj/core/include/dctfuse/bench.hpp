#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dctfuse/fusion.hpp"
#include "dctfuse/image.hpp"
#include "dctfuse/metrics.hpp"

namespace dctfuse {

enum class SplitMode { Vertical, Horizontal, Quadrant };

std::string_view split_name(SplitMode mode);
std::optional<SplitMode> parse_split(std::string_view name);

// Complementary-blur benchmark protocol.
struct BenchSpec {
  std::vector<std::filesystem::path> references;
  // Odd box-filter size, >= 3.
  int blur_kernel = 3;
  int pairs = 50;
  SplitMode split = SplitMode::Vertical;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Throws InvalidArgumentError for an even or too small kernel, a pair count
// < 1 or a worker count < 1.
void validate(const BenchSpec& spec);

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Region {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

// k x k mean filter with edge-replicated borders; each output is the
// window sum divided by k^2, rounded half away from zero.
GrayImage box_blur(const GrayImage& img, int kernel);

struct BlurredPair {
  GrayImage a;  // region blurred
  GrayImage b;  // complement blurred
  Region region;
};

// Splits the reference at a position drawn from (spec.seed, pair_index):
// vertical keeps the region left of a column in [w/4, 3w/4], horizontal the
// part above a row, quadrant one of the four quadrants around a random
// center. Throws InvalidArgumentError for references smaller than 16x16.
BlurredPair generate_pair(const GrayImage& reference, const BenchSpec& spec, int pair_index = 0);

// A named fusion configuration such as "ampmax" or "sf+cv".
struct FusionMethod {
  std::string name;
  FusionOptions options;
};
// Parses "<measure>[+cv]"; throws InvalidArgumentError on unknown names.
FusionMethod parse_method(std::string_view name, Arithmetic arithmetic = Arithmetic::Float);

struct NamedImage {
  std::string name;
  GrayImage image;
};

// Every *.pgm file in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_pgm_files(const std::filesystem::path& dir);
std::vector<NamedImage> load_references(const std::vector<std::filesystem::path>& paths);

struct BenchRow {
  int pair = 0;
  std::string reference;
  std::string method;
  metrics::MetricReport metrics;
};

struct BenchTable {
  std::vector<BenchRow> rows;  // pair-major, then method order
  std::vector<BenchRow> means; // one per method, pair = -1
};

// Pair i uses reference i % references.size(). Means average the CSV
// (capped) PSNR values. Output order does not depend on spec.workers.
BenchTable run_bench(const BenchSpec& spec, const std::vector<NamedImage>& references,
                     const std::vector<FusionMethod>& methods);

// Columns: pair,reference,method,ssim,psnr,mse,mi,uiqi,qabf,sf,fmi. Mean
// rows use "mean" in the pair column.
std::string to_csv(const BenchTable& table);

}  // namespace dctfuse
