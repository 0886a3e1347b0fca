#include "dctfuse/fusion.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "dctfuse/error.hpp"

namespace dctfuse {
namespace {

// Splits [0, count) into `workers` contiguous ranges and runs
// fn(begin, end, worker) on each; the first range runs on the caller.
template <typename Fn>
void for_each_range(int count, int workers, Fn&& fn) {
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    fn(0, count, 0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers - 1));
  const int chunk = (count + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int begin = std::min(count, w * chunk);
    const int end = std::min(count, begin + chunk);
    threads.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  fn(0, std::min(count, chunk), 0);
  for (auto& t : threads) t.join();
}

struct SourceAnalysis {
  TiledImage tiled;
  std::vector<CoeffBlock> coeffs;
  std::vector<FixedCoeffBlock> fixed;
  std::vector<FocusScore> scores;
};

FocusScore score_block(const Block& block, const CoeffBlock& coeffs, const FixedCoeffBlock* fixed,
                       const FusionOptions& opts, OpCounter& counter) {
  switch (opts.measure) {
    case MeasureId::AmpMax:
      return fixed ? amp_max(*fixed, counter) : amp_max(coeffs, counter);
    case MeasureId::Variance:
      return variance(coeffs, counter);
    case MeasureId::SpatialFrequency:
      return spatial_frequency_measure(block, counter);
    case MeasureId::AcMax:
      return ac_max(coeffs, opts.ac_threshold, counter);
  }
  throw InvalidArgumentError("unknown focus measure");
}

SourceAnalysis analyze(const GrayImage& img, const FusionOptions& opts, FusionReport& report) {
  SourceAnalysis s;
  s.tiled = tile(img);
  const int n = s.tiled.block_count();
  const bool fixed = opts.arithmetic == Arithmetic::Fixed;
  s.coeffs.resize(static_cast<std::size_t>(n));
  s.scores.resize(static_cast<std::size_t>(n));
  if (fixed) s.fixed.resize(static_cast<std::size_t>(n));

  const int workers = std::clamp(opts.workers, 1, std::max(n, 1));
  std::vector<OpCounter> counters(static_cast<std::size_t>(workers));
  std::vector<SaturationFlag> flags(static_cast<std::size_t>(workers));
  for_each_range(n, workers, [&](int begin, int end, int w) {
    auto& counter = counters[static_cast<std::size_t>(w)];
    auto& flag = flags[static_cast<std::size_t>(w)];
    for (int i = begin; i < end; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const Block& block = s.tiled.blocks[idx];
      if (fixed) {
        s.fixed[idx] = fdct2_fixed(block, flag);
        s.coeffs[idx] = to_coeff_block(s.fixed[idx]);
      } else {
        s.coeffs[idx] = fdct2(block);
      }
      s.scores[idx] =
          score_block(block, s.coeffs[idx], fixed ? &s.fixed[idx] : nullptr, opts, counter);
    }
  });
  for (std::size_t w = 0; w < counters.size(); ++w) {
    report.decision_ops += counters[w];
    report.saturation_events += flags[w].count();
  }
  for (const auto& sc : s.scores) report.clamped_scores += sc.clamped ? 1 : 0;
  return s;
}

void require_all_same_shape(std::span<const GrayImage> images) {
  for (std::size_t i = 1; i < images.size(); ++i) {
    require_same_shape(images[0], images[i], "fusion");
  }
}

// Inverse-transforms the selected blocks and assembles the output raster.
GrayImage reconstruct(const std::vector<CoeffBlock>& coeffs,
                      const std::vector<FixedCoeffBlock>& fixed, const TiledImage& layout,
                      const FusionOptions& opts, FusionReport& report) {
  TiledImage out = layout;
  const int n = layout.block_count();
  const int workers = std::clamp(opts.workers, 1, std::max(n, 1));
  std::vector<SaturationFlag> flags(static_cast<std::size_t>(workers));
  for_each_range(n, workers, [&](int begin, int end, int w) {
    for (int i = begin; i < end; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      out.blocks[idx] = opts.arithmetic == Arithmetic::Fixed
                            ? idct2_fixed(fixed[idx], flags[static_cast<std::size_t>(w)])
                            : idct2(coeffs[idx]);
    }
  });
  for (const auto& f : flags) report.saturation_events += f.count();
  return untile(out);
}

FusionReport make_report(const FusionOptions& opts, int sources, const TiledImage& layout) {
  FusionReport r;
  r.measure = opts.measure;
  r.arithmetic = opts.arithmetic;
  r.consistency_verification = opts.consistency_verification;
  r.sources = sources;
  r.blocks_x = layout.blocks_x;
  r.blocks_y = layout.blocks_y;
  r.blocks_per_source.assign(static_cast<std::size_t>(sources), 0);
  return r;
}

DecisionMap compare_scores(const SourceAnalysis& a, const SourceAnalysis& b, OpCounter& ops) {
  DecisionMap map(a.tiled.blocks_x, a.tiled.blocks_y);
  for (int by = 0; by < map.blocks_y(); ++by) {
    for (int bx = 0; bx < map.blocks_x(); ++bx) {
      const auto idx = static_cast<std::size_t>(by * map.blocks_x() + bx);
      map.set(bx, by, a.scores[idx].value > b.scores[idx].value ? 1 : -1);
    }
  }
  ops.comparisons += static_cast<std::uint64_t>(map.block_count());
  return map;
}

}  // namespace

std::string_view arithmetic_name(Arithmetic a) { return a == Arithmetic::Fixed ? "fixed" : "float"; }

std::optional<Arithmetic> parse_arithmetic(std::string_view name) {
  if (name == "float") return Arithmetic::Float;
  if (name == "fixed") return Arithmetic::Fixed;
  return std::nullopt;
}

void validate(const FusionOptions& opts) {
  if (opts.majority_radius < 1) throw InvalidArgumentError("majority radius must be >= 1");
  if (!(opts.ac_threshold >= 0.0)) throw InvalidArgumentError("AC threshold must be >= 0");
  if (opts.workers < 1) throw InvalidArgumentError("worker count must be >= 1");
}

TiledImage tile(const GrayImage& img) {
  if (img.empty()) throw InvalidArgumentError("cannot tile an empty image");
  TiledImage t;
  t.width = img.width();
  t.height = img.height();
  t.blocks_x = (img.width() + kBlockSize - 1) / kBlockSize;
  t.blocks_y = (img.height() + kBlockSize - 1) / kBlockSize;
  t.pad_right = t.blocks_x * kBlockSize - img.width();
  t.pad_bottom = t.blocks_y * kBlockSize - img.height();
  t.blocks.resize(static_cast<std::size_t>(t.block_count()));
  for (int by = 0; by < t.blocks_y; ++by) {
    for (int bx = 0; bx < t.blocks_x; ++bx) {
      Block& b = t.blocks[static_cast<std::size_t>(by * t.blocks_x + bx)];
      for (int r = 0; r < kBlockSize; ++r)
        for (int c = 0; c < kBlockSize; ++c)
          b[block_index(r, c)] = img.clamped(bx * kBlockSize + c, by * kBlockSize + r);
    }
  }
  return t;
}

GrayImage untile(const TiledImage& tiled) {
  GrayImage img(tiled.width, tiled.height);
  for (int y = 0; y < tiled.height; ++y) {
    for (int x = 0; x < tiled.width; ++x) {
      const Block& b = tiled.block(x / kBlockSize, y / kBlockSize);
      img.at(x, y) = to_pixel(b[block_index(y % kBlockSize, x % kBlockSize)]);
    }
  }
  return img;
}

std::vector<FocusScore> score_blocks(const GrayImage& img, const FusionOptions& opts,
                                     OpCounter& counter) {
  validate(opts);
  FusionReport scratch;
  auto s = analyze(img, opts, scratch);
  counter += scratch.decision_ops;
  return std::move(s.scores);
}

DecisionMap build_decision_map(const GrayImage& a, const GrayImage& b, const FusionOptions& opts,
                               FusionReport* report) {
  validate(opts);
  require_same_shape(a, b, "build_decision_map");
  FusionReport local;
  FusionReport& r = report ? *report : local;
  const auto sa = analyze(a, opts, r);
  const auto sb = analyze(b, opts, r);
  return compare_scores(sa, sb, r.decision_ops);
}

DecisionMap majority_filter(const DecisionMap& map, int radius, OpCounter* ops) {
  if (radius < 1) throw InvalidArgumentError("majority radius must be >= 1");
  DecisionMap out(map.blocks_x(), map.blocks_y());
  OpCounter local;
  for (int by = 0; by < map.blocks_y(); ++by) {
    for (int bx = 0; bx < map.blocks_x(); ++bx) {
      int sum = 0;
      int cells = 0;
      for (int y = std::max(0, by - radius); y <= std::min(map.blocks_y() - 1, by + radius); ++y) {
        for (int x = std::max(0, bx - radius); x <= std::min(map.blocks_x() - 1, bx + radius);
             ++x) {
          sum += map.at(x, y);
          ++cells;
        }
      }
      local.additions += static_cast<std::uint64_t>(cells - 1);
      local.comparisons += 1;
      out.set(bx, by, sum > 0 ? 1 : -1);
    }
  }
  if (ops) *ops += local;
  return out;
}

FusionResult fuse(const GrayImage& a, const GrayImage& b, const FusionOptions& opts) {
  validate(opts);
  require_same_shape(a, b, "fuse");
  const TiledImage layout = tile(a);
  FusionReport report = make_report(opts, 2, layout);
  const auto sa = analyze(a, opts, report);
  const auto sb = analyze(b, opts, report);

  FusionResult result;
  result.raw_map = compare_scores(sa, sb, report.decision_ops);
  result.map = opts.consistency_verification
                   ? majority_filter(result.raw_map, opts.majority_radius, &report.consistency_ops)
                   : result.raw_map;
  report.blocks_changed_by_filter = result.raw_map.count_differences(result.map);

  const bool fixed = opts.arithmetic == Arithmetic::Fixed;
  const int n = layout.block_count();
  result.coefficients.resize(static_cast<std::size_t>(n));
  if (fixed) result.fixed_coefficients.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const bool from_a = result.map.at(i % layout.blocks_x, i / layout.blocks_x) > 0;
    const SourceAnalysis& src = from_a ? sa : sb;
    result.coefficients[idx] = src.coeffs[idx];
    if (fixed) result.fixed_coefficients[idx] = src.fixed[idx];
  }
  report.blocks_per_source[0] = result.map.count_a();
  report.blocks_per_source[1] = n - report.blocks_per_source[0];

  result.fused =
      reconstruct(result.coefficients, result.fixed_coefficients, layout, opts, report);
  result.report = std::move(report);
  return result;
}

MultiFusionResult fuse_multi(std::span<const GrayImage> images, const FusionOptions& opts) {
  validate(opts);
  if (images.size() < 2) throw InvalidArgumentError("fuse_multi needs at least two images");
  require_all_same_shape(images);

  const TiledImage layout = tile(images[0]);
  const int k = static_cast<int>(images.size());
  FusionReport report = make_report(opts, k, layout);
  std::vector<SourceAnalysis> sources;
  sources.reserve(images.size());
  for (const auto& img : images) sources.push_back(analyze(img, opts, report));

  const int bxs = layout.blocks_x;
  const int bys = layout.blocks_y;
  const int n = layout.block_count();
  MultiFusionResult result;
  result.raw_sources.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    int best = 0;
    for (int s = 1; s < k; ++s) {
      if (sources[static_cast<std::size_t>(s)].scores[idx].value >
          sources[static_cast<std::size_t>(best)].scores[idx].value) {
        best = s;
      }
    }
    report.decision_ops.comparisons += static_cast<std::uint64_t>(k - 1);
    result.raw_sources[idx] = best;
  }

  result.sources = result.raw_sources;
  if (opts.consistency_verification) {
    const int r = opts.majority_radius;
    std::vector<int> votes(static_cast<std::size_t>(k));
    for (int by = 0; by < bys; ++by) {
      for (int bx = 0; bx < bxs; ++bx) {
        std::fill(votes.begin(), votes.end(), 0);
        int cells = 0;
        for (int y = std::max(0, by - r); y <= std::min(bys - 1, by + r); ++y) {
          for (int x = std::max(0, bx - r); x <= std::min(bxs - 1, bx + r); ++x) {
            ++votes[static_cast<std::size_t>(result.raw_sources[static_cast<std::size_t>(y * bxs + x)])];
            ++cells;
          }
        }
        report.consistency_ops.additions += static_cast<std::uint64_t>(cells - 1);
        report.consistency_ops.comparisons += static_cast<std::uint64_t>(k - 1);
        const auto idx = static_cast<std::size_t>(by * bxs + bx);
        const int own = result.raw_sources[idx];
        const int top = *std::max_element(votes.begin(), votes.end());
        int choice = own;
        if (votes[static_cast<std::size_t>(own)] != top) {
          choice = static_cast<int>(std::find(votes.begin(), votes.end(), top) - votes.begin());
        }
        result.sources[idx] = choice;
      }
    }
  }

  const bool fixed = opts.arithmetic == Arithmetic::Fixed;
  result.coefficients.resize(static_cast<std::size_t>(n));
  if (fixed) result.fixed_coefficients.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int s = result.sources[idx];
    const auto& src = sources[static_cast<std::size_t>(s)];
    result.coefficients[idx] = src.coeffs[idx];
    if (fixed) result.fixed_coefficients[idx] = src.fixed[idx];
    ++report.blocks_per_source[static_cast<std::size_t>(s)];
    if (s != result.raw_sources[idx]) ++report.blocks_changed_by_filter;
  }
  result.fused =
      reconstruct(result.coefficients, result.fixed_coefficients, layout, opts, report);
  result.report = std::move(report);
  return result;
}

}  // namespace dctfuse
