#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dctfuse/dct.hpp"
#include "dctfuse/decision_map.hpp"
#include "dctfuse/fusion.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse::hw {

// Stage-level model of the fusion datapath: banked pixel memory feeding
// 8 pixels per clock, a row 1D-DCT, a transpose SRAM, a column 1D-DCT with
// output normalization, the |AC| decision block, an optional streaming
// majority filter, the coefficient FIFO and the data-select mux.
struct DatapathConfig {
  double clock_hz = 200e6;
  int pixels_per_clock = 8;
  // First enqueue of a block pair to first emitted fused coefficient.
  int latency_cycles = 70;
  // Coefficient block pairs the FIFO can hold.
  int fifo_depth = 4;
};

// Throws InvalidArgumentError unless pixels_per_clock == 8,
// latency_cycles >= kMinLatencyCycles, fifo_depth >= 1 and clock_hz > 0.
void validate(const DatapathConfig& cfg);

// Cycle offsets of each stage relative to a block pair's first enqueue.
// The A and B rows share the 8-pixel feed, so a pair takes 16 feed cycles.
// Row pass: starts 1 cycle after the first row, 3-cycle MAC pipeline.
// Column pass: 16 column reads then 3 pipeline cycles. Decision: adder
// tree over the |AC| words plus the comparator. The data-select read and
// the output register take the remaining cycles up to latency_cycles.
struct StageOffsets {
  int dct1 = 1;
  int transpose = 20;
  int dct2 = 21;
  int decide = 40;
  int decision_ready = 47;
  int select = 62;
  int emit = 70;
};
inline constexpr int kFeedCyclesPerPair = 16;
inline constexpr int kEmitCyclesPerBlock = 8;
inline constexpr int kMinLatencyCycles = 56;
StageOffsets stage_offsets(const DatapathConfig& cfg);

enum class Action { Enqueue, Dct1, Transpose, Dct2, Decide, Select, Emit };
std::string_view action_name(Action action);
std::string_view stage_name(Action action);

struct TraceEvent {
  std::uint64_t cycle = 0;
  Action action = Action::Enqueue;
  int bx = 0;
  int by = 0;
};

// "cycle=<n> stage=<name> block=(bx,by) action=<action>"
std::string format_trace_line(const TraceEvent& event);
void write_trace(std::ostream& out, const std::vector<TraceEvent>& trace);

struct CycleStats {
  std::uint64_t total_cycles = 0;
  std::uint64_t blocks_processed = 0;
  // Cycles in which the pixel feed is idle (pipeline fill and drain).
  std::uint64_t stall_cycles = 0;
  // Pixels of both sources, padding included.
  std::uint64_t pixels_processed = 0;
  double clock_hz = 0.0;
  double achieved_pixels_per_second = 0.0;
  std::uint64_t first_emit_latency = 0;
  int max_fifo_occupancy = 0;
  // fifo_depth, plus the block-row line buffer when filtering.
  int coefficient_capacity = 0;

  double stall_fraction() const {
    return total_cycles ? static_cast<double>(stall_cycles) / static_cast<double>(total_cycles) : 0.0;
  }
};

struct BlockTiming {
  std::uint64_t enqueue = 0;
  std::uint64_t decision_ready = 0;
  std::uint64_t select = 0;
  std::uint64_t emit = 0;
};

struct Schedule {
  std::vector<BlockTiming> blocks;  // raster order
  CycleStats stats;
};

// Timing only. With consistency verification a block is selected once the
// raw decision of the last block of its clipped window is available, and
// the coefficient store grows by radius * blocks_x + radius blocks.
// Throws FifoOverflowError when occupancy exceeds the coefficient store.
Schedule schedule(int blocks_x, int blocks_y, bool consistency_verification, int radius,
                  const DatapathConfig& cfg);

struct SimulationResult {
  GrayImage fused;
  // Fused datapath words, raster order.
  std::vector<FixedCoeffBlock> coefficients;
  DecisionMap raw_map;
  DecisionMap map;
  CycleStats stats;
  std::vector<TraceEvent> trace;  // empty unless requested
  int saturation_events = 0;
};

// Requires opts.measure == AmpMax (the only measure in hardware); the
// datapath is always fixed point. Honors consistency_verification and
// majority_radius.
SimulationResult simulate_pair(const GrayImage& a, const GrayImage& b, const FusionOptions& opts,
                               const DatapathConfig& cfg = {}, bool record_trace = false);

struct ThroughputReport {
  int width = 0;
  int height = 0;
  double fps = 0.0;
  int streams = 0;
  double clock_hz = 0.0;
  double required_pixels_per_second = 0.0;
  double capacity_pixels_per_second = 0.0;
  bool feasible = false;
  // capacity / required
  double margin = 0.0;
  // Clock at which capacity equals the requirement.
  double min_clock_hz = 0.0;
};

// Throws InvalidArgumentError for non-positive dimensions, fps or streams.
ThroughputReport throughput_report(const DatapathConfig& cfg, int width, int height, double fps,
                                   int streams = 2);

}  // namespace dctfuse::hw
