#include "dctfuse/hwmodel.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <sstream>

#include "dctfuse/error.hpp"

namespace dctfuse::hw {
namespace {

constexpr int N = kBlockSize;
using Vector8 = std::array<Fixed35, N>;

// 8-tap constant-multiplier lanes fed from the cosine ROM. The forward unit
// reads ROM rows (one per output frequency), the inverse unit ROM columns.
class Dct1dUnit {
 public:
  explicit Dct1dUnit(bool inverse) {
    const auto& rom = fixed_dct_rom();
    for (int out = 0; out < N; ++out)
      for (int in = 0; in < N; ++in)
        taps_[static_cast<std::size_t>(out)][static_cast<std::size_t>(in)] =
            inverse ? rom.cosine[block_index(in, out)] : rom.cosine[block_index(out, in)];
  }

  Vector8 process(const Vector8& in, SaturationFlag& flag) const {
    Vector8 out{};
    for (std::size_t k = 0; k < N; ++k) out[k] = dot_rounded(in, taps_[k], flag);
    return out;
  }

 private:
  std::array<std::array<std::int64_t, N>, N> taps_{};
};

// Rows are written as they leave the first pass; columns are read out.
class TransposeMemory {
 public:
  void write_row(int r, const Vector8& v) {
    for (int c = 0; c < N; ++c) cells_[static_cast<std::size_t>(block_index(r, c))] = v[static_cast<std::size_t>(c)];
  }
  Vector8 read_column(int c) const {
    Vector8 v{};
    for (int r = 0; r < N; ++r) v[static_cast<std::size_t>(r)] = cells_[static_cast<std::size_t>(block_index(r, c))];
    return v;
  }

 private:
  std::array<Fixed35, kBlockArea> cells_{};
};

Fixed35 scale_word(Fixed35 w, std::int64_t constant, SaturationFlag& flag) {
  return saturate(round_shift(WideInt{w.raw()} * constant, kRomFractionBits), flag);
}

// Two 1D units around a transpose memory, as in the forward DCT core.
class DctCore {
 public:
  FixedCoeffBlock forward(const GrayImage& img, int bx, int by, SaturationFlag& flag) const {
    TransposeMemory tram;
    for (int r = 0; r < N; ++r) {
      // One 8-pixel memory word per clock; pixels enter as raw words
      // shifted into the datapath's input scale.
      Vector8 row{};
      for (int c = 0; c < N; ++c) {
        const std::int64_t pixel = img.clamped(bx * N + c, by * N + r);
        row[static_cast<std::size_t>(c)] =
            Fixed35::from_raw(pixel << (Fixed35::kFractionBits - kFixedInputShift));
      }
      tram.write_row(r, forward_unit_.process(row, flag));
    }
    const auto& rom = fixed_dct_rom();
    FixedCoeffBlock out{};
    for (int c = 0; c < N; ++c) {
      const Vector8 col = forward_unit_.process(tram.read_column(c), flag);
      for (int u = 0; u < N; ++u) {
        const int i = block_index(u, c);
        out[static_cast<std::size_t>(i)] = scale_word(col[static_cast<std::size_t>(u)], rom.scale[static_cast<std::size_t>(i)], flag);
      }
    }
    return out;
  }

  Block inverse(const FixedCoeffBlock& coeffs, SaturationFlag& flag) const {
    const auto& rom = fixed_dct_rom();
    TransposeMemory tram;
    for (int u = 0; u < N; ++u) {
      Vector8 row{};
      for (int v = 0; v < N; ++v) {
        const auto i = static_cast<std::size_t>(block_index(u, v));
        row[static_cast<std::size_t>(v)] = scale_word(coeffs[i], rom.scale[i], flag);
      }
      tram.write_row(u, inverse_unit_.process(row, flag));
    }
    Block out{};
    for (int c = 0; c < N; ++c) {
      const Vector8 col = inverse_unit_.process(tram.read_column(c), flag);
      for (int r = 0; r < N; ++r) {
        out[static_cast<std::size_t>(block_index(r, c))] = fixed_coefficient_value(col[static_cast<std::size_t>(r)]);
      }
    }
    return out;
  }

 private:
  Dct1dUnit forward_unit_{false};
  Dct1dUnit inverse_unit_{true};
};

// |AC| sums of both blocks in 41-bit accumulators and one comparison.
int decide(const FixedCoeffBlock& a, const FixedCoeffBlock& b, SaturationFlag& flag) {
  Accumulator41 sum_a;
  Accumulator41 sum_b;
  for (int i = 1; i < kBlockArea; ++i) {
    sum_a.add_abs(a[static_cast<std::size_t>(i)], flag);
    sum_b.add_abs(b[static_cast<std::size_t>(i)], flag);
  }
  return sum_a.raw() > sum_b.raw() ? 1 : -1;
}

// Streaming majority filter. Raw decisions arrive in raster order and are
// held in a ring of 2r + 1 block rows; a block resolves as soon as the
// last block of its clipped window has arrived.
class StreamingMajorityFilter {
 public:
  StreamingMajorityFilter(int blocks_x, int blocks_y, int radius)
      : bx_(blocks_x), by_(blocks_y), r_(radius),
        rows_(static_cast<std::size_t>(2 * radius + 1),
              std::vector<int>(static_cast<std::size_t>(blocks_x), 0)) {}

  // Pushes the raw decision of block `index`; returns the (index, label)
  // pairs that became resolvable, in raster order.
  std::vector<std::pair<int, int>> push(int index, int label) {
    const int x = index % bx_;
    const int y = index / bx_;
    row(y)[static_cast<std::size_t>(x)] = label;
    std::vector<std::pair<int, int>> out;
    while (next_ < bx_ * by_ && trigger(next_) <= index) {
      out.emplace_back(next_, resolve(next_));
      ++next_;
    }
    return out;
  }

  // Raster index of the raw decision that completes block n's window.
  int trigger(int n) const {
    const int x = std::min(n % bx_ + r_, bx_ - 1);
    const int y = std::min(n / bx_ + r_, by_ - 1);
    return y * bx_ + x;
  }

 private:
  std::vector<int>& row(int y) { return rows_[static_cast<std::size_t>(y % (2 * r_ + 1))]; }

  int resolve(int n) {
    const int cx = n % bx_;
    const int cy = n / bx_;
    int sum = 0;
    for (int y = std::max(0, cy - r_); y <= std::min(by_ - 1, cy + r_); ++y)
      for (int x = std::max(0, cx - r_); x <= std::min(bx_ - 1, cx + r_); ++x)
        sum += row(y)[static_cast<std::size_t>(x)];
    return sum > 0 ? 1 : -1;
  }

  int bx_, by_, r_;
  std::vector<std::vector<int>> rows_;
  int next_ = 0;
};

}  // namespace

void validate(const DatapathConfig& cfg) {
  if (cfg.pixels_per_clock != 8) throw InvalidArgumentError("the datapath reads 8 pixels per clock");
  if (cfg.latency_cycles < kMinLatencyCycles) {
    throw InvalidArgumentError("latency must be at least " + std::to_string(kMinLatencyCycles) +
                               " cycles");
  }
  if (cfg.fifo_depth < 1) throw InvalidArgumentError("FIFO depth must be >= 1");
  if (!(cfg.clock_hz > 0.0)) throw InvalidArgumentError("clock frequency must be positive");
}

StageOffsets stage_offsets(const DatapathConfig& cfg) {
  validate(cfg);
  StageOffsets s;
  s.emit = cfg.latency_cycles;
  s.select = cfg.latency_cycles - kEmitCyclesPerBlock;
  return s;
}

std::string_view action_name(Action action) {
  switch (action) {
    case Action::Enqueue:
      return "enqueue";
    case Action::Dct1:
      return "dct1";
    case Action::Transpose:
      return "transpose";
    case Action::Dct2:
      return "dct2";
    case Action::Decide:
      return "decide";
    case Action::Select:
      return "select";
    case Action::Emit:
      return "emit";
  }
  return "unknown";
}

std::string_view stage_name(Action action) {
  switch (action) {
    case Action::Enqueue:
      return "memory";
    case Action::Dct1:
      return "dct_row";
    case Action::Transpose:
      return "tram";
    case Action::Dct2:
      return "dct_col";
    case Action::Decide:
      return "decision";
    case Action::Select:
      return "data_select";
    case Action::Emit:
      return "output";
  }
  return "unknown";
}

std::string format_trace_line(const TraceEvent& e) {
  std::ostringstream out;
  out << "cycle=" << e.cycle << " stage=" << stage_name(e.action) << " block=(" << e.bx << ','
      << e.by << ") action=" << action_name(e.action);
  return out.str();
}

void write_trace(std::ostream& out, const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) out << format_trace_line(e) << '\n';
}

Schedule schedule(int blocks_x, int blocks_y, bool consistency_verification, int radius,
                  const DatapathConfig& cfg) {
  const StageOffsets off = stage_offsets(cfg);
  if (blocks_x < 1 || blocks_y < 1) throw InvalidArgumentError("empty block grid");
  if (consistency_verification && radius < 1) throw InvalidArgumentError("majority radius must be >= 1");

  const int n = blocks_x * blocks_y;
  Schedule s;
  s.blocks.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& t = s.blocks[static_cast<std::size_t>(i)];
    t.enqueue = static_cast<std::uint64_t>(i) * kFeedCyclesPerPair;
    t.decision_ready = t.enqueue + static_cast<std::uint64_t>(off.decision_ready);
  }

  const int line_buffer = consistency_verification ? radius * blocks_x + radius : 0;
  for (int i = 0; i < n; ++i) {
    auto& t = s.blocks[static_cast<std::size_t>(i)];
    std::uint64_t select = t.enqueue + static_cast<std::uint64_t>(off.select);
    if (consistency_verification) {
      const int x = std::min(i % blocks_x + radius, blocks_x - 1);
      const int y = std::min(i / blocks_x + radius, blocks_y - 1);
      const auto& last = s.blocks[static_cast<std::size_t>(y * blocks_x + x)];
      // One cycle for the window sum, one to register the refined label.
      select = std::max(select, last.decision_ready + 2);
    }
    if (i > 0) {
      select = std::max(select, s.blocks[static_cast<std::size_t>(i - 1)].select + kEmitCyclesPerBlock);
    }
    t.select = select;
    t.emit = select + static_cast<std::uint64_t>(off.emit - off.select);
  }

  // A pair occupies the coefficient store from the start of its column
  // pass until the data-select read.
  std::vector<std::pair<std::uint64_t, int>> events;
  events.reserve(static_cast<std::size_t>(2 * n));
  for (const auto& t : s.blocks) {
    events.emplace_back(t.enqueue + static_cast<std::uint64_t>(off.dct2), +1);
    events.emplace_back(t.select, -1);
  }
  std::sort(events.begin(), events.end());  // releases sort before writes
  int occupancy = 0;
  int peak = 0;
  for (const auto& [cycle, delta] : events) {
    occupancy += delta;
    peak = std::max(peak, occupancy);
  }
  const int capacity = cfg.fifo_depth + line_buffer;
  if (peak > capacity) {
    throw FifoOverflowError("coefficient FIFO overflow: " + std::to_string(peak) +
                            " block pairs in flight, capacity " + std::to_string(capacity));
  }

  auto& st = s.stats;
  st.blocks_processed = static_cast<std::uint64_t>(n);
  st.pixels_processed = static_cast<std::uint64_t>(n) * 2 * kBlockArea;
  st.total_cycles = s.blocks.back().emit + kEmitCyclesPerBlock;
  const std::uint64_t feed_cycles = st.pixels_processed / static_cast<std::uint64_t>(cfg.pixels_per_clock);
  st.stall_cycles = st.total_cycles - feed_cycles;
  st.clock_hz = cfg.clock_hz;
  st.achieved_pixels_per_second = static_cast<double>(st.pixels_processed) * cfg.clock_hz /
                                  static_cast<double>(st.total_cycles);
  st.first_emit_latency = s.blocks.front().emit - s.blocks.front().enqueue;
  st.max_fifo_occupancy = peak;
  st.coefficient_capacity = capacity;
  return s;
}

SimulationResult simulate_pair(const GrayImage& a, const GrayImage& b, const FusionOptions& opts,
                               const DatapathConfig& cfg, bool record_trace) {
  validate(opts);
  require_same_shape(a, b, "simulate_pair");
  if (opts.measure != MeasureId::AmpMax) {
    throw InvalidArgumentError("the datapath implements only the ampmax measure");
  }
  const int bxs = (a.width() + N - 1) / N;
  const int bys = (a.height() + N - 1) / N;
  const int n = bxs * bys;
  const bool cv = opts.consistency_verification;
  Schedule sched = schedule(bxs, bys, cv, opts.majority_radius, cfg);

  SimulationResult result;
  result.raw_map = DecisionMap(bxs, bys);
  result.map = DecisionMap(bxs, bys);
  result.coefficients.resize(static_cast<std::size_t>(n));

  const DctCore core;
  SaturationFlag flag;
  StreamingMajorityFilter filter(bxs, bys, std::max(opts.majority_radius, 1));
  // Coefficient pairs waiting for their (refined) decision.
  std::deque<std::pair<FixedCoeffBlock, FixedCoeffBlock>> fifo;
  int next_select = 0;
  auto select = [&](int index, int label) {
    if (index != next_select) throw Error("data select out of order");
    auto& [ca, cb] = fifo.front();
    result.coefficients[static_cast<std::size_t>(index)] = label > 0 ? ca : cb;
    result.map.set(index % bxs, index / bxs, label);
    fifo.pop_front();
    ++next_select;
  };

  for (int i = 0; i < n; ++i) {
    const int bx = i % bxs;
    const int by = i / bxs;
    fifo.emplace_back(core.forward(a, bx, by, flag), core.forward(b, bx, by, flag));
    const int label = decide(fifo.back().first, fifo.back().second, flag);
    result.raw_map.set(bx, by, label);
    if (cv) {
      for (const auto& [index, refined] : filter.push(i, label)) select(index, refined);
    } else {
      select(i, label);
    }
  }
  if (next_select != n) throw Error("datapath drained with unselected blocks");

  TiledImage out;
  out.blocks_x = bxs;
  out.blocks_y = bys;
  out.width = a.width();
  out.height = a.height();
  out.pad_right = bxs * N - a.width();
  out.pad_bottom = bys * N - a.height();
  out.blocks.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.blocks[static_cast<std::size_t>(i)] =
        core.inverse(result.coefficients[static_cast<std::size_t>(i)], flag);
  }
  result.fused = untile(out);
  result.saturation_events = flag.count();
  result.stats = sched.stats;

  if (record_trace) {
    const StageOffsets off = stage_offsets(cfg);
    result.trace.reserve(static_cast<std::size_t>(n) * 7);
    for (int i = 0; i < n; ++i) {
      const auto& t = sched.blocks[static_cast<std::size_t>(i)];
      const int bx = i % bxs;
      const int by = i / bxs;
      auto at = [&](int offset) { return t.enqueue + static_cast<std::uint64_t>(offset); };
      result.trace.push_back({t.enqueue, Action::Enqueue, bx, by});
      result.trace.push_back({at(off.dct1), Action::Dct1, bx, by});
      result.trace.push_back({at(off.transpose), Action::Transpose, bx, by});
      result.trace.push_back({at(off.dct2), Action::Dct2, bx, by});
      result.trace.push_back({at(off.decide), Action::Decide, bx, by});
      result.trace.push_back({t.select, Action::Select, bx, by});
      result.trace.push_back({t.emit, Action::Emit, bx, by});
    }
    std::stable_sort(result.trace.begin(), result.trace.end(),
                     [](const TraceEvent& x, const TraceEvent& y) { return x.cycle < y.cycle; });
  }
  return result;
}

ThroughputReport throughput_report(const DatapathConfig& cfg, int width, int height, double fps,
                                   int streams) {
  validate(cfg);
  if (width < 1 || height < 1) throw InvalidArgumentError("frame dimensions must be positive");
  if (!(fps > 0.0)) throw InvalidArgumentError("frame rate must be positive");
  if (streams < 1) throw InvalidArgumentError("stream count must be >= 1");
  ThroughputReport r;
  r.width = width;
  r.height = height;
  r.fps = fps;
  r.streams = streams;
  r.clock_hz = cfg.clock_hz;
  r.required_pixels_per_second = static_cast<double>(width) * height * fps * streams;
  r.capacity_pixels_per_second = cfg.clock_hz * cfg.pixels_per_clock;
  r.feasible = r.required_pixels_per_second <= r.capacity_pixels_per_second;
  r.margin = r.capacity_pixels_per_second / r.required_pixels_per_second;
  r.min_clock_hz = r.required_pixels_per_second / cfg.pixels_per_clock;
  return r;
}

}  // namespace dctfuse::hw
