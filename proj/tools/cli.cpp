#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dctfuse/bench.hpp"
#include "dctfuse/error.hpp"
#include "dctfuse/metrics.hpp"
#include "dctfuse/pgm.hpp"

namespace dctfuse::cli {
namespace {

using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ImageIoError("cannot write " + path);
  f << text;
  if (!f) throw ImageIoError("write failed for " + path);
}

template <typename Enum, typename Parser>
Enum parse_or_throw(const std::string& text, Parser parse, const char* what) {
  const auto v = parse(text);
  if (!v) throw InvalidArgumentError(std::string("unknown ") + what + " '" + text + "'");
  return *v;
}

struct FuseArgs {
  std::string a, b, output, measure = "ampmax", arithmetic = "float", map, counts, coeffs;
  bool cv = false;
  int radius = 1;
  double ac_threshold = 0.5;
  int workers = 1;
};

struct EvalArgs {
  std::string fused, ref, a, b, output;
};

struct BenchArgs {
  std::string refs, output, split = "vertical", arithmetic = "float";
  std::vector<std::string> methods{"ampmax", "ampmax+cv", "variance", "variance+cv", "sf", "sf+cv",
                                   "acmax", "acmax+cv"};
  int pairs = 50;
  int kernel = 3;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct HwsimArgs {
  std::string a, b, output, trace, stats, coeffs, map;
  double clock = 200e6;
  bool cv = false;
  int radius = 1;
  int fifo_depth = 4;
  int latency = 70;
};

struct ThroughputArgs {
  int width = 3840;
  int height = 2160;
  double fps = 60;
  int streams = 2;
  double clock = 200e6;
  std::string json;
};

struct GenpairArgs {
  std::string ref, a, b, split = "vertical";
  int kernel = 3;
  std::uint64_t seed = 0;
  int index = 0;
};

int cmd_fuse(const FuseArgs& args, std::ostream& out) {
  FusionOptions opts;
  opts.measure = parse_or_throw<MeasureId>(args.measure, parse_measure, "measure");
  opts.arithmetic = parse_or_throw<Arithmetic>(args.arithmetic, parse_arithmetic, "arithmetic");
  opts.consistency_verification = args.cv;
  opts.majority_radius = args.radius;
  opts.ac_threshold = args.ac_threshold;
  opts.workers = args.workers;

  const auto result = fuse(read_pgm(args.a), read_pgm(args.b), opts);
  write_pgm(args.output, result.fused);
  if (!args.map.empty()) write_pgm(args.map, decision_map_image(result.map));
  if (!args.counts.empty()) write_text(args.counts, counts_json(result.report));
  if (!args.coeffs.empty()) {
    const auto& r = result.report;
    write_text(args.coeffs, opts.arithmetic == Arithmetic::Fixed
                                ? coefficient_stream(result.fixed_coefficients, r.blocks_x, r.blocks_y)
                                : coefficient_stream(result.coefficients, r.blocks_x, r.blocks_y));
  }
  out << "fused " << result.report.block_count() << " blocks: " << result.report.blocks_per_source[0]
      << " from A, " << result.report.blocks_per_source[1] << " from B\n";
  if (result.report.saturation_events > 0) {
    out << "warning: " << result.report.saturation_events << " fixed-point saturation events\n";
  }
  return 0;
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const GrayImage fused = read_pgm(args.fused);
  std::optional<GrayImage> ref;
  if (!args.ref.empty()) ref = read_pgm(args.ref);
  const GrayImage a = read_pgm(args.a);
  const GrayImage b = read_pgm(args.b);
  const auto report = metrics::evaluate(fused, ref ? &*ref : nullptr, &a, &b);
  const std::string csv = metrics::csv_header() + "\n" + metrics::csv_fields(report) + "\n";
  if (args.output.empty()) {
    out << csv;
  } else {
    write_text(args.output, csv);
  }
  return 0;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  BenchSpec spec;
  spec.references = list_pgm_files(args.refs);
  if (spec.references.empty()) throw ImageIoError("no .pgm files in " + args.refs);
  spec.pairs = args.pairs;
  spec.blur_kernel = args.kernel;
  spec.split = parse_or_throw<SplitMode>(args.split, parse_split, "split mode");
  spec.seed = args.seed;
  spec.workers = args.workers;
  const auto arithmetic = parse_or_throw<Arithmetic>(args.arithmetic, parse_arithmetic, "arithmetic");
  std::vector<FusionMethod> methods;
  for (const auto& m : args.methods) methods.push_back(parse_method(m, arithmetic));

  const auto table = run_bench(spec, load_references(spec.references), methods);
  const std::string csv = to_csv(table);
  if (args.output.empty()) {
    out << csv;
  } else {
    write_text(args.output, csv);
    for (const auto& m : table.means) {
      char line[160];
      std::snprintf(line, sizeof line, "%-12s ssim=%.4f psnr=%.4f mse=%.4f mi=%.4f uiqi=%.4f\n",
                    m.method.c_str(), *m.metrics.ssim, *m.metrics.psnr_db, *m.metrics.mse,
                    *m.metrics.mi_bits, *m.metrics.uiqi);
      out << line;
    }
  }
  return 0;
}

int cmd_hwsim(const HwsimArgs& args, std::ostream& out) {
  hw::DatapathConfig cfg;
  cfg.clock_hz = args.clock;
  cfg.fifo_depth = args.fifo_depth;
  cfg.latency_cycles = args.latency;
  FusionOptions opts;
  opts.arithmetic = Arithmetic::Fixed;
  opts.consistency_verification = args.cv;
  opts.majority_radius = args.radius;

  const auto result = hw::simulate_pair(read_pgm(args.a), read_pgm(args.b), opts, cfg,
                                        !args.trace.empty());
  write_pgm(args.output, result.fused);
  if (!args.trace.empty()) {
    std::ofstream f(args.trace);
    if (!f) throw ImageIoError("cannot write " + args.trace);
    hw::write_trace(f, result.trace);
  }
  if (!args.stats.empty()) write_text(args.stats, stats_json(result.stats, cfg));
  if (!args.coeffs.empty()) {
    write_text(args.coeffs, coefficient_stream(result.coefficients, result.map.blocks_x(),
                                               result.map.blocks_y()));
  }
  if (!args.map.empty()) write_pgm(args.map, decision_map_image(result.map));
  const auto& s = result.stats;
  out << "blocks=" << s.blocks_processed << " total_cycles=" << s.total_cycles
      << " first_emit_latency=" << s.first_emit_latency << " stall_cycles=" << s.stall_cycles
      << " achieved_pixels_per_second=" << static_cast<std::uint64_t>(s.achieved_pixels_per_second)
      << '\n';
  return 0;
}

int cmd_throughput(const ThroughputArgs& args, std::ostream& out) {
  hw::DatapathConfig cfg;
  cfg.clock_hz = args.clock;
  const auto r = hw::throughput_report(cfg, args.width, args.height, args.fps, args.streams);
  ordered_json j;
  j["width"] = r.width;
  j["height"] = r.height;
  j["fps"] = r.fps;
  j["streams"] = r.streams;
  j["clock_hz"] = r.clock_hz;
  j["required_pixels_per_second"] = r.required_pixels_per_second;
  j["capacity_pixels_per_second"] = r.capacity_pixels_per_second;
  j["feasible"] = r.feasible;
  j["margin"] = r.margin;
  j["min_clock_hz"] = r.min_clock_hz;
  if (!args.json.empty()) write_text(args.json, j.dump(2) + "\n");

  char line[256];
  std::snprintf(line, sizeof line,
                "required: %.0f px/s\ncapacity: %.0f px/s\nmargin: %.4fx\nmin_clock: %.1f MHz\n",
                r.required_pixels_per_second, r.capacity_pixels_per_second, r.margin,
                r.min_clock_hz / 1e6);
  out << line << "feasible: " << (r.feasible ? "yes" : "no") << '\n';
  return 0;
}

int cmd_genpair(const GenpairArgs& args, std::ostream& out) {
  BenchSpec spec;
  spec.blur_kernel = args.kernel;
  spec.split = parse_or_throw<SplitMode>(args.split, parse_split, "split mode");
  spec.seed = args.seed;
  const auto pair = generate_pair(read_pgm(args.ref), spec, args.index);
  write_pgm(args.a, pair.a);
  write_pgm(args.b, pair.b);
  out << "region x=[" << pair.region.x0 << ',' << pair.region.x1 << ") y=[" << pair.region.y0
      << ',' << pair.region.y1 << ") blurred in A\n";
  return 0;
}

template <typename Block>
std::string stream_header(const char* format, int bx, int by, int scale_log2) {
  std::ostringstream h;
  h << "# dctfuse coefficient stream\nformat=" << format << " blocks_x=" << bx << " blocks_y=" << by;
  if (scale_log2 != 0) h << " scale_log2=" << scale_log2;
  h << '\n';
  return h.str();
}

}  // namespace

std::string counts_json(const FusionReport& r) {
  const double blocks = r.block_count();
  const double sources = r.sources;
  const auto& d = r.decision_ops;
  ordered_json j;
  j["measure"] = std::string(measure_name(r.measure));
  j["arithmetic"] = std::string(arithmetic_name(r.arithmetic));
  j["consistency_verification"] = r.consistency_verification;
  j["blocks"] = r.block_count();
  j["sources"] = r.sources;
  j["additions"] = d.additions;
  j["multiplications"] = d.multiplications;
  j["comparisons"] = d.comparisons;
  j["conditional_increments"] = d.conditional_increments;
  j["per_block"] = {
      {"additions_per_source", static_cast<double>(d.additions) / (blocks * sources)},
      {"multiplications_per_source", static_cast<double>(d.multiplications) / (blocks * sources)},
      {"comparisons", static_cast<double>(d.comparisons) / blocks},
      {"conditional_increments_per_source",
       static_cast<double>(d.conditional_increments) / (blocks * sources)},
  };
  j["consistency_verification_ops"] = {
      {"additions", r.consistency_ops.additions},
      {"comparisons", r.consistency_ops.comparisons},
      {"blocks_changed", r.blocks_changed_by_filter},
  };
  j["saturation_events"] = r.saturation_events;
  return j.dump(2) + "\n";
}

std::string stats_json(const hw::CycleStats& s, const hw::DatapathConfig& cfg) {
  ordered_json j;
  j["clock_hz"] = s.clock_hz;
  j["latency_cycles"] = cfg.latency_cycles;
  j["fifo_depth"] = cfg.fifo_depth;
  j["total_cycles"] = s.total_cycles;
  j["blocks_processed"] = s.blocks_processed;
  j["pixels_processed"] = s.pixels_processed;
  j["stall_cycles"] = s.stall_cycles;
  j["stall_fraction"] = s.stall_fraction();
  j["achieved_pixels_per_second"] = s.achieved_pixels_per_second;
  j["first_emit_latency"] = s.first_emit_latency;
  j["max_fifo_occupancy"] = s.max_fifo_occupancy;
  j["coefficient_capacity"] = s.coefficient_capacity;
  return j.dump(2) + "\n";
}

std::string coefficient_stream(const std::vector<FixedCoeffBlock>& blocks, int blocks_x,
                               int blocks_y) {
  std::ostringstream out;
  out << stream_header<FixedCoeffBlock>("fixed", blocks_x, blocks_y,
                                        kFixedInputShift - Fixed35::kFractionBits);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out << i % static_cast<std::size_t>(blocks_x) << ' ' << i / static_cast<std::size_t>(blocks_x);
    for (const auto& w : blocks[i]) out << ' ' << w.raw();
    out << '\n';
  }
  return out.str();
}

std::string coefficient_stream(const std::vector<CoeffBlock>& blocks, int blocks_x, int blocks_y) {
  std::ostringstream out;
  out << stream_header<CoeffBlock>("float", blocks_x, blocks_y, 0);
  char buf[40];
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out << i % static_cast<std::size_t>(blocks_x) << ' ' << i / static_cast<std::size_t>(blocks_x);
    for (double v : blocks[i]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-focus image fusion in the 8x8 DCT domain"};
  app.require_subcommand(1);

  FuseArgs fuse_args;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse two source images");
  fuse_cmd->add_option("A", fuse_args.a, "First source (PGM)")->required();
  fuse_cmd->add_option("B", fuse_args.b, "Second source (PGM)")->required();
  fuse_cmd->add_option("-o,--output", fuse_args.output, "Fused image (PGM)")->required();
  fuse_cmd->add_option("--measure", fuse_args.measure, "ampmax|variance|sf|acmax");
  fuse_cmd->add_flag("--cv", fuse_args.cv, "Majority-filter the decision map");
  fuse_cmd->add_option("--radius", fuse_args.radius, "Majority window radius in blocks");
  fuse_cmd->add_option("--arithmetic", fuse_args.arithmetic, "float|fixed");
  fuse_cmd->add_option("--ac-threshold", fuse_args.ac_threshold, "AC-count threshold for acmax");
  fuse_cmd->add_option("--map", fuse_args.map, "Decision map output (PGM, 255 = A)");
  fuse_cmd->add_option("--counts", fuse_args.counts, "Operation counts (JSON)");
  fuse_cmd->add_option("--coeffs", fuse_args.coeffs, "Fused coefficient stream (text)");
  fuse_cmd->add_option("--workers", fuse_args.workers, "Block-parallel workers");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score a fused image");
  eval_cmd->add_option("--fused", eval_args.fused, "Fused image")->required();
  eval_cmd->add_option("--ref", eval_args.ref, "Ground-truth reference");
  eval_cmd->add_option("--a", eval_args.a, "First source")->required();
  eval_cmd->add_option("--b", eval_args.b, "Second source")->required();
  eval_cmd->add_option("-o,--output", eval_args.output, "Metrics CSV (default: stdout)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Complementary-blur benchmark");
  bench_cmd->add_option("--refs", bench_args.refs, "Directory of reference PGMs")->required();
  bench_cmd->add_option("--pairs", bench_args.pairs, "Number of blurred pairs");
  bench_cmd->add_option("--kernel", bench_args.kernel, "Box blur size (odd, >= 3)");
  bench_cmd->add_option("--split", bench_args.split, "vertical|horizontal|quadrant");
  bench_cmd->add_option("--seed", bench_args.seed, "Region seed");
  bench_cmd->add_option("--methods", bench_args.methods, "Methods, e.g. ampmax sf+cv")
      ->delimiter(',');
  bench_cmd->add_option("--arithmetic", bench_args.arithmetic, "float|fixed");
  bench_cmd->add_option("--workers", bench_args.workers, "Pairs processed in parallel");
  bench_cmd->add_option("-o,--output", bench_args.output, "Table CSV (default: stdout)");

  HwsimArgs hw_args;
  auto* hw_cmd = app.add_subcommand("hwsim", "Run the fixed-point datapath model");
  hw_cmd->add_option("A", hw_args.a, "First source (PGM)")->required();
  hw_cmd->add_option("B", hw_args.b, "Second source (PGM)")->required();
  hw_cmd->add_option("-o,--output", hw_args.output, "Fused image (PGM)")->required();
  hw_cmd->add_option("--clock", hw_args.clock, "Clock frequency in Hz");
  hw_cmd->add_option("--trace", hw_args.trace, "Cycle trace output");
  hw_cmd->add_option("--stats", hw_args.stats, "Cycle statistics (JSON)");
  hw_cmd->add_option("--coeffs", hw_args.coeffs, "Fused coefficient stream (text)");
  hw_cmd->add_option("--map", hw_args.map, "Decision map output (PGM, 255 = A)");
  hw_cmd->add_flag("--cv", hw_args.cv, "Streaming majority filter");
  hw_cmd->add_option("--radius", hw_args.radius, "Majority window radius in blocks");
  hw_cmd->add_option("--fifo-depth", hw_args.fifo_depth, "Coefficient FIFO depth in block pairs");
  hw_cmd->add_option("--latency", hw_args.latency, "Pipeline latency in cycles");

  ThroughputArgs tp_args;
  auto* tp_cmd = app.add_subcommand("throughput", "Frame-rate feasibility of the datapath");
  tp_cmd->add_option("--width", tp_args.width, "Frame width");
  tp_cmd->add_option("--height", tp_args.height, "Frame height");
  tp_cmd->add_option("--fps", tp_args.fps, "Frames per second");
  tp_cmd->add_option("--streams", tp_args.streams, "Source streams");
  tp_cmd->add_option("--clock", tp_args.clock, "Clock frequency in Hz");
  tp_cmd->add_option("--json", tp_args.json, "Report output (JSON)");

  GenpairArgs gp_args;
  auto* gp_cmd = app.add_subcommand("genpair", "Make a complementary-blur pair from a reference");
  gp_cmd->add_option("REF", gp_args.ref, "Reference image (PGM)")->required();
  gp_cmd->add_option("-a", gp_args.a, "Output A (region blurred)")->required();
  gp_cmd->add_option("-b", gp_args.b, "Output B (complement blurred)")->required();
  gp_cmd->add_option("--kernel", gp_args.kernel, "Box blur size (odd, >= 3)");
  gp_cmd->add_option("--split", gp_args.split, "vertical|horizontal|quadrant");
  gp_cmd->add_option("--seed", gp_args.seed, "Region seed");
  gp_cmd->add_option("--index", gp_args.index, "Pair index within the seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (fuse_cmd->parsed()) return cmd_fuse(fuse_args, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_args, out);
    if (hw_cmd->parsed()) return cmd_hwsim(hw_args, out);
    if (tp_cmd->parsed()) return cmd_throughput(tp_args, out);
    if (gp_cmd->parsed()) return cmd_genpair(gp_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dctfuse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dctfuse::cli
