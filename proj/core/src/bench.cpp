#include "dctfuse/bench.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>

#include "dctfuse/error.hpp"
#include "dctfuse/pgm.hpp"

namespace dctfuse {
namespace {

// Deterministic across standard libraries, unlike the std distributions.
int draw(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

GrayImage blend(const GrayImage& sharp, const GrayImage& blurred, const Region& r, bool inside) {
  GrayImage out = sharp;
  for (int y = 0; y < sharp.height(); ++y)
    for (int x = 0; x < sharp.width(); ++x)
      if (r.contains(x, y) == inside) out.at(x, y) = blurred.at(x, y);
  return out;
}

}  // namespace

std::string_view split_name(SplitMode mode) {
  switch (mode) {
    case SplitMode::Vertical:
      return "vertical";
    case SplitMode::Horizontal:
      return "horizontal";
    case SplitMode::Quadrant:
      return "quadrant";
  }
  return "unknown";
}

std::optional<SplitMode> parse_split(std::string_view name) {
  if (name == "vertical") return SplitMode::Vertical;
  if (name == "horizontal") return SplitMode::Horizontal;
  if (name == "quadrant") return SplitMode::Quadrant;
  return std::nullopt;
}

void validate(const BenchSpec& spec) {
  if (spec.blur_kernel < 3 || spec.blur_kernel % 2 == 0) {
    throw InvalidArgumentError("blur kernel must be odd and >= 3");
  }
  if (spec.pairs < 1) throw InvalidArgumentError("pair count must be >= 1");
  if (spec.workers < 1) throw InvalidArgumentError("worker count must be >= 1");
}

GrayImage box_blur(const GrayImage& img, int kernel) {
  if (kernel < 1 || kernel % 2 == 0) throw InvalidArgumentError("box kernel must be odd");
  const int r = kernel / 2;
  const double area = static_cast<double>(kernel) * kernel;
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int sum = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) sum += img.clamped(x + dx, y + dy);
      out.at(x, y) = to_pixel(sum / area);
    }
  }
  return out;
}

BlurredPair generate_pair(const GrayImage& reference, const BenchSpec& spec, int pair_index) {
  validate(spec);
  const int w = reference.width();
  const int h = reference.height();
  if (w < 16 || h < 16) throw InvalidArgumentError("reference must be at least 16x16");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(pair_index)};
  std::mt19937_64 rng(seq);
  Region region;
  switch (spec.split) {
    case SplitMode::Vertical:
      region = {0, 0, draw(rng, w / 4, 3 * w / 4), h};
      break;
    case SplitMode::Horizontal:
      region = {0, 0, w, draw(rng, h / 4, 3 * h / 4)};
      break;
    case SplitMode::Quadrant: {
      const int cx = draw(rng, w / 4, 3 * w / 4);
      const int cy = draw(rng, h / 4, 3 * h / 4);
      const int q = draw(rng, 0, 3);
      region = {q % 2 == 0 ? 0 : cx, q < 2 ? 0 : cy, q % 2 == 0 ? cx : w, q < 2 ? cy : h};
      break;
    }
  }
  const GrayImage blurred = box_blur(reference, spec.blur_kernel);
  return {blend(reference, blurred, region, true), blend(reference, blurred, region, false), region};
}

FusionMethod parse_method(std::string_view name, Arithmetic arithmetic) {
  FusionMethod m;
  m.name = std::string(name);
  std::string_view measure = name;
  constexpr std::string_view kCv = "+cv";
  if (measure.size() > kCv.size() && measure.substr(measure.size() - kCv.size()) == kCv) {
    m.options.consistency_verification = true;
    measure.remove_suffix(kCv.size());
  }
  const auto id = parse_measure(measure);
  if (!id) throw InvalidArgumentError("unknown fusion method '" + std::string(name) + "'");
  m.options.measure = *id;
  m.options.arithmetic = arithmetic;
  return m;
}

std::vector<std::filesystem::path> list_pgm_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ImageIoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NamedImage> load_references(const std::vector<std::filesystem::path>& paths) {
  std::vector<NamedImage> out;
  for (const auto& p : paths) out.push_back({p.stem().string(), read_pgm(p)});
  return out;
}

BenchTable run_bench(const BenchSpec& spec, const std::vector<NamedImage>& references,
                     const std::vector<FusionMethod>& methods) {
  validate(spec);
  if (references.empty()) throw InvalidArgumentError("bench needs at least one reference image");
  if (methods.empty()) throw InvalidArgumentError("bench needs at least one method");

  const std::size_t m = methods.size();
  std::vector<BenchRow> rows(static_cast<std::size_t>(spec.pairs) * m);
  auto run_pair = [&](int i) {
    const NamedImage& ref = references[static_cast<std::size_t>(i) % references.size()];
    const BlurredPair pair = generate_pair(ref.image, spec, i);
    for (std::size_t k = 0; k < m; ++k) {
      const auto result = fuse(pair.a, pair.b, methods[k].options);
      BenchRow& row = rows[static_cast<std::size_t>(i) * m + k];
      row.pair = i;
      row.reference = ref.name;
      row.method = methods[k].name;
      row.metrics = metrics::evaluate(result.fused, &ref.image, &pair.a, &pair.b);
    }
  };

  const int workers = std::min(spec.workers, spec.pairs);
  std::vector<std::thread> threads;
  for (int w = 1; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int i = w; i < spec.pairs; i += workers) run_pair(i);
    });
  }
  for (int i = 0; i < spec.pairs; i += workers) run_pair(i);
  for (auto& t : threads) t.join();

  BenchTable table;
  table.rows = std::move(rows);
  for (std::size_t k = 0; k < m; ++k) {
    BenchRow mean;
    mean.pair = -1;
    mean.reference = "all";
    mean.method = methods[k].name;
    auto average = [&](auto getter) {
      double s = 0.0;
      for (int i = 0; i < spec.pairs; ++i) {
        s += getter(table.rows[static_cast<std::size_t>(i) * m + k].metrics);
      }
      return s / spec.pairs;
    };
    auto& r = mean.metrics;
    r.ssim = average([](const auto& x) { return *x.ssim; });
    r.psnr_db = average([](const auto& x) { return std::min(*x.psnr_db, metrics::kPsnrCapDb); });
    r.mse = average([](const auto& x) { return *x.mse; });
    r.mi_bits = average([](const auto& x) { return *x.mi_bits; });
    r.uiqi = average([](const auto& x) { return *x.uiqi; });
    r.qabf = average([](const auto& x) { return *x.qabf; });
    r.sf = average([](const auto& x) { return *x.sf; });
    r.fmi = average([](const auto& x) { return *x.fmi; });
    table.means.push_back(std::move(mean));
  }
  return table;
}

std::string to_csv(const BenchTable& table) {
  std::ostringstream out;
  out << "pair,reference,method," << metrics::csv_header() << '\n';
  for (const auto& row : table.rows) {
    out << row.pair << ',' << row.reference << ',' << row.method << ','
        << metrics::csv_fields(row.metrics) << '\n';
  }
  for (const auto& row : table.means) {
    out << "mean," << row.reference << ',' << row.method << ',' << metrics::csv_fields(row.metrics)
        << '\n';
  }
  return out.str();
}

}  // namespace dctfuse
