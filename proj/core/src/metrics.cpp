#include "dctfuse/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

#include "dctfuse/error.hpp"

namespace dctfuse::metrics {
namespace {

constexpr int kWindow = 8;
constexpr int kBins = 256;

// Summed-area tables of x, y, x^2, y^2 and xy. Integer sums keep window
// moments exact.
class MomentTables {
 public:
  MomentTables(const GrayImage& x, const GrayImage& y) : w_(x.width() + 1) {
    const std::size_t n = static_cast<std::size_t>(w_) * static_cast<std::size_t>(x.height() + 1);
    for (auto* t : {&sx_, &sy_, &sxx_, &syy_, &sxy_}) t->assign(n, 0);
    for (int r = 0; r < x.height(); ++r) {
      for (int c = 0; c < x.width(); ++c) {
        const std::int64_t a = x.at(c, r);
        const std::int64_t b = y.at(c, r);
        accumulate(sx_, r, c, a);
        accumulate(sy_, r, c, b);
        accumulate(sxx_, r, c, a * a);
        accumulate(syy_, r, c, b * b);
        accumulate(sxy_, r, c, a * b);
      }
    }
  }

  struct Moments {
    double mean_x, mean_y, var_x, var_y, cov;
  };

  Moments window(int r, int c) const {
    constexpr double n = kWindow * kWindow;
    const double sx = static_cast<double>(box(sx_, r, c));
    const double sy = static_cast<double>(box(sy_, r, c));
    // n * sum(x^2) - sum(x)^2 is an exact integer.
    const auto ix = box(sx_, r, c);
    const auto iy = box(sy_, r, c);
    const double vx = static_cast<double>(kWindow * kWindow * box(sxx_, r, c) - ix * ix) / (n * n);
    const double vy = static_cast<double>(kWindow * kWindow * box(syy_, r, c) - iy * iy) / (n * n);
    const double cv = static_cast<double>(kWindow * kWindow * box(sxy_, r, c) - ix * iy) / (n * n);
    return {sx / n, sy / n, vx, vy, cv};
  }

 private:
  void accumulate(std::vector<std::int64_t>& t, int r, int c, std::int64_t v) {
    t[at(r + 1, c + 1)] = v + t[at(r, c + 1)] + t[at(r + 1, c)] - t[at(r, c)];
  }
  std::size_t at(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(c);
  }
  std::int64_t box(const std::vector<std::int64_t>& t, int r, int c) const {
    return t[at(r + kWindow, c + kWindow)] - t[at(r, c + kWindow)] - t[at(r + kWindow, c)] +
           t[at(r, c)];
  }

  int w_;
  std::vector<std::int64_t> sx_, sy_, sxx_, syy_, sxy_;
};

void require_window(const GrayImage& x) {
  if (x.width() < kWindow || x.height() < kWindow) {
    throw InvalidArgumentError("image must be at least 8x8 for windowed metrics");
  }
}

double entropy_of_counts(const std::vector<std::uint64_t>& counts, double total) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

// H(x) + H(y) - H(x, y) and H(x, y) over label images with kBins levels.
struct InformationTerms {
  double mutual = 0.0;
  double joint_entropy = 0.0;
};

InformationTerms information(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  std::vector<std::uint64_t> hx(kBins, 0), hy(kBins, 0), hxy(kBins * kBins, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++hx[x[i]];
    ++hy[y[i]];
    ++hxy[static_cast<std::size_t>(x[i]) * kBins + y[i]];
  }
  const double n = static_cast<double>(x.size());
  const double joint = entropy_of_counts(hxy, n);
  const double mi = entropy_of_counts(hx, n) + entropy_of_counts(hy, n) - joint;
  return {std::max(0.0, mi), joint};
}

struct Gradient {
  std::vector<double> magnitude;
  std::vector<double> angle;
};

Gradient sobel(const GrayImage& img) {
  Gradient g;
  const std::size_t n = img.size();
  g.magnitude.resize(n);
  g.angle.resize(n);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      auto p = [&](int dx, int dy) { return static_cast<double>(img.clamped(x + dx, y + dy)); };
      const double gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) +
                            static_cast<std::size_t>(x);
      g.magnitude[i] = std::hypot(gx, gy);
      if (gx == 0.0) {
        g.angle[i] = gy == 0.0 ? 0.0 : std::numbers::pi / 2;
      } else {
        g.angle[i] = std::atan(gy / gx);
      }
    }
  }
  return g;
}

double sigmoid_preservation(double value, double k, double s) {
  const double gamma = 1.0 + std::exp(k * (1.0 - s));
  return gamma / (1.0 + std::exp(k * (value - s)));
}

// Per-pixel edge preservation of source gradient `src` in `fused`.
double preservation(double gs, double as, double gf, double af) {
  double strength;
  if (gs > gf) {
    strength = gf / gs;
  } else if (gs < gf) {
    strength = gs / gf;
  } else {
    strength = 1.0;
  }
  const double orientation =
      std::fabs(std::fabs(as - af) - std::numbers::pi / 2) * 2.0 / std::numbers::pi;
  return sigmoid_preservation(strength, -15.0, 0.5) * sigmoid_preservation(orientation, -22.0, 0.8);
}

std::vector<std::uint8_t> quantize(const std::vector<double>& g, double gmax) {
  std::vector<std::uint8_t> out(g.size(), 0);
  if (gmax <= 0.0) return out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::min(255.0, std::floor(g[i] * 255.0 / gmax)));
  }
  return out;
}

double feature_nmi(const std::vector<double>& gs, const std::vector<double>& gf) {
  const double gmax = std::max(*std::max_element(gs.begin(), gs.end()),
                               *std::max_element(gf.begin(), gf.end()));
  const auto qs = quantize(gs, gmax);
  const auto qf = quantize(gf, gmax);
  const auto terms = information(qs, qf);
  if (terms.joint_entropy <= 0.0) return 1.0;
  return std::clamp(terms.mutual / terms.joint_entropy, 0.0, 1.0);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

double mse(const GrayImage& x, const GrayImage& y) {
  require_same_shape(x, y, "mse");
  std::uint64_t acc = 0;
  const auto px = x.pixels();
  const auto py = y.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(px[i]) - py[i];
    acc += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(acc) / static_cast<double>(px.size());
}

double psnr(const GrayImage& x, const GrayImage& y) {
  const double e = mse(x, y);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

double ssim(const GrayImage& x, const GrayImage& y) {
  require_same_shape(x, y, "ssim");
  require_window(x);
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  const MomentTables t(x, y);
  double total = 0.0;
  int windows = 0;
  for (int r = 0; r + kWindow <= x.height(); ++r) {
    for (int c = 0; c + kWindow <= x.width(); ++c) {
      const auto m = t.window(r, c);
      total += ((2 * m.mean_x * m.mean_y + c1) * (2 * m.cov + c2)) /
               ((m.mean_x * m.mean_x + m.mean_y * m.mean_y + c1) * (m.var_x + m.var_y + c2));
      ++windows;
    }
  }
  return total / windows;
}

double uiqi(const GrayImage& x, const GrayImage& y) {
  require_same_shape(x, y, "uiqi");
  require_window(x);
  const MomentTables t(x, y);
  double total = 0.0;
  int windows = 0;
  for (int r = 0; r + kWindow <= x.height(); ++r) {
    for (int c = 0; c + kWindow <= x.width(); ++c) {
      const auto m = t.window(r, c);
      const double den =
          (m.var_x + m.var_y) * (m.mean_x * m.mean_x + m.mean_y * m.mean_y);
      if (den == 0.0) continue;
      total += 4 * m.cov * m.mean_x * m.mean_y / den;
      ++windows;
    }
  }
  if (windows == 0) return x == y ? 1.0 : 0.0;
  return total / windows;
}

double entropy(const GrayImage& x) {
  std::vector<std::uint64_t> h(kBins, 0);
  for (auto p : x.pixels()) ++h[p];
  return entropy_of_counts(h, static_cast<double>(x.size()));
}

double mutual_information(const GrayImage& x, const GrayImage& y) {
  require_same_shape(x, y, "mutual_information");
  return information(x.pixels(), y.pixels()).mutual;
}

double qabf(const GrayImage& a, const GrayImage& b, const GrayImage& fused) {
  require_same_shape(a, fused, "qabf");
  require_same_shape(b, fused, "qabf");
  const auto ga = sobel(a);
  const auto gb = sobel(b);
  const auto gf = sobel(fused);
  double num = 0.0;
  double den = 0.0;
  bool fused_has_edges = false;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    const double wa = ga.magnitude[i];
    const double wb = gb.magnitude[i];
    fused_has_edges = fused_has_edges || gf.magnitude[i] > 0.0;
    if (wa > 0.0) num += wa * preservation(wa, ga.angle[i], gf.magnitude[i], gf.angle[i]);
    if (wb > 0.0) num += wb * preservation(wb, gb.angle[i], gf.magnitude[i], gf.angle[i]);
    den += wa + wb;
  }
  if (den == 0.0) return fused_has_edges ? 0.0 : 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

double fmi(const GrayImage& a, const GrayImage& b, const GrayImage& fused) {
  require_same_shape(a, fused, "fmi");
  require_same_shape(b, fused, "fmi");
  const auto gf = sobel(fused).magnitude;
  return 0.5 * (feature_nmi(sobel(a).magnitude, gf) + feature_nmi(sobel(b).magnitude, gf));
}

double spatial_frequency_metric(const GrayImage& img) {
  double rf = 0.0;
  double cf = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (x > 0) {
        const double d = static_cast<double>(img.at(x, y)) - img.at(x - 1, y);
        rf += d * d;
      }
      if (y > 0) {
        const double d = static_cast<double>(img.at(x, y)) - img.at(x, y - 1);
        cf += d * d;
      }
    }
  }
  const double n = static_cast<double>(img.size());
  return std::sqrt(rf / n + cf / n);
}

MetricReport evaluate(const GrayImage& fused, const GrayImage* reference, const GrayImage* a,
                      const GrayImage* b) {
  MetricReport r;
  if (reference) {
    r.ssim = ssim(fused, *reference);
    r.mse = mse(fused, *reference);
    r.psnr_db = psnr(fused, *reference);
    r.mi_bits = mutual_information(fused, *reference);
    r.uiqi = uiqi(fused, *reference);
  }
  if (a && b) {
    r.qabf = qabf(*a, *b, fused);
    r.fmi = fmi(*a, *b, fused);
  }
  r.sf = spatial_frequency_metric(fused);
  return r;
}

std::string csv_header() { return "ssim,psnr,mse,mi,uiqi,qabf,sf,fmi"; }

std::string csv_fields(const MetricReport& report) {
  auto field = [](const std::optional<double>& v) { return v ? format_value(*v) : std::string(); };
  std::optional<double> capped = report.psnr_db;
  if (capped) capped = std::min(*capped, kPsnrCapDb);
  return field(report.ssim) + "," + field(capped) + "," + field(report.mse) + "," +
         field(report.mi_bits) + "," + field(report.uiqi) + "," + field(report.qabf) + "," +
         field(report.sf) + "," + field(report.fmi);
}

}  // namespace dctfuse::metrics
