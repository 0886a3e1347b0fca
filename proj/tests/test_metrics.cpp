#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dctfuse/bench.hpp"
#include "dctfuse/error.hpp"
#include "dctfuse/metrics.hpp"
#include "dctfuse/pgm.hpp"
#include "oracles.hpp"

namespace dctfuse::metrics {
namespace {

using testing::random_image;
using testing::Rng;
using testing::textured_image;
using testing::uniform_int;

struct WindowStats {
  double mx, my, vx, vy, cxy;
};

WindowStats window_stats(const GrayImage& x, const GrayImage& y, int r, int c) {
  double mx = 0, my = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      mx += x.at(c + j, r + i);
      my += y.at(c + j, r + i);
    }
  mx /= 64;
  my /= 64;
  double vx = 0, vy = 0, cxy = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double dx = x.at(c + j, r + i) - mx;
      const double dy = y.at(c + j, r + i) - my;
      vx += dx * dx;
      vy += dy * dy;
      cxy += dx * dy;
    }
  return {mx, my, vx / 64, vy / 64, cxy / 64};
}

double naive_ssim(const GrayImage& x, const GrayImage& y) {
  const double c1 = 6.5025, c2 = 58.5225;
  double total = 0;
  int n = 0;
  for (int r = 0; r + 8 <= x.height(); ++r)
    for (int c = 0; c + 8 <= x.width(); ++c) {
      const auto s = window_stats(x, y, r, c);
      total += (2 * s.mx * s.my + c1) * (2 * s.cxy + c2) /
               ((s.mx * s.mx + s.my * s.my + c1) * (s.vx + s.vy + c2));
      ++n;
    }
  return total / n;
}

double naive_uiqi(const GrayImage& x, const GrayImage& y) {
  double total = 0;
  int n = 0;
  for (int r = 0; r + 8 <= x.height(); ++r)
    for (int c = 0; c + 8 <= x.width(); ++c) {
      const auto s = window_stats(x, y, r, c);
      const double den = (s.vx + s.vy) * (s.mx * s.mx + s.my * s.my);
      if (den == 0) continue;
      total += 4 * s.cxy * s.mx * s.my / den;
      ++n;
    }
  return total / n;
}

double naive_mi(const GrayImage& x, const GrayImage& y) {
  std::map<int, double> px, py;
  std::map<std::pair<int, int>, double> pxy;
  const double n = static_cast<double>(x.size());
  for (int r = 0; r < x.height(); ++r)
    for (int c = 0; c < x.width(); ++c) {
      px[x.at(c, r)] += 1 / n;
      py[y.at(c, r)] += 1 / n;
      pxy[{x.at(c, r), y.at(c, r)}] += 1 / n;
    }
  double mi = 0;
  for (const auto& [k, p] : pxy) mi += p * std::log2(p / (px[k.first] * py[k.second]));
  return mi;
}

GrayImage interior(const GrayImage& img, int margin) {
  GrayImage out(img.width() - 2 * margin, img.height() - 2 * margin);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = img.at(x + margin, y + margin);
  return out;
}

TEST(Metrics, IdentityValues) {
  Rng rng(61);
  for (int i = 0; i < 20; ++i) {
    const GrayImage x = textured_image(rng, uniform_int(rng, 8, 40), uniform_int(rng, 8, 40));
    EXPECT_EQ(mse(x, x), 0.0);
    EXPECT_TRUE(std::isinf(psnr(x, x)));
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
    EXPECT_NEAR(uiqi(x, x), 1.0, 1e-12);
    EXPECT_NEAR(mutual_information(x, x), entropy(x), 1e-9);
    EXPECT_NEAR(qabf(x, x, x), 1.0, 1e-6);
    EXPECT_NEAR(fmi(x, x, x), 1.0, 1e-6);
  }
}

TEST(Metrics, ConstantImages) {
  const GrayImage flat(16, 16, 90);
  EXPECT_EQ(spatial_frequency_metric(flat), 0.0);
  EXPECT_EQ(entropy(flat), 0.0);
  EXPECT_EQ(uiqi(flat, flat), 1.0);
  EXPECT_EQ(uiqi(flat, GrayImage(16, 16, 91)), 0.0);
  EXPECT_EQ(qabf(flat, flat, flat), 1.0);
  EXPECT_EQ(fmi(flat, flat, flat), 1.0);
}

TEST(Metrics, MseAndPsnrKnownValues) {
  const GrayImage a(10, 10, 100), b(10, 10, 101), c(10, 10, 103);
  EXPECT_EQ(mse(a, b), 1.0);
  EXPECT_NEAR(psnr(a, b), 10 * std::log10(65025.0), 1e-12);
  EXPECT_EQ(mse(a, c), 9.0);
  EXPECT_GT(psnr(a, b), psnr(a, c));
}

TEST(Metrics, EntropyOfTwoLevels) {
  GrayImage x(8, 8, 0);
  for (int y = 0; y < 4; ++y)
    for (int i = 0; i < 8; ++i) x.at(i, y) = 255;
  EXPECT_DOUBLE_EQ(entropy(x), 1.0);
}

TEST(Metrics, WindowedMetricsMatchNaiveWindows) {
  Rng rng(62);
  for (int i = 0; i < 30; ++i) {
    const int w = uniform_int(rng, 8, 30), h = uniform_int(rng, 8, 30);
    const GrayImage x = textured_image(rng, w, h);
    const GrayImage y = random_image(rng, w, h);
    EXPECT_NEAR(ssim(x, y), naive_ssim(x, y), 1e-9);
    EXPECT_NEAR(uiqi(x, y), naive_uiqi(x, y), 1e-9);
    EXPECT_NEAR(mutual_information(x, y), naive_mi(x, y), 1e-9);
  }
}

TEST(Metrics, SymmetricUnderSwap) {
  Rng rng(63);
  for (int i = 0; i < 50; ++i) {
    const GrayImage x = textured_image(rng, 24, 20);
    const GrayImage y = textured_image(rng, 24, 20);
    EXPECT_EQ(mse(x, y), mse(y, x));
    EXPECT_EQ(psnr(x, y), psnr(y, x));
    EXPECT_NEAR(ssim(x, y), ssim(y, x), 1e-12);
    EXPECT_NEAR(uiqi(x, y), uiqi(y, x), 1e-12);
    EXPECT_NEAR(mutual_information(x, y), mutual_information(y, x), 1e-12);
  }
}

TEST(Metrics, PsnrDecreasesWithMse) {
  Rng rng(64);
  const GrayImage ref = textured_image(rng, 32, 32);
  double last_mse = 0, last_psnr = INFINITY;
  for (int noise = 1; noise <= 40; noise += 3) {
    GrayImage noisy = ref;
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x)
        noisy.at(x, y) = to_pixel(ref.at(x, y) + ((x * 7 + y * 3) % 2 ? noise : -noise));
    const double e = mse(ref, noisy), p = psnr(ref, noisy);
    EXPECT_GT(e, last_mse);
    EXPECT_LT(p, last_psnr);
    last_mse = e;
    last_psnr = p;
  }
}

TEST(Metrics, RangesOnRandomTriples) {
  Rng rng(65);
  for (int i = 0; i < 100; ++i) {
    const int w = uniform_int(rng, 8, 24), h = uniform_int(rng, 8, 24);
    const GrayImage a = i % 2 ? textured_image(rng, w, h) : random_image(rng, w, h);
    const GrayImage b = random_image(rng, w, h);
    const GrayImage f = textured_image(rng, w, h);
    for (double v : {qabf(a, b, f), fmi(a, b, f)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    for (double v : {ssim(a, f), uiqi(a, f)}) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, QabfPrefersTheSharpFusion) {
  Rng rng(66);
  const GrayImage ref = textured_image(rng, 48, 48);
  const GrayImage blurred = box_blur(ref, 5);
  EXPECT_GT(qabf(ref, blurred, ref), qabf(ref, blurred, blurred));
}

TEST(Metrics, SpatialFrequencyUnitStep) {
  for (auto [m, n] : {std::pair{5, 7}, std::pair{16, 16}, std::pair{3, 40}}) {
    GrayImage img(n, m, 0);
    for (int y = 0; y < m; ++y)
      for (int x = n / 2; x < n; ++x) img.at(x, y) = 1;
    EXPECT_NEAR(spatial_frequency_metric(img), 1.0 / std::sqrt(n), 1e-15);
  }
}

TEST(Metrics, SpatialFrequencyDropsUnderBlur) {
  Rng rng(67);
  std::vector<GrayImage> images;
  for (const auto& p : list_pgm_files(DCTFUSE_TEST_REFS)) images.push_back(read_pgm(p));
  for (int i = 0; i < 20; ++i) images.push_back(textured_image(rng, 40, 40));
  for (const auto& img : images) {
    EXPECT_LE(spatial_frequency_metric(interior(box_blur(img, 3), 1)),
              spatial_frequency_metric(interior(img, 1)));
  }
}

TEST(Metrics, RejectsSmallOrMismatchedImages) {
  EXPECT_THROW(ssim(GrayImage(7, 9), GrayImage(7, 9)), InvalidArgumentError);
  EXPECT_THROW(uiqi(GrayImage(9, 7), GrayImage(9, 7)), InvalidArgumentError);
  EXPECT_THROW(mse(GrayImage(8, 8), GrayImage(9, 8)), DimensionMismatchError);
  EXPECT_THROW(qabf(GrayImage(8, 8), GrayImage(8, 8), GrayImage(8, 9)), DimensionMismatchError);
}

TEST(Metrics, CsvFormatting) {
  Rng rng(68);
  const GrayImage x = textured_image(rng, 16, 16);
  const auto full = evaluate(x, &x, &x, &x);
  const std::string fields = csv_fields(full);
  EXPECT_EQ(fields.substr(0, 19), "1.000000,99.990000,");
  EXPECT_EQ(std::count(fields.begin(), fields.end(), ','), 7);

  const auto partial = evaluate(x, nullptr, nullptr, nullptr);
  EXPECT_FALSE(partial.ssim.has_value());
  EXPECT_TRUE(partial.sf.has_value());
  const std::string p = csv_fields(partial);
  EXPECT_EQ(p.substr(0, 6), ",,,,,,");
  EXPECT_EQ(csv_header(), "ssim,psnr,mse,mi,uiqi,qabf,sf,fmi");
}

}  // namespace
}  // namespace dctfuse::metrics
