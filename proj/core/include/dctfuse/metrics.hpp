#pragma once

#include <optional>
#include <string>

#include "dctfuse/image.hpp"

namespace dctfuse::metrics {

// Reference-based metrics. All throw DimensionMismatchError when the two
// images differ in shape.
double mse(const GrayImage& x, const GrayImage& y);
// 10 log10(255^2 / mse); +infinity when the images are identical.
double psnr(const GrayImage& x, const GrayImage& y);
// PSNR written to CSV files is capped at this value.
inline constexpr double kPsnrCapDb = 99.99;

// Mean SSIM over all 8x8 windows (stride 1) with C1 = (0.01 * 255)^2,
// C2 = (0.03 * 255)^2 and population (1/64) moments. Throws
// InvalidArgumentError for images smaller than 8x8.
double ssim(const GrayImage& x, const GrayImage& y);

// Mean universal quality index over the same windows with C1 = C2 = 0.
// Windows with a zero denominator are skipped; if every window is skipped
// the result is 1 for identical images and 0 otherwise.
double uiqi(const GrayImage& x, const GrayImage& y);

// Shannon entropy of the 256-bin histogram, in bits.
double entropy(const GrayImage& x);
// Mutual information from the 256x256 joint histogram, in bits.
double mutual_information(const GrayImage& x, const GrayImage& y);

// Edge-preservation metric Q^{AB/F} over 3x3 Sobel gradients with
// edge-replicated borders. Sigmoid parameters: strength (k = -15,
// s = 0.5), orientation (k = -22, s = 0.8); each sigmoid is normalized to
// reach exactly 1 at perfect transfer. Weights are the source gradient
// magnitudes. Result in [0, 1].
double qabf(const GrayImage& a, const GrayImage& b, const GrayImage& fused);

// Mean of NMI(grad(a), grad(fused)) and NMI(grad(b), grad(fused)), where
// grad is the Sobel magnitude quantized to 256 bins against the pair's
// joint maximum and NMI = MI / joint entropy. Result in [0, 1].
double fmi(const GrayImage& a, const GrayImage& b, const GrayImage& fused);

// sqrt(RF^2 + CF^2), both sums of squared first differences divided by
// width * height.
double spatial_frequency_metric(const GrayImage& img);

struct MetricReport {
  std::optional<double> ssim;
  std::optional<double> psnr_db;
  std::optional<double> mse;
  std::optional<double> mi_bits;
  std::optional<double> uiqi;
  std::optional<double> qabf;
  std::optional<double> sf;
  std::optional<double> fmi;
};

// Reference metrics are filled only when `reference` is given; the source
// images enable qabf and fmi.
MetricReport evaluate(const GrayImage& fused, const GrayImage* reference, const GrayImage* a,
                      const GrayImage* b);

// "ssim,psnr,mse,mi,uiqi,qabf,sf,fmi"
std::string csv_header();
// Missing values are left empty; PSNR is capped at kPsnrCapDb.
std::string csv_fields(const MetricReport& report);

}  // namespace dctfuse::metrics
