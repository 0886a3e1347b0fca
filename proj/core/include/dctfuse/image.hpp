#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dctfuse {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

// 8-bit single-channel raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  // Zero-filled image. Throws InvalidArgumentError unless width, height >= 1.
  GrayImage(int width, int height, std::uint8_t fill = 0);
  // Throws InvalidArgumentError if data.size() != width * height.
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

  // Edge-replicated access: coordinates are clamped into the raster.
  std::uint8_t clamped(int x, int y) const;

  std::span<const std::uint8_t> pixels() const { return data_; }
  std::span<std::uint8_t> pixels() { return data_; }

  bool same_shape(const GrayImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// 8x8 pixel-domain samples, row-major: samples[row * 8 + col].
using Block = std::array<double, kBlockArea>;

// 8x8 DCT coefficients, row-major; index (i, j) -> i * 8 + j, (0,0) is DC.
using CoeffBlock = std::array<double, kBlockArea>;

constexpr int block_index(int row, int col) { return row * kBlockSize + col; }

// Round half away from zero, then clamp to [0, 255].
std::uint8_t to_pixel(double value);

// Throws DimensionMismatchError naming `what` when the shapes differ.
void require_same_shape(const GrayImage& a, const GrayImage& b, const char* what);

}  // namespace dctfuse
