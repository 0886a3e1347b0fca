#include "dctfuse/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dctfuse/error.hpp"

namespace dctfuse {

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidArgumentError("image dimensions must be positive, got " + std::to_string(width) +
                               "x" + std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw InvalidArgumentError("image dimensions must be positive, got " + std::to_string(width) +
                               "x" + std::to_string(height));
  }
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgumentError("pixel buffer holds " + std::to_string(data_.size()) +
                               " samples, expected " + std::to_string(width * height));
  }
}

std::uint8_t GrayImage::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

std::uint8_t to_pixel(double value) {
  const double r = std::round(value);  // half away from zero
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

void require_same_shape(const GrayImage& a, const GrayImage& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatchError(std::string(what) + ": image dimensions differ (" +
                                 std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                 " vs " + std::to_string(b.width()) + "x" +
                                 std::to_string(b.height()) + ")");
  }
}

}  // namespace dctfuse
