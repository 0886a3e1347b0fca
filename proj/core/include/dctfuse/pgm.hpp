#pragma once

#include <filesystem>
#include <iosfwd>

#include "dctfuse/decision_map.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse {

// Binary (P5) and ASCII (P2) graymaps with maxval 255. Throws ImageIoError.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);

// Always writes binary P5.
void write_pgm(std::ostream& out, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

// One pixel per block: 255 where source A was selected, 0 for source B.
GrayImage decision_map_image(const DecisionMap& map);

}  // namespace dctfuse
