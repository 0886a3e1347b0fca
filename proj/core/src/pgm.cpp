#include "dctfuse/pgm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "dctfuse/error.hpp"

namespace dctfuse {
namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  int v = -1;
  if (!(in >> v) || v < 0) throw ImageIoError(std::string("PGM: bad ") + what);
  return v;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw ImageIoError("PGM: expected P5 or P2 magic number");
  }
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (width < 1 || height < 1) throw ImageIoError("PGM: empty image");
  if (maxval != 255) throw ImageIoError("PGM: only maxval 255 is supported");

  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  if (magic[1] == '5') {
    in.get();  // single whitespace byte before the raster
    if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()))) {
      throw ImageIoError("PGM: truncated raster");
    }
  } else {
    for (auto& p : data) {
      const int v = read_header_int(in, "sample");
      if (v > 255) throw ImageIoError("PGM: sample exceeds maxval");
      p = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(width, height, std::move(data));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  try {
    return read_pgm(in);
  } catch (const ImageIoError& e) {
    throw ImageIoError(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.size()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path.string());
  write_pgm(out, img);
  if (!out) throw ImageIoError("write failed for " + path.string());
}

GrayImage decision_map_image(const DecisionMap& map) {
  GrayImage img(map.blocks_x(), map.blocks_y());
  for (int by = 0; by < map.blocks_y(); ++by)
    for (int bx = 0; bx < map.blocks_x(); ++bx) img.at(bx, by) = map.at(bx, by) > 0 ? 255 : 0;
  return img;
}

}  // namespace dctfuse
