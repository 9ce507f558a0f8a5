#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "infosample/error.hpp"
#include "infosample/evaluate.hpp"

namespace infosample {

void write_png(const RasterImage& image, const std::string& path) {
  if (image.width == 0 || image.height == 0) {
    throw Error(ErrorKind::InvalidArgument, "cannot write an empty image");
  }
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::Internal, "libpng initialisation failed");
  }
  std::vector<png_byte> row(image.width);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::Io, "failed writing PNG '" + path + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    for (std::uint32_t x = 0; x < image.width; ++x) {
      const double p = std::fmin(std::fmax(image.at(x, y), 0.0), 1.0);
      row[x] = static_cast<png_byte>(std::lround(p * 255.0));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace infosample
