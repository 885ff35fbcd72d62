#include "sparrow/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace sparrow {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

LinearImage load_png16(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw IoError("cannot open '" + path + "' for reading");
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode PNG '" + path + "'");
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (width == 0 || height == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("zero-dimension PNG '" + path + "'");
  }
  if (color_type != PNG_COLOR_TYPE_RGB || (bit_depth != 8 && bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + path + "' is not an 8- or 16-bit RGB PNG");
  }

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = buffer.data() + row_bytes * y;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  LinearImage img(static_cast<int>(width), static_cast<int>(height),
                  bit_depth);
  const double scale = 1.0 / ((1 << bit_depth) - 1.0);
  double* out = img.data().data();
  if (bit_depth == 8) {
    for (std::size_t i = 0; i < buffer.size(); ++i) {
      out[i] = buffer[i] * scale;
    }
  } else {
    // 16-bit PNG samples are stored most significant byte first.
    for (std::size_t i = 0; i + 1 < buffer.size(); i += 2) {
      const unsigned value = (static_cast<unsigned>(buffer[i]) << 8) |
                             static_cast<unsigned>(buffer[i + 1]);
      out[i / 2] = value * scale;
    }
  }
  return img;
}

void save_png16(const LinearImage& img, const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw IoError("cannot open '" + path + "' for writing");
  }

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  const std::size_t row_bytes = static_cast<std::size_t>(img.width()) * 6;
  std::vector<png_byte> buffer(row_bytes * img.height());
  std::vector<png_bytep> rows(img.height());
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode PNG '" + path + "'");
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, img.width(), img.height(), 16, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const double* in = img.data().data();
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    const double v = std::min(std::max(in[i], 0.0), 1.0);
    const unsigned code = static_cast<unsigned>(std::lround(v * 65535.0));
    buffer[2 * i] = static_cast<png_byte>(code >> 8);
    buffer[2 * i + 1] = static_cast<png_byte>(code & 0xff);
  }
  for (int y = 0; y < img.height(); ++y) {
    rows[y] = buffer.data() + row_bytes * y;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace sparrow
