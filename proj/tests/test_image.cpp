#include <png.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "sparrow/baselines.hpp"
#include "sparrow/illuminant.hpp"
#include "sparrow/image.hpp"
#include "sparrow/png_io.hpp"
#include "test_support.hpp"

using namespace sparrow;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// Test-only writer so load_png16 can be exercised against files the
// production encoder cannot produce (8-bit, grayscale).
void write_png_raw(const std::string& path, int width, int height,
                   int bit_depth, int color_type,
                   const std::vector<png_byte>& bytes) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, f);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t row_bytes = bytes.size() / height;
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(bytes.data()) + row_bytes * y;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

// Direct O(n*k^2) convolution with clamp-to-edge borders.
LinearImage blur_oracle(const LinearImage& img, int size) {
  const int half = size / 2;
  LinearImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      Vec3 sum{0.0, 0.0, 0.0};
      for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
          const int xx = std::clamp(x + dx, 0, img.width() - 1);
          const int yy = std::clamp(y + dy, 0, img.height() - 1);
          for (int c = 0; c < 3; ++c) sum[c] += img.at(xx, yy, c);
        }
      }
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = sum[c] / (size * size);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("LinearImage rejects zero dimensions") {
  CHECK_THROWS_AS(LinearImage(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(LinearImage(4, 0), std::invalid_argument);
}

TEST_CASE("PNG load normalizes 16-bit codes") {
  const std::string path = temp_path("sparrow_16bit.png");
  // Codes 65535/0/65535 and 13107/0/0 (13107 * 5 == 65535).
  const std::vector<png_byte> bytes = {0xff, 0xff, 0x00, 0x00, 0xff, 0xff,
                                       0x33, 0x33, 0x00, 0x00, 0x00, 0x00};
  write_png_raw(path, 2, 1, 16, PNG_COLOR_TYPE_RGB, bytes);
  const LinearImage img = load_png16(path);
  CHECK(img.width() == 2);
  CHECK(img.height() == 1);
  CHECK(img.at(0, 0, 0) == 1.0);
  CHECK(img.at(0, 0, 1) == 0.0);
  CHECK(img.at(0, 0, 2) == 1.0);
  CHECK(img.at(1, 0, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(img.at(1, 0, 0) == 13107.0 / 65535.0);
  CHECK(img.bit_depth_origin() == 16);
}

TEST_CASE("PNG load normalizes 8-bit codes") {
  const std::string path = temp_path("sparrow_8bit.png");
  const std::vector<png_byte> bytes = {255, 255, 255, 51, 0, 102};
  write_png_raw(path, 2, 1, 8, PNG_COLOR_TYPE_RGB, bytes);
  const LinearImage img = load_png16(path);
  CHECK(img.at(0, 0, 0) == 1.0);
  CHECK(img.at(0, 0, 1) == 1.0);
  CHECK(img.at(0, 0, 2) == 1.0);
  CHECK(img.at(1, 0, 0) == 51.0 / 255.0);
  CHECK(img.bit_depth_origin() == 8);
}

TEST_CASE("PNG load rejects bad inputs") {
  CHECK_THROWS_AS(load_png16(temp_path("sparrow_missing.png")), IoError);

  const std::string gray = temp_path("sparrow_gray.png");
  write_png_raw(gray, 2, 1, 8, PNG_COLOR_TYPE_GRAY, {0, 255});
  CHECK_THROWS_AS(load_png16(gray), IoError);

  const std::string garbage = temp_path("sparrow_garbage.png");
  std::FILE* f = std::fopen(garbage.c_str(), "wb");
  std::fputs("not a png", f);
  std::fclose(f);
  CHECK_THROWS_AS(load_png16(garbage), IoError);
}

TEST_CASE("16-bit PNG round trip is bit-exact") {
  const std::string a = temp_path("sparrow_rt_a.png");
  const std::string b = temp_path("sparrow_rt_b.png");
  save_png16(testsupport::random_image(23, 17, 7), a);
  const LinearImage first = load_png16(a);
  save_png16(first, b);
  const LinearImage second = load_png16(b);
  CHECK(first.data() == second.data());
}

TEST_CASE("box_blur preserves constants and size-1 is identity") {
  const LinearImage img = testsupport::constant_image(9, 7, {0.3, 0.5, 0.7});
  const LinearImage blurred = box_blur(img, Kernel(5));
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    CHECK(blurred.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-12));
  }
  const LinearImage noisy = testsupport::random_image(9, 7, 3);
  CHECK(box_blur(noisy, Kernel(1)).data() == noisy.data());
}

TEST_CASE("box_blur impulse response") {
  LinearImage img(5, 5);
  img.set_pixel(2, 2, {1.0, 1.0, 1.0});
  const LinearImage blurred = box_blur(img, Kernel(3));
  for (int c = 0; c < 3; ++c) {
    CHECK(blurred.at(2, 2, c) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(blurred.at(0, 0, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("box_blur rejects even kernels") {
  CHECK_THROWS_AS(Kernel(4), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(-3), std::invalid_argument);
}

TEST_CASE("box_blur matches direct convolution") {
  const LinearImage img = testsupport::random_image(13, 11, 42);
  for (const int size : {3, 5, 9}) {
    const LinearImage fast = box_blur(img, Kernel(size));
    const LinearImage slow = blur_oracle(img, size);
    for (std::size_t i = 0; i < img.data().size(); ++i) {
      CHECK(fast.data()[i] == doctest::Approx(slow.data()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("box_blur is linear") {
  const LinearImage x = testsupport::random_image(10, 8, 1);
  const LinearImage y = testsupport::random_image(10, 8, 2);
  const double a = 0.7, b = 1.9;
  LinearImage combo(10, 8);
  for (std::size_t i = 0; i < combo.data().size(); ++i) {
    combo.data()[i] = a * x.data()[i] + b * y.data()[i];
  }
  const LinearImage lhs = box_blur(combo, Kernel(5));
  const LinearImage bx = box_blur(x, Kernel(5));
  const LinearImage by = box_blur(y, Kernel(5));
  for (std::size_t i = 0; i < combo.data().size(); ++i) {
    const double rhs = a * bx.data()[i] + b * by.data()[i];
    CHECK(lhs.data()[i] == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("diagonal_correct divides out a cast") {
  LinearImage img(1, 1);
  img.set_pixel(0, 0, {0.8, 0.4, 0.4});
  const LinearImage out = diagonal_correct(img, {{2.0, 1.0, 1.0}});
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(out.at(0, 0, 1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(out.at(0, 0, 2) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("diagonal_correct with a neutral estimate is the identity") {
  const LinearImage img = testsupport::random_image(6, 4, 5);
  const LinearImage out = diagonal_correct(img, {{1.0, 1.0, 1.0}});
  CHECK(out.data() == img.data());
}

TEST_CASE("diagonal_correct caps the largest gain at one") {
  // Estimate (0.5, 1, 1): raw gains (2, 1, 1) rescale to (1, 0.5, 0.5),
  // so the red channel passes through unchanged.
  LinearImage img(1, 1);
  img.set_pixel(0, 0, {1.0, 0.1, 0.1});
  const LinearImage out = diagonal_correct(img, {{0.5, 1.0, 1.0}});
  CHECK(out.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(out.at(0, 0, 1) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(out.at(0, 0, 2) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("diagonal_correct rejects non-positive estimates") {
  const LinearImage img = testsupport::constant_image(2, 2, {0.5, 0.5, 0.5});
  CHECK_THROWS_AS(diagonal_correct(img, {{0.0, 1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(diagonal_correct(img, {{1.0, -0.2, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("correcting with the gray-world estimate balances the means") {
  const LinearImage img = testsupport::random_image(40, 30, 9, 0.05, 0.6);
  const LinearImage out = diagonal_correct(img, gray_world(img));
  Vec3 mean{0.0, 0.0, 0.0};
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const Vec3 v = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) mean[c] += v[c];
    }
  }
  for (int c = 0; c < 3; ++c) mean[c] /= out.pixel_count();
  CHECK(mean[1] == doctest::Approx(mean[0]).epsilon(1e-6));
  CHECK(mean[2] == doctest::Approx(mean[0]).epsilon(1e-6));
}
