#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparrow {

using Vec3 = std::array<double, 3>;

// Guard added to ratio denominators; one 16-bit code value.
inline constexpr double kIntensityEpsilon = 1.0 / 65535.0;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Linear-RGB raster, interleaved doubles in nominal range [0,1].
/// Immutable by convention after construction; all operations below
/// return fresh images.
class LinearImage {
 public:
  LinearImage() = default;
  LinearImage(int width, int height, int bit_depth_origin = 16);

  int width() const { return width_; }
  int height() const { return height_; }
  int bit_depth_origin() const { return bit_depth_origin_; }
  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(width_) * height_;
  }
  double diagonal() const;

  double at(int x, int y, int channel) const {
    return data_[index(x, y) * 3 + channel];
  }
  double& at(int x, int y, int channel) {
    return data_[index(x, y) * 3 + channel];
  }
  Vec3 pixel(int x, int y) const {
    const std::int64_t base = index(x, y) * 3;
    return {data_[base], data_[base + 1], data_[base + 2]};
  }
  void set_pixel(int x, int y, const Vec3& value) {
    const std::int64_t base = index(x, y) * 3;
    data_[base] = value[0];
    data_[base + 1] = value[1];
    data_[base + 2] = value[2];
  }

  std::int64_t index(int x, int y) const {
    return static_cast<std::int64_t>(y) * width_ + x;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int bit_depth_origin_ = 16;
  std::vector<double> data_;
};

/// Per-pixel exclusion mask; excluded pixels are ignored by estimators.
class PixelMask {
 public:
  PixelMask() = default;
  PixelMask(int width, int height, bool excluded = false);

  int width() const { return width_; }
  int height() const { return height_; }
  bool excluded(int x, int y) const {
    return excluded_[static_cast<std::int64_t>(y) * width_ + x] != 0;
  }
  void set_excluded(int x, int y, bool value) {
    std::uint8_t& cell =
        excluded_[static_cast<std::int64_t>(y) * width_ + x];
    count_ += (value ? 1 : 0) - cell;
    cell = value ? 1 : 0;
  }
  void exclude_rect(int x, int y, int w, int h);
  std::int64_t excluded_count() const { return count_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t count_ = 0;
  std::vector<std::uint8_t> excluded_;
};

/// Uniform averaging kernel; size must be odd.
struct Kernel {
  int size = 1;

  explicit Kernel(int size_);
};

/// Box convolution per channel, clamp-to-edge borders.
LinearImage box_blur(const LinearImage& img, const Kernel& kernel);

}  // namespace sparrow
