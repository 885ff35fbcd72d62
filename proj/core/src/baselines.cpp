#include "sparrow/baselines.hpp"

#include <cmath>
#include <vector>

namespace sparrow {

namespace {

void check_mask(const LinearImage& img, const PixelMask* mask) {
  if (mask &&
      (mask->width() != img.width() || mask->height() != img.height())) {
    throw std::invalid_argument("mask dimensions do not match the image");
  }
}

struct ChannelMoments {
  Vec3 mean{0.0, 0.0, 0.0};
  Vec3 stddev{0.0, 0.0, 0.0};  // population deviation
  std::int64_t count = 0;
};

ChannelMoments region_moments(const LinearImage& img, const PixelMask* mask,
                              int x0, int y0, int x1, int y1) {
  ChannelMoments m;
  Vec3 sum{0.0, 0.0, 0.0};
  Vec3 sum_sq{0.0, 0.0, 0.0};
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (mask && mask->excluded(x, y)) continue;
      const Vec3 v = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        sum[c] += v[c];
        sum_sq[c] += v[c] * v[c];
      }
      ++m.count;
    }
  }
  if (m.count > 0) {
    for (int c = 0; c < 3; ++c) {
      m.mean[c] = sum[c] / m.count;
      const double var =
          std::max(0.0, sum_sq[c] / m.count - m.mean[c] * m.mean[c]);
      m.stddev[c] = std::sqrt(var);
    }
  }
  return m;
}

}  // namespace

IlluminantEstimate gray_world(const LinearImage& img, const PixelMask* mask) {
  check_mask(img, mask);
  const ChannelMoments m =
      region_moments(img, mask, 0, 0, img.width(), img.height());
  if (m.count == 0) {
    throw EstimationError("all pixels are masked out");
  }
  return {m.mean};
}

IlluminantEstimate sdwgw(const LinearImage& img, const PixelMask* mask,
                         int num_blocks) {
  check_mask(img, mask);
  if (num_blocks < 1) {
    throw std::invalid_argument("block count must be at least 1");
  }
  const int grid = static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(num_blocks))));
  const IlluminantEstimate fallback = gray_world(img, mask);
  if (grid == 1) return fallback;

  Vec3 weighted_sum{0.0, 0.0, 0.0};
  Vec3 weight_sum{0.0, 0.0, 0.0};
  for (int by = 0; by < grid; ++by) {
    const int y0 = static_cast<int>(
        static_cast<std::int64_t>(img.height()) * by / grid);
    const int y1 = static_cast<int>(
        static_cast<std::int64_t>(img.height()) * (by + 1) / grid);
    for (int bx = 0; bx < grid; ++bx) {
      const int x0 = static_cast<int>(
          static_cast<std::int64_t>(img.width()) * bx / grid);
      const int x1 = static_cast<int>(
          static_cast<std::int64_t>(img.width()) * (bx + 1) / grid);
      const ChannelMoments m = region_moments(img, mask, x0, y0, x1, y1);
      if (m.count == 0) continue;
      for (int c = 0; c < 3; ++c) {
        weighted_sum[c] += m.stddev[c] * m.mean[c];
        weight_sum[c] += m.stddev[c];
      }
    }
  }

  IlluminantEstimate result;
  for (int c = 0; c < 3; ++c) {
    result.e[c] = weight_sum[c] > 0.0 ? weighted_sum[c] / weight_sum[c]
                                      : fallback.e[c];
  }
  return result;
}

IlluminantEstimate shades_of_gray(const LinearImage& img,
                                  const PixelMask* mask, double p) {
  check_mask(img, mask);
  if (p < 1.0) {
    throw std::invalid_argument("Minkowski norm p must be at least 1");
  }
  if (p == 1.0) return gray_world(img, mask);

  Vec3 sum{0.0, 0.0, 0.0};
  std::int64_t count = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (mask && mask->excluded(x, y)) continue;
      const Vec3 v = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) sum[c] += std::pow(v[c], p);
      ++count;
    }
  }
  if (count == 0) {
    throw EstimationError("all pixels are masked out");
  }
  IlluminantEstimate result;
  for (int c = 0; c < 3; ++c) {
    result.e[c] = std::pow(sum[c] / count, 1.0 / p);
  }
  return result;
}

}  // namespace sparrow
