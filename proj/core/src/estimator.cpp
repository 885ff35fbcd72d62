#include "sparrow/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "sparrow/parallel.hpp"

namespace sparrow {

void CsParams::validate() const {
  if (spray.num_sprays < 1) {
    throw std::invalid_argument("number of sprays must be at least 1");
  }
  if (spray.points_per_spray < 1) {
    throw std::invalid_argument("spray size must be at least 1");
  }
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw std::invalid_argument("kernel size must be odd");
  }
  if (row_step < 1 || col_step < 1) {
    throw std::invalid_argument("row/column steps must be at least 1");
  }
}

LocalChange local_change(const LinearImage& img, Pixel pixel,
                         const CsParams& params, const PixelMask* mask) {
  params.validate();
  if (!img.in_bounds(pixel.x, pixel.y)) {
    throw std::invalid_argument("pixel out of bounds");
  }

  const int half = params.kernel_size / 2;
  Vec3 sum_i{0.0, 0.0, 0.0};
  Vec3 sum_r{0.0, 0.0, 0.0};
  // Window averages with clamp-to-edge replication; the Retinex
  // lightness is computed only at the window's pixels.
  for (int dy = -half; dy <= half; ++dy) {
    const int y = std::clamp(pixel.y + dy, 0, img.height() - 1);
    for (int dx = -half; dx <= half; ++dx) {
      const int x = std::clamp(pixel.x + dx, 0, img.width() - 1);
      const Vec3 i = img.pixel(x, y);
      const Vec3 r = rsr_lightness(img, {x, y}, params.spray, mask);
      for (int c = 0; c < 3; ++c) {
        sum_i[c] += i[c];
        sum_r[c] += r[c];
      }
    }
  }

  LocalChange change;
  change.position = pixel;
  const double count = static_cast<double>(params.kernel_size) *
                       params.kernel_size;
  for (int c = 0; c < 3; ++c) {
    const double mean_i = sum_i[c] / count;
    const double mean_r = sum_r[c] / count;  // > 0 by construction
    change.p[c] = (mean_i + kIntensityEpsilon) / mean_r - kIntensityEpsilon;
  }
  change.w = norm(change.p);
  return change;
}

std::vector<Pixel> sample_grid(int width, int height, const PixelMask* mask,
                               int row_step, int col_step) {
  if (row_step < 1 || col_step < 1) {
    throw std::invalid_argument("row/column steps must be at least 1");
  }
  std::vector<Pixel> grid;
  for (int y = 0; y < height; y += row_step) {
    for (int x = 0; x < width; x += col_step) {
      if (mask && mask->excluded(x, y)) continue;
      grid.push_back({x, y});
    }
  }
  return grid;
}

IlluminantEstimate estimate(const LinearImage& img, const PixelMask* mask,
                            const CsParams& params, int threads) {
  params.validate();
  if (mask &&
      (mask->width() != img.width() || mask->height() != img.height())) {
    throw std::invalid_argument("mask dimensions do not match the image");
  }
  const std::vector<Pixel> grid =
      sample_grid(img.width(), img.height(), mask, params.row_step,
                  params.col_step);
  if (grid.empty()) {
    throw EstimationError("sampling grid is empty (mask excludes all pixels)");
  }

  std::vector<LocalChange> changes(grid.size());
  parallel_for(static_cast<std::int64_t>(grid.size()), threads,
               [&](std::int64_t i) {
                 changes[i] = local_change(img, grid[i], params, mask);
               });

  // Serial accumulation in grid order keeps the result independent of
  // the thread count.
  IlluminantEstimate result;
  for (const LocalChange& change : changes) {
    if (params.weighting == Weighting::kWeighted) {
      for (int c = 0; c < 3; ++c) result.e[c] += change.p[c];
    } else {
      if (change.w <= 0.0) continue;
      for (int c = 0; c < 3; ++c) result.e[c] += change.p[c] / change.w;
    }
  }
  if (norm(result.e) <= 0.0) {
    throw EstimationError("accumulated illuminant estimate is zero");
  }
  return result;
}

}  // namespace sparrow
