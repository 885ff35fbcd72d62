#pragma once

#include <vector>

#include "sparrow/illuminant.hpp"
#include "sparrow/image.hpp"
#include "sparrow/spray.hpp"

namespace sparrow {

enum class Weighting {
  kWeighted,  // sum of p(i)
  kUnit,      // sum of p(i)/||p(i)||
};

/// Sparrow estimator parameters. Defaults are the tuned operating
/// point: N=1, n=225, 5x5 averaging kernel, row/column step 50.
struct CsParams {
  SprayParams spray{.num_sprays = 1, .points_per_spray = 225};
  int kernel_size = 5;  // 1 disables smoothing
  int row_step = 50;
  int col_step = 50;
  Weighting weighting = Weighting::kWeighted;

  void validate() const;
};

/// Local illuminant estimate at one pixel: per-channel ratio of the
/// (optionally window-averaged) original intensity to its spray-Retinex
/// lightness, with w = ||p||.
struct LocalChange {
  Pixel position;
  Vec3 p{0.0, 0.0, 0.0};
  double w = 0.0;
};

LocalChange local_change(const LinearImage& img, Pixel pixel,
                         const CsParams& params,
                         const PixelMask* mask = nullptr);

/// Row/column subsampling grid anchored at (0,0); masked coordinates
/// are dropped.
std::vector<Pixel> sample_grid(int width, int height, const PixelMask* mask,
                               int row_step, int col_step);

/// Global illuminant estimate: accumulates local changes over the
/// sampling grid. Deterministic for fixed (image, mask, params)
/// regardless of thread count. Throws EstimationError when the grid is
/// empty or the accumulated estimate is all zero.
IlluminantEstimate estimate(const LinearImage& img, const PixelMask* mask,
                            const CsParams& params, int threads = 0);

}  // namespace sparrow
