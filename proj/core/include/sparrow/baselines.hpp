#pragma once

#include "sparrow/illuminant.hpp"
#include "sparrow/image.hpp"

namespace sparrow {

/// Per-channel mean over unmasked pixels.
IlluminantEstimate gray_world(const LinearImage& img,
                              const PixelMask* mask = nullptr);

/// Standard-deviation-weighted gray-world: the image is split into a
/// ceil(sqrt(B)) x ceil(sqrt(B)) grid of near-equal blocks and block
/// means are weighted by the block's per-channel population deviation.
/// Channels whose deviations are all zero fall back to the gray-world
/// mean.
IlluminantEstimate sdwgw(const LinearImage& img,
                         const PixelMask* mask = nullptr,
                         int num_blocks = 100);

/// Minkowski-mean estimator: e_c = (mean of I_c^p)^(1/p). p=1 is
/// gray-world; large p approaches max-RGB.
IlluminantEstimate shades_of_gray(const LinearImage& img,
                                  const PixelMask* mask = nullptr,
                                  double p = 6.0);

}  // namespace sparrow
