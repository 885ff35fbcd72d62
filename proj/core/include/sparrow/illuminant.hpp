#pragma once

#include <cmath>

#include "sparrow/image.hpp"

namespace sparrow {

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Non-negative RGB vector whose direction is the illuminant estimate.
struct IlluminantEstimate {
  Vec3 e{0.0, 0.0, 0.0};

  Vec3 normalized() const;
};

/// Per-channel gain correction discounting the estimated illuminant.
/// Gains are 1/e_c scaled so the largest gain is 1; output clipped to [0,1].
LinearImage diagonal_correct(const LinearImage& img,
                             const IlluminantEstimate& estimate);

}  // namespace sparrow
