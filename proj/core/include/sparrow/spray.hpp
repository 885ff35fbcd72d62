#pragma once

#include <cstdint>
#include <vector>

#include "sparrow/image.hpp"

namespace sparrow {

/// Random spray configuration. radius <= 0 means "use the image diagonal".
struct SprayParams {
  int num_sprays = 20;       // N
  int points_per_spray = 400;  // n
  double radius = 0.0;
  std::uint64_t seed = 0;
};

/// Point set used as a pixel's comparison neighbourhood. The spray
/// center is always the last entry.
struct Spray {
  std::vector<Pixel> points;
};

/// Counter-style generator (splitmix64); one independent stream per
/// (seed, pixel, spray) triple so results do not depend on evaluation
/// order. state() seeds the per-candidate counters of spray generation.
class SprayRng {
 public:
  SprayRng(std::uint64_t seed, std::uint64_t pixel_index,
           std::uint64_t spray_index);

  std::uint64_t next();
  double uniform();  // [0, 1)
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Draws n candidate points around `center` with radius rho = R*u
/// (u uniform) and uniform direction; candidates falling outside the
/// image are discarded, the center is appended last. Deterministic in
/// (params.seed, center, spray_index).
Spray generate_spray(Pixel center, int width, int height,
                     const SprayParams& params, int spray_index);

/// Spray-based Retinex lightness of one pixel, per channel:
/// average over N sprays of (I_c + eps) / (max over spray of I_c + eps).
/// Always in (0, 1] since the center belongs to every spray.
/// If a mask is given, masked spray points other than the center are
/// skipped when taking the maximum.
Vec3 rsr_lightness(const LinearImage& img, Pixel pixel,
                   const SprayParams& params,
                   const PixelMask* mask = nullptr);

/// Whole-image spray Retinex rendering (lightness at every pixel).
/// threads = 0 uses all hardware threads.
LinearImage rsr_render(const LinearImage& img, const SprayParams& params,
                       int threads = 0);

}  // namespace sparrow
