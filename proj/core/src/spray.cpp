#include "sparrow/spray.hpp"

#include <algorithm>
#include <cmath>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#endif

#include "sparrow/parallel.hpp"

namespace sparrow {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

inline double effective_radius(const SprayParams& params, int width,
                               int height) {
  return params.radius > 0.0
             ? params.radius
             : std::hypot(static_cast<double>(width),
                          static_cast<double>(height));
}

// Candidate point scheme. One accepted unit-disk rejection draw (a, b)
// yields both parts of a point: s = a^2 + b^2 is U(0,1] and independent
// of the direction, so rho = R*s is the uniform radius and the offset
// is (a, b) * R * sqrt(s). Candidate i draws its 64-bit values from the
// counter base + (i+1)*kGamma + k*kBeta (retry k), so candidates are
// independent of each other: the sequence is identical whether they are
// produced one at a time or eight per vector. generate_spray and the
// lightness scan share these helpers and see identical point sequences.
//
// This file is built with -ffp-contract=off so the scalar a*a + b*b
// cannot be fused into an fma, which would disagree with the vector
// path in the last bit and change rejection decisions.

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kBeta = 0xbf58476d1ce4e5b9ULL;
constexpr double kMinS = 1e-24;

inline std::uint64_t sm_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline void scalar_candidate(std::uint64_t base, int i, Pixel center,
                             double radius, int& x, int& y) {
  std::uint64_t input = base + (static_cast<std::uint64_t>(i) + 1) * kGamma;
  double a, b, s;
  for (;;) {
    const std::uint64_t v = sm_mix(input);
    a = static_cast<std::int32_t>(static_cast<std::uint32_t>(v)) * 0x1p-31;
    b = static_cast<std::int32_t>(static_cast<std::uint32_t>(v >> 32)) *
        0x1p-31;
    const double aa = a * a;
    const double bb = b * b;
    s = aa + bb;
    if (s <= 1.0 && s > kMinS) break;
    input += kBeta;
  }
  const double scale = radius * std::sqrt(s);
  x = center.x + static_cast<int>(std::lrint(a * scale));
  y = center.y + static_cast<int>(std::lrint(b * scale));
}

#if defined(__x86_64__) && defined(__GNUC__)
#define SPARROW_X86_BATCH 1

__attribute__((target("avx512f,avx512dq,avx512vl"))) inline __m512i
sm_mix_v(__m512i z) {
  z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 30)),
                         _mm512_set1_epi64(0xbf58476d1ce4e5b9ULL));
  z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 27)),
                         _mm512_set1_epi64(0x94d049bb133111ebULL));
  return _mm512_xor_si512(z, _mm512_srli_epi64(z, 31));
}

// Eight candidates i0..i0+7 at once; exact same arithmetic as
// scalar_candidate lane by lane.
__attribute__((target("avx512f,avx512dq,avx512vl"))) void gen_batch8(
    std::uint64_t base, int i0, Pixel center, double radius, int* xs,
    int* ys) {
  const std::uint64_t first =
      base + (static_cast<std::uint64_t>(i0) + 1) * kGamma;
  __m512i input = _mm512_add_epi64(
      _mm512_set1_epi64(static_cast<long long>(first)),
      _mm512_mullo_epi64(_mm512_set_epi64(7, 6, 5, 4, 3, 2, 1, 0),
                         _mm512_set1_epi64(kGamma)));
  const __m512d to_unit = _mm512_set1_pd(0x1p-31);
  __m512d a = _mm512_setzero_pd();
  __m512d b = _mm512_setzero_pd();
  __m512d s = _mm512_setzero_pd();
  __mmask8 pending = 0xff;
  do {
    const __m512i v = sm_mix_v(input);
    const __m512d na = _mm512_mul_pd(
        _mm512_cvtepi32_pd(_mm512_cvtepi64_epi32(v)), to_unit);
    const __m512d nb = _mm512_mul_pd(
        _mm512_cvtepi32_pd(_mm512_cvtepi64_epi32(_mm512_srli_epi64(v, 32))),
        to_unit);
    const __m512d ns = _mm512_add_pd(_mm512_mul_pd(na, na),
                                     _mm512_mul_pd(nb, nb));
    const __mmask8 ok =
        _mm512_cmp_pd_mask(ns, _mm512_set1_pd(1.0), _CMP_LE_OQ) &
        _mm512_cmp_pd_mask(ns, _mm512_set1_pd(kMinS), _CMP_GT_OQ);
    const __mmask8 newly = pending & ok;
    a = _mm512_mask_mov_pd(a, newly, na);
    b = _mm512_mask_mov_pd(b, newly, nb);
    s = _mm512_mask_mov_pd(s, newly, ns);
    pending &= ~ok;
    input = _mm512_mask_add_epi64(input, pending, input,
                                  _mm512_set1_epi64(kBeta));
  } while (pending);
  const __m512d scale =
      _mm512_mul_pd(_mm512_set1_pd(radius), _mm512_sqrt_pd(s));
  const __m256i dx = _mm512_cvtpd_epi32(_mm512_mul_pd(a, scale));
  const __m256i dy = _mm512_cvtpd_epi32(_mm512_mul_pd(b, scale));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(xs),
                      _mm256_add_epi32(_mm256_set1_epi32(center.x), dx));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(ys),
                      _mm256_add_epi32(_mm256_set1_epi32(center.y), dy));
}

inline bool batch8_supported() {
  static const bool ok = __builtin_cpu_supports("avx512f") &&
                         __builtin_cpu_supports("avx512dq") &&
                         __builtin_cpu_supports("avx512vl");
  return ok;
}
#endif  // SPARROW_X86_BATCH

// Streams the candidate points of one spray (center excluded) through
// `visit` in candidate order.
template <typename Visit>
inline void for_each_candidate(Pixel center, int n, double radius,
                               std::uint64_t base, Visit&& visit) {
  int i = 0;
#ifdef SPARROW_X86_BATCH
  // The vector path converts offsets through 32-bit integers.
  if (batch8_supported() && radius < 1e9) {
    int xs[8], ys[8];
    for (; i + 8 <= n; i += 8) {
      gen_batch8(base, i, center, radius, xs, ys);
      for (int j = 0; j < 8; ++j) visit(xs[j], ys[j]);
    }
  }
#endif
  for (; i < n; ++i) {
    int x, y;
    scalar_candidate(base, i, center, radius, x, y);
    visit(x, y);
  }
}

}  // namespace

SprayRng::SprayRng(std::uint64_t seed, std::uint64_t pixel_index,
                   std::uint64_t spray_index) {
  std::uint64_t s = mix64(seed + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (pixel_index + 0xbf58476d1ce4e5b9ULL));
  s = mix64(s ^ (spray_index + 0x94d049bb133111ebULL));
  state_ = s;
}

std::uint64_t SprayRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SprayRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1p-53;
}

Spray generate_spray(Pixel center, int width, int height,
                     const SprayParams& params, int spray_index) {
  if (center.x < 0 || center.x >= width || center.y < 0 ||
      center.y >= height) {
    throw std::invalid_argument("spray center out of bounds");
  }
  if (params.num_sprays < 1 || params.points_per_spray < 1) {
    throw std::invalid_argument("spray parameters must be positive");
  }
  const double radius = effective_radius(params, width, height);
  const std::uint64_t pixel_index =
      static_cast<std::uint64_t>(center.y) * width + center.x;
  const SprayRng rng(params.seed, pixel_index,
                     static_cast<std::uint64_t>(spray_index));

  Spray spray;
  spray.points.reserve(params.points_per_spray + 1);
  for_each_candidate(center, params.points_per_spray, radius, rng.state(),
                     [&](int x, int y) {
                       if (x >= 0 && x < width && y >= 0 && y < height) {
                         spray.points.push_back({x, y});
                       }
                     });
  spray.points.push_back(center);
  return spray;
}

Vec3 rsr_lightness(const LinearImage& img, Pixel pixel,
                   const SprayParams& params, const PixelMask* mask) {
  if (!img.in_bounds(pixel.x, pixel.y)) {
    throw std::invalid_argument("pixel out of bounds");
  }
  if (params.num_sprays < 1 || params.points_per_spray < 1) {
    throw std::invalid_argument("spray parameters must be positive");
  }
  const int width = img.width();
  const int height = img.height();
  const double radius = effective_radius(params, width, height);
  const std::uint64_t pixel_index = static_cast<std::uint64_t>(
      img.index(pixel.x, pixel.y));
  if (mask && mask->excluded_count() == 0) mask = nullptr;
  const Vec3 center = img.pixel(pixel.x, pixel.y);

  const double* data = img.data().data();
  Vec3 acc{0.0, 0.0, 0.0};
  for (int k = 0; k < params.num_sprays; ++k) {
    const SprayRng rng(params.seed, pixel_index,
                       static_cast<std::uint64_t>(k));
    Vec3 max = center;  // the center belongs to every spray
    // The point reads hit scattered cache lines across a large image.
    // Buffer the offsets and prefetch as they are produced, then take
    // the maxima in one pass afterwards: by then the lines have arrived,
    // with the misses hidden behind the arithmetic of generation.
    constexpr int kBatch = 384;
    std::size_t offs[kBatch];
    int queued = 0;
    auto flush = [&]() {
      for (int i = 0; i < queued; ++i) {
        const std::size_t off = offs[i];
        max[0] = std::max(max[0], data[off]);
        max[1] = std::max(max[1], data[off + 1]);
        max[2] = std::max(max[2], data[off + 2]);
      }
      queued = 0;
    };
    for_each_candidate(
        pixel, params.points_per_spray, radius, rng.state(),
        [&](int x, int y) {
          if (x < 0 || x >= width || y < 0 || y >= height) return;
          if (mask && mask->excluded(x, y)) return;
          const std::size_t off =
              static_cast<std::size_t>(img.index(x, y)) * 3;
          __builtin_prefetch(data + off);
          __builtin_prefetch(data + off + 2);
          if (queued == kBatch) flush();
          offs[queued++] = off;
        });
    flush();
    for (int c = 0; c < 3; ++c) {
      acc[c] += (center[c] + kIntensityEpsilon) / (max[c] + kIntensityEpsilon);
    }
  }
  const double inv_n = 1.0 / params.num_sprays;
  return {acc[0] * inv_n, acc[1] * inv_n, acc[2] * inv_n};
}

LinearImage rsr_render(const LinearImage& img, const SprayParams& params,
                       int threads) {
  LinearImage out(img.width(), img.height(), img.bit_depth_origin());
  parallel_for(img.pixel_count(), threads, [&](std::int64_t i) {
    const Pixel p{static_cast<int>(i % img.width()),
                  static_cast<int>(i / img.width())};
    out.set_pixel(p.x, p.y, rsr_lightness(img, p, params));
  });
  return out;
}

}  // namespace sparrow
