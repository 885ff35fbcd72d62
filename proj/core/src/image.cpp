#include "sparrow/image.hpp"

#include <algorithm>
#include <cmath>

#include "sparrow/illuminant.hpp"
#include "sparrow/parallel.hpp"

#include <numeric>
#include <thread>

#ifdef __linux__
#include <sys/mman.h>
#endif

namespace sparrow {

namespace {

// Spray sampling reads the raster at random positions; huge pages keep
// the whole buffer's translations resident for large images.
void advise_huge_pages(void* ptr, std::size_t bytes) {
#ifdef __linux__
  constexpr std::size_t kPage = 4096;
  const auto addr = reinterpret_cast<std::uintptr_t>(ptr);
  const std::uintptr_t first = (addr + kPage - 1) & ~(kPage - 1);
  const std::uintptr_t last = (addr + bytes) & ~(kPage - 1);
  if (last > first) {
    madvise(reinterpret_cast<void*>(first), last - first, MADV_HUGEPAGE);
  }
#else
  (void)ptr;
  (void)bytes;
#endif
}

}  // namespace

LinearImage::LinearImage(int width, int height, int bit_depth_origin)
    : width_(width), height_(height), bit_depth_origin_(bit_depth_origin) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be at least 1x1");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height * 3;
  data_.reserve(n);  // advise before the first touch
  advise_huge_pages(data_.data(), n * sizeof(double));
  data_.assign(n, 0.0);
}

double LinearImage::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

PixelMask::PixelMask(int width, int height, bool excluded)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("mask dimensions must be at least 1x1");
  }
  excluded_.assign(static_cast<std::size_t>(width) * height,
                   excluded ? 1 : 0);
  count_ = excluded ? static_cast<std::int64_t>(width) * height : 0;
}

void PixelMask::exclude_rect(int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 0 || h < 0 || x + w > width_ || y + h > height_) {
    throw std::invalid_argument("mask rectangle out of bounds");
  }
  for (int yy = y; yy < y + h; ++yy) {
    for (int xx = x; xx < x + w; ++xx) {
      set_excluded(xx, yy, true);
    }
  }
}

Kernel::Kernel(int size_) : size(size_) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("kernel size must be odd and positive");
  }
}

namespace {

// 1-D running box sum along x for one channel, clamp-to-edge.
void box_pass_x(const LinearImage& src, LinearImage& dst, int half) {
  const int w = src.width();
  const int h = src.height();
  const double inv = 1.0 / (2 * half + 1);
  for (int y = 0; y < h; ++y) {
    Vec3 sum{0.0, 0.0, 0.0};
    for (int k = -half; k <= half; ++k) {
      const int x = std::clamp(k, 0, w - 1);
      for (int c = 0; c < 3; ++c) sum[c] += src.at(x, y, c);
    }
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) dst.at(x, y, c) = sum[c] * inv;
      const int enter = std::clamp(x + half + 1, 0, w - 1);
      const int leave = std::clamp(x - half, 0, w - 1);
      for (int c = 0; c < 3; ++c) {
        sum[c] += src.at(enter, y, c) - src.at(leave, y, c);
      }
    }
  }
}

void box_pass_y(const LinearImage& src, LinearImage& dst, int half) {
  const int w = src.width();
  const int h = src.height();
  const double inv = 1.0 / (2 * half + 1);
  for (int x = 0; x < w; ++x) {
    Vec3 sum{0.0, 0.0, 0.0};
    for (int k = -half; k <= half; ++k) {
      const int y = std::clamp(k, 0, h - 1);
      for (int c = 0; c < 3; ++c) sum[c] += src.at(x, y, c);
    }
    for (int y = 0; y < h; ++y) {
      for (int c = 0; c < 3; ++c) dst.at(x, y, c) = sum[c] * inv;
      const int enter = std::clamp(y + half + 1, 0, h - 1);
      const int leave = std::clamp(y - half, 0, h - 1);
      for (int c = 0; c < 3; ++c) {
        sum[c] += src.at(x, enter, c) - src.at(x, leave, c);
      }
    }
  }
}

}  // namespace

LinearImage box_blur(const LinearImage& img, const Kernel& kernel) {
  if (kernel.size > 2 * std::min(img.width(), img.height()) - 1) {
    throw std::invalid_argument("kernel larger than twice the image extent");
  }
  if (kernel.size == 1) return img;
  const int half = kernel.size / 2;
  LinearImage tmp(img.width(), img.height(), img.bit_depth_origin());
  LinearImage out(img.width(), img.height(), img.bit_depth_origin());
  box_pass_x(img, tmp, half);
  box_pass_y(tmp, out, half);
  return out;
}

Vec3 IlluminantEstimate::normalized() const {
  const double n = norm(e);
  if (n <= 0.0) {
    throw EstimationError("illuminant estimate has zero norm");
  }
  return {e[0] / n, e[1] / n, e[2] / n};
}

LinearImage diagonal_correct(const LinearImage& img,
                             const IlluminantEstimate& estimate) {
  const Vec3& e = estimate.e;
  if (e[0] <= 0.0 || e[1] <= 0.0 || e[2] <= 0.0) {
    throw std::invalid_argument(
        "diagonal correction needs strictly positive estimate components");
  }
  // Gains proportional to 1/e_c, scaled so the largest gain is 1.
  const double e_min = std::min({e[0], e[1], e[2]});
  const Vec3 gain{e_min / e[0], e_min / e[1], e_min / e[2]};
  LinearImage out(img.width(), img.height(), img.bit_depth_origin());
  const std::size_t n = img.data().size();
  for (std::size_t i = 0; i < n; ++i) {
    out.data()[i] = std::clamp(img.data()[i] * gain[i % 3], 0.0, 1.0);
  }
  return out;
}

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(
      std::min<std::int64_t>(workers, n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    const std::int64_t begin = n * t / workers;
    const std::int64_t end = n * (t + 1) / workers;
    pool.emplace_back([begin, end, &fn] {
      for (std::int64_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sparrow
