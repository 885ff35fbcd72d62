#include "sparrow/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "sparrow/png_io.hpp"

namespace sparrow {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::vector<MaskRect> parse_mask_field(const std::string& field,
                                       const std::string& context) {
  std::vector<MaskRect> rects;
  if (field.empty()) return rects;
  for (const std::string& part : split(field, ';')) {
    if (part.empty()) continue;
    const std::vector<std::string> nums = split(part, ':');
    if (nums.size() != 4) {
      throw IoError("bad mask rectangle '" + part + "' in " + context);
    }
    rects.push_back({std::stoi(nums[0]), std::stoi(nums[1]),
                     std::stoi(nums[2]), std::stoi(nums[3])});
  }
  return rects;
}

}  // namespace

double angular_error_deg(const Vec3& a, const Vec3& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na <= 0.0 || nb <= 0.0) {
    throw std::invalid_argument("angular error of a zero-norm vector");
  }
  // atan2 of the cross-product magnitude is exact for parallel vectors
  // and well conditioned near 0 and 180 degrees.
  const Vec3 cross{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]};
  return std::atan2(norm(cross), dot(a, b)) * kRadToDeg;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) {
    throw std::invalid_argument("quantile of an empty sample");
  }
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

ErrorStats summarize(std::vector<double> errors_deg, double total_time_s) {
  if (errors_deg.empty()) {
    throw std::invalid_argument("cannot summarize an empty error list");
  }
  std::sort(errors_deg.begin(), errors_deg.end());
  ErrorStats stats;
  stats.count = static_cast<int>(errors_deg.size());
  stats.mean = std::accumulate(errors_deg.begin(), errors_deg.end(), 0.0) /
               stats.count;
  stats.median = quantile_sorted(errors_deg, 0.5);
  stats.trimean = (quantile_sorted(errors_deg, 0.25) + 2.0 * stats.median +
                   quantile_sorted(errors_deg, 0.75)) /
                  4.0;
  stats.max = errors_deg.back();
  stats.total_time_s = total_time_s;
  return stats;
}

DatasetManifest DatasetManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest '" + path + "'");
  }
  DatasetManifest manifest;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("image,", 0) == 0) continue;  // header
    }
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() < 4 || fields.size() > 5) {
      throw IoError("manifest '" + path + "' line " +
                    std::to_string(line_no) + ": expected 4 or 5 fields");
    }
    ManifestEntry entry;
    entry.image_path = fields[0];
    try {
      entry.groundtruth = {std::stod(fields[1]), std::stod(fields[2]),
                           std::stod(fields[3])};
    } catch (const std::exception&) {
      throw IoError("manifest '" + path + "' line " +
                    std::to_string(line_no) + ": bad ground truth");
    }
    if (norm(entry.groundtruth) <= 0.0 || entry.groundtruth[0] < 0.0 ||
        entry.groundtruth[1] < 0.0 || entry.groundtruth[2] < 0.0) {
      throw IoError("manifest '" + path + "' line " +
                    std::to_string(line_no) +
                    ": ground truth must be non-negative with positive norm");
    }
    if (fields.size() == 5) {
      entry.mask_rects = parse_mask_field(
          fields[4], "manifest line " + std::to_string(line_no));
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void DatasetManifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open manifest '" + path + "' for writing");
  }
  out << "image,gt_r,gt_g,gt_b,mask\n";
  for (const ManifestEntry& entry : entries) {
    out << entry.image_path << ',' << entry.groundtruth[0] << ','
        << entry.groundtruth[1] << ',' << entry.groundtruth[2] << ',';
    for (std::size_t i = 0; i < entry.mask_rects.size(); ++i) {
      const MaskRect& r = entry.mask_rects[i];
      if (i) out << ';';
      out << r.x << ':' << r.y << ':' << r.w << ':' << r.h;
    }
    out << '\n';
  }
}

EvaluationReport evaluate(const DatasetManifest& manifest,
                          const EstimatorFn& estimator) {
  if (manifest.entries.empty()) {
    throw std::invalid_argument("empty manifest");
  }
  EvaluationReport report;
  std::vector<double> errors;
  const auto start = Clock::now();
  for (const ManifestEntry& entry : manifest.entries) {
    ImageResult result;
    result.image = entry.image_path;
    try {
      const LinearImage img = load_png16(entry.image_path);
      PixelMask mask(img.width(), img.height());
      for (const MaskRect& r : entry.mask_rects) {
        mask.exclude_rect(r.x, r.y, r.w, r.h);
      }
      const auto t0 = Clock::now();
      const IlluminantEstimate e = estimator(img, &mask);
      result.time_ms = seconds_since(t0) * 1000.0;
      result.error_deg = angular_error_deg(e.e, entry.groundtruth);
      errors.push_back(result.error_deg);
    } catch (const std::exception& ex) {
      result.ok = false;
      result.message = ex.what();
      ++report.skipped;
    }
    report.per_image.push_back(std::move(result));
  }
  if (errors.empty()) {
    throw EstimationError("no image in the manifest could be evaluated");
  }
  report.stats = summarize(std::move(errors), seconds_since(start));
  return report;
}

void write_results_csv(const EvaluationReport& report, std::ostream& out,
                       bool include_timing) {
  out << (include_timing ? "image,error_deg,time_ms\n" : "image,error_deg\n");
  char buf[64];
  for (const ImageResult& r : report.per_image) {
    if (!r.ok) continue;
    if (include_timing) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.6f", r.error_deg, r.time_ms);
    } else {
      std::snprintf(buf, sizeof(buf), "%.9g", r.error_deg);
    }
    out << r.image << ',' << buf << '\n';
  }
}

void write_stats_table(const std::string& method, const ErrorStats& stats,
                       std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-20s %9s %9s %9s %9s\n", "method",
                "mean (deg)", "median", "trimean", "max");
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-20s %9.2f %9.2f %9.2f %9.2f\n",
                method.c_str(), stats.mean, stats.median, stats.trimean,
                stats.max);
  out << buf;
  std::snprintf(buf, sizeof(buf), "images: %d, total time: %.3f s\n",
                stats.count, stats.total_time_s);
  out << buf;
}

std::vector<BenchResult> bench(const DatasetManifest& manifest,
                               const std::vector<NamedEstimator>& estimators,
                               int repeats) {
  if (repeats < 1) {
    throw std::invalid_argument("repeats must be at least 1");
  }
  std::vector<BenchResult> results;
  for (const NamedEstimator& est : estimators) {
    BenchResult r;
    r.name = est.name;
    for (int i = 0; i < repeats; ++i) {
      const auto t0 = Clock::now();
      (void)evaluate(manifest, est.fn);
      r.samples_s.push_back(seconds_since(t0));
    }
    r.avg_seconds =
        std::accumulate(r.samples_s.begin(), r.samples_s.end(), 0.0) /
        repeats;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace sparrow
