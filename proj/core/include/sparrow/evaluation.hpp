#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparrow/illuminant.hpp"
#include "sparrow/image.hpp"

namespace sparrow {

/// Angle in degrees between two illuminant directions; symmetric and
/// scale-invariant. Throws std::invalid_argument on zero-norm input.
double angular_error_deg(const Vec3& a, const Vec3& b);

struct ErrorStats {
  double mean = 0.0;
  double median = 0.0;
  double trimean = 0.0;  // (Q1 + 2*Q2 + Q3) / 4, interpolated quartiles
  double max = 0.0;
  int count = 0;
  double total_time_s = 0.0;
};

/// Linearly interpolated quantile of a sorted sample (position
/// 1 + (n-1)*q).
double quantile_sorted(const std::vector<double>& sorted, double q);

ErrorStats summarize(std::vector<double> errors_deg, double total_time_s);

struct MaskRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

struct ManifestEntry {
  std::string image_path;
  Vec3 groundtruth{0.0, 0.0, 0.0};
  std::vector<MaskRect> mask_rects;
};

/// CSV manifest: header `image,gt_r,gt_g,gt_b,mask`, mask a
/// semicolon-separated list of x:y:w:h rectangles (may be empty).
struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  static DatasetManifest load(const std::string& path);
  void save(const std::string& path) const;
};

using EstimatorFn =
    std::function<IlluminantEstimate(const LinearImage&, const PixelMask*)>;

struct ImageResult {
  std::string image;
  double error_deg = 0.0;
  double time_ms = 0.0;  // estimation only, excludes image loading
  bool ok = true;
  std::string message;
};

struct EvaluationReport {
  ErrorStats stats;
  std::vector<ImageResult> per_image;
  int skipped = 0;
};

/// Runs the estimator on every manifest entry (load, mask, estimate,
/// angular error vs ground truth) and aggregates. Images that fail to
/// load are reported, skipped and counted. total_time_s is the wall
/// time of the whole pass including image loading.
EvaluationReport evaluate(const DatasetManifest& manifest,
                          const EstimatorFn& estimator);

/// Per-image results as CSV: image,error_deg,time_ms. Timing can be
/// omitted to make the output byte-reproducible across runs.
void write_results_csv(const EvaluationReport& report, std::ostream& out,
                       bool include_timing = true);

/// Fixed-column stats table for human consumption.
void write_stats_table(const std::string& method, const ErrorStats& stats,
                       std::ostream& out);

struct BenchResult {
  std::string name;
  double avg_seconds = 0.0;
  std::vector<double> samples_s;
};

struct NamedEstimator {
  std::string name;
  EstimatorFn fn;
};

/// Times full evaluate passes (including image loading) per estimator,
/// averaged over `repeats` runs.
std::vector<BenchResult> bench(const DatasetManifest& manifest,
                               const std::vector<NamedEstimator>& estimators,
                               int repeats);

}  // namespace sparrow
