// Command-line frontend: illuminant estimation, white-balance correction,
// spray-Retinex rendering, dataset evaluation, benchmarking and parameter
// sweeps over one shared parameter set.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparrow/evaluation.hpp"
#include "sparrow/methods.hpp"
#include "sparrow/png_io.hpp"
#include "sparrow/spray.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitEstimation = 3;

struct CliConfig {
  sparrow::EstimatorConfig est;
  std::string image_path;
  std::string manifest_path;
  std::string out_path;
  std::string method = "cs";
  std::string weighting = "weighted";
  std::string illuminant;
  std::vector<int> n_values;
  std::vector<int> kernel_values;
  std::vector<int> step_values;
  std::string methods_csv = "cs,gray-world";
  int repeats = 3;
  bool no_timing = false;
};

void add_common_flags(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--seed", cfg.est.cs.spray.seed, "RNG seed")
      ->default_val(0);
  cmd->add_option("--threads", cfg.est.threads,
                  "worker threads (0 = all cores)")
      ->default_val(0);
  cmd->add_option("--sprays", cfg.est.cs.spray.num_sprays,
                  "number of sprays N")
      ->default_val(1);
  cmd->add_option("--spray-size", cfg.est.cs.spray.points_per_spray,
                  "points per spray n")
      ->default_val(225);
  cmd->add_option("--kernel", cfg.est.cs.kernel_size,
                  "averaging kernel size (odd, 1 = none)")
      ->default_val(5);
  cmd->add_option("--row-step", cfg.est.cs.row_step, "sampling row step r")
      ->default_val(50);
  cmd->add_option("--col-step", cfg.est.cs.col_step, "sampling column step c")
      ->default_val(50);
  cmd->add_option("--weighting", cfg.weighting, "weighted|unit")
      ->default_val("weighted");
  cmd->add_option("--method", cfg.method,
                  "cs|gray-world|sdwgw|shades-of-gray")
      ->default_val("cs");
  cmd->add_option("--blocks", cfg.est.sdwgw_blocks, "sdwgw block count")
      ->default_val(100);
  cmd->add_option("--minkowski-p", cfg.est.shades_p,
                  "shades-of-gray norm p")
      ->default_val(6.0);
}

void finalize_config(CliConfig& cfg) {
  cfg.est.method = sparrow::parse_method(cfg.method);
  if (cfg.weighting == "weighted") {
    cfg.est.cs.weighting = sparrow::Weighting::kWeighted;
  } else if (cfg.weighting == "unit") {
    cfg.est.cs.weighting = sparrow::Weighting::kUnit;
  } else {
    throw std::invalid_argument("weighting must be 'weighted' or 'unit'");
  }
  cfg.est.cs.validate();
  if (cfg.est.shades_p < 1.0) {
    throw std::invalid_argument("Minkowski norm p must be at least 1");
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw sparrow::IoError("cannot open '" + path + "' for writing");
  return file;
}

void print_estimate(const sparrow::IlluminantEstimate& e, std::ostream& out) {
  const sparrow::Vec3 unit = e.normalized();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", unit[0], unit[1],
                unit[2]);
  out << buf;
  std::snprintf(buf, sizeof(buf), "raw: %.9g %.9g %.9g\n", e.e[0], e.e[1],
                e.e[2]);
  out << buf;
}

int cmd_estimate(const CliConfig& cfg) {
  const sparrow::LinearImage img = sparrow::load_png16(cfg.image_path);
  const sparrow::IlluminantEstimate e =
      sparrow::run_estimator(cfg.est, img, nullptr);
  print_estimate(e, std::cout);
  return kExitOk;
}

int cmd_correct(const CliConfig& cfg) {
  const sparrow::LinearImage img = sparrow::load_png16(cfg.image_path);
  sparrow::IlluminantEstimate e;
  if (!cfg.illuminant.empty()) {
    const std::vector<std::string> parts = split_csv(cfg.illuminant);
    if (parts.size() != 3) {
      throw std::invalid_argument("--illuminant expects r,g,b");
    }
    e.e = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
  } else {
    e = sparrow::run_estimator(cfg.est, img, nullptr);
  }
  sparrow::save_png16(sparrow::diagonal_correct(img, e), cfg.out_path);
  print_estimate(e, std::cerr);
  return kExitOk;
}

int cmd_rsr_render(const CliConfig& cfg) {
  const sparrow::LinearImage img = sparrow::load_png16(cfg.image_path);
  sparrow::save_png16(
      sparrow::rsr_render(img, cfg.est.cs.spray, cfg.est.threads),
      cfg.out_path);
  return kExitOk;
}

int cmd_evaluate(const CliConfig& cfg) {
  const sparrow::DatasetManifest manifest =
      sparrow::DatasetManifest::load(cfg.manifest_path);
  const sparrow::EvaluationReport report =
      sparrow::evaluate(manifest, sparrow::make_estimator(cfg.est));
  std::ofstream file;
  sparrow::write_results_csv(report, open_output(cfg.out_path, file),
                             !cfg.no_timing);
  sparrow::write_stats_table(cfg.method, report.stats, std::cerr);
  if (report.skipped > 0) {
    std::cerr << "skipped " << report.skipped << " unloadable image(s)\n";
    for (const sparrow::ImageResult& r : report.per_image) {
      if (!r.ok) std::cerr << "  " << r.image << ": " << r.message << '\n';
    }
  }
  return kExitOk;
}

int cmd_bench(const CliConfig& cfg) {
  const sparrow::DatasetManifest manifest =
      sparrow::DatasetManifest::load(cfg.manifest_path);
  std::vector<sparrow::NamedEstimator> estimators;
  for (const std::string& name : split_csv(cfg.methods_csv)) {
    sparrow::EstimatorConfig est = cfg.est;
    est.method = sparrow::parse_method(name);
    estimators.push_back({name, sparrow::make_estimator(est)});
  }
  if (estimators.empty()) {
    throw std::invalid_argument("no methods to benchmark");
  }
  const std::vector<sparrow::BenchResult> results =
      sparrow::bench(manifest, estimators, cfg.repeats);
  std::ofstream file;
  std::ostream& out = open_output(cfg.out_path, file);
  out << "method,avg_seconds\n";
  char buf[64];
  for (const sparrow::BenchResult& r : results) {
    std::snprintf(buf, sizeof(buf), ",%.6f\n", r.avg_seconds);
    out << r.name << buf;
    std::cerr << r.name << ": " << r.avg_seconds << " s avg over "
              << cfg.repeats << " run(s)\n";
  }
  return kExitOk;
}

int cmd_sweep(const CliConfig& cfg) {
  const sparrow::DatasetManifest manifest =
      sparrow::DatasetManifest::load(cfg.manifest_path);
  std::vector<int> ns = cfg.n_values;
  std::vector<int> kernels = cfg.kernel_values;
  std::vector<int> steps = cfg.step_values;
  if (ns.empty()) ns.push_back(cfg.est.cs.spray.points_per_spray);
  if (kernels.empty()) kernels.push_back(cfg.est.cs.kernel_size);
  if (steps.empty()) steps.push_back(cfg.est.cs.row_step);

  std::ofstream file;
  std::ostream& out = open_output(cfg.out_path, file);
  out << "n,kernel,step,mean,median,trimean,max,time_s\n";
  char buf[192];
  for (const int n : ns) {
    for (const int kernel : kernels) {
      for (const int step : steps) {
        sparrow::EstimatorConfig est = cfg.est;
        est.method = sparrow::Method::kCs;
        est.cs.spray.points_per_spray = n;
        est.cs.kernel_size = kernel;
        est.cs.row_step = step;
        est.cs.col_step = step;
        est.cs.validate();
        const sparrow::EvaluationReport report =
            sparrow::evaluate(manifest, sparrow::make_estimator(est));
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", n, kernel, step,
                      report.stats.mean, report.stats.median,
                      report.stats.trimean, report.stats.max,
                      report.stats.total_time_s);
        out << buf;
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spray-Retinex color constancy toolkit"};
  app.require_subcommand(1);

  CliConfig cfg;

  CLI::App* estimate = app.add_subcommand(
      "estimate", "Estimate the global illuminant of one image");
  estimate->add_option("image", cfg.image_path, "input PNG")->required();
  add_common_flags(estimate, cfg);

  CLI::App* correct = app.add_subcommand(
      "correct", "White-balance an image with an estimated or given "
                 "illuminant");
  correct->add_option("image", cfg.image_path, "input PNG")->required();
  correct->add_option("--out", cfg.out_path, "output PNG")->required();
  correct->add_option("--illuminant", cfg.illuminant,
                      "override estimate with r,g,b");
  add_common_flags(correct, cfg);

  CLI::App* render = app.add_subcommand(
      "rsr-render", "Render the spray-Retinex lightness image");
  render->add_option("image", cfg.image_path, "input PNG")->required();
  render->add_option("--out", cfg.out_path, "output PNG")->required();
  add_common_flags(render, cfg);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Run an estimator over a dataset manifest");
  evaluate->add_option("manifest", cfg.manifest_path, "manifest CSV")
      ->required();
  evaluate->add_option("--out", cfg.out_path, "per-image results CSV");
  evaluate->add_flag("--no-timing", cfg.no_timing,
                     "omit time_ms for byte-reproducible output");
  add_common_flags(evaluate, cfg);

  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Time estimators over a manifest");
  bench_cmd->add_option("manifest", cfg.manifest_path, "manifest CSV")
      ->required();
  bench_cmd->add_option("--methods", cfg.methods_csv,
                        "comma-separated method list")
      ->default_val("cs,gray-world");
  bench_cmd->add_option("--repeats", cfg.repeats, "runs per method")
      ->default_val(3);
  bench_cmd->add_option("--out", cfg.out_path, "timing CSV");
  add_common_flags(bench_cmd, cfg);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Evaluate a grid of sparrow parameters");
  sweep->add_option("manifest", cfg.manifest_path, "manifest CSV")
      ->required();
  sweep->add_option("--n-values", cfg.n_values, "spray sizes to sweep")
      ->delimiter(',');
  sweep->add_option("--kernel-values", cfg.kernel_values,
                    "kernel sizes to sweep")
      ->delimiter(',');
  sweep->add_option("--step-values", cfg.step_values,
                    "row/column steps to sweep (r = c)")
      ->delimiter(',');
  sweep->add_option("--out", cfg.out_path, "sweep CSV");
  add_common_flags(sweep, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    finalize_config(cfg);
    if (bench_cmd->parsed() && !bench_cmd->count("--threads")) {
      cfg.est.threads = 1;
    }
    if (estimate->parsed()) return cmd_estimate(cfg);
    if (correct->parsed()) return cmd_correct(cfg);
    if (render->parsed()) return cmd_rsr_render(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg);
    if (bench_cmd->parsed()) return cmd_bench(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sparrow::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const sparrow::EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
