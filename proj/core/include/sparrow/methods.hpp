#pragma once

#include <string>

#include "sparrow/baselines.hpp"
#include "sparrow/estimator.hpp"
#include "sparrow/evaluation.hpp"

namespace sparrow {

enum class Method {
  kCs,
  kGrayWorld,
  kSdwgw,
  kShadesOfGray,
};

Method parse_method(const std::string& name);  // throws std::invalid_argument
std::string method_name(Method method);

/// One bundle covering every selectable estimator's parameters.
struct EstimatorConfig {
  Method method = Method::kCs;
  CsParams cs;
  int sdwgw_blocks = 100;
  double shades_p = 6.0;
  int threads = 0;
};

IlluminantEstimate run_estimator(const EstimatorConfig& config,
                                 const LinearImage& img,
                                 const PixelMask* mask);

/// Adapter for the evaluation harness.
EstimatorFn make_estimator(const EstimatorConfig& config);

}  // namespace sparrow
