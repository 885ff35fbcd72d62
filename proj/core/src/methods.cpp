#include "sparrow/methods.hpp"

namespace sparrow {

Method parse_method(const std::string& name) {
  if (name == "cs") return Method::kCs;
  if (name == "gray-world") return Method::kGrayWorld;
  if (name == "sdwgw") return Method::kSdwgw;
  if (name == "shades-of-gray") return Method::kShadesOfGray;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kCs:
      return "cs";
    case Method::kGrayWorld:
      return "gray-world";
    case Method::kSdwgw:
      return "sdwgw";
    case Method::kShadesOfGray:
      return "shades-of-gray";
  }
  return "unknown";
}

IlluminantEstimate run_estimator(const EstimatorConfig& config,
                                 const LinearImage& img,
                                 const PixelMask* mask) {
  switch (config.method) {
    case Method::kCs:
      return estimate(img, mask, config.cs, config.threads);
    case Method::kGrayWorld:
      return gray_world(img, mask);
    case Method::kSdwgw:
      return sdwgw(img, mask, config.sdwgw_blocks);
    case Method::kShadesOfGray:
      return shades_of_gray(img, mask, config.shades_p);
  }
  throw std::invalid_argument("unknown method");
}

EstimatorFn make_estimator(const EstimatorConfig& config) {
  return [config](const LinearImage& img, const PixelMask* mask) {
    return run_estimator(config, img, mask);
  };
}

}  // namespace sparrow
