#pragma once

#include "craic/neural/params.hpp"
#include "craic/neural/train.hpp"

#include <string>
#include <vector>

namespace craic::neural {

struct BlockCheck {
  std::string name;
  double maxRelativeError = 0;
  Eigen::Index worstIndex = 0;
  double analytic = 0;
  double numeric = 0;
};

struct GradientCheckReport {
  double maxRelativeError = 0;
  std::vector<BlockCheck> blocks;
};

/// Compares the analytic gradient of the summed sequence loss over `sample`
/// with central differences, one parameter at a time:
///   err = |a - n| / max(1e-8, |a| + |n|)
/// The method side of each example is ignored for language models.
GradientCheckReport gradientCheck(const ModelParams<double>& params, const std::vector<PairExample>& sample,
                                  double step = 1e-4);

/// Builds a random model from the shape, seed, init scale and forget bias of
/// `config`, then checks it. Sizes are limited to K <= 16 and V <= 32.
GradientCheckReport gradientCheck(ModelKind kind, const ModelConfig& config,
                                  const std::vector<PairExample>& sample, double step = 1e-4);

}  // namespace craic::neural
