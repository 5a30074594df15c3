#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gadforge/objective.hpp"

namespace gadforge {

struct GradCheckGroup {
  std::string name;
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;

  double worst() const noexcept;
  bool passed(double tolerance) const noexcept { return worst() <= tolerance; }
  /// Group whose name starts with `prefix` and has the largest error, or null.
  const GradCheckGroup* find(const std::string& prefix) const noexcept;
};

struct GradCheckOptions {
  double step = 1e-5;
  /// Coordinates checked per tensor; 0 checks all of them, otherwise a
  /// random subset of this size.
  std::size_t max_coordinates = 0;
  /// Relative error is |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  std::uint64_t seed = 0;
};

/// Central differences against `analytic` for every tensor in `params`.
/// `loss` is re-evaluated after each coordinate perturbation.
GradCheckReport finite_difference_check(const std::vector<TensorRef<double>>& params,
                                        const std::function<double()>& loss,
                                        const std::vector<ConstTensorRef<double>>& analytic,
                                        const GradCheckOptions& opts);

/// Hook that may alter the analytic gradient before comparison.
using GradientTamper = std::function<void(GradSet<double>&)>;

/// Checks the full objective (real + weighted synthetic terms).
GradCheckReport grad_check(const Graph& clean, const Graph& perturbed, Weights<double> weights,
                           const ObjectiveSpec& spec, const GradCheckOptions& opts,
                           const GradientTamper& tamper = {});

struct GradCheckSetup {
  std::size_t nodes = 30;
  std::size_t dim = 8;
  std::size_t hidden = 8;
  double edge_probability = 0.15;
  std::size_t per_type = 2;      // s
  std::size_t labeled = 3;       // m
  std::size_t real_batch = 32;
  double lambda = 4.0;
  std::uint64_t seed = 0;
};

/// Random graph, one synthetic batch per type and one real batch, on a
/// down-sized model in double precision.
GradCheckReport grad_check_random(const GradCheckSetup& setup, const GradCheckOptions& opts = {},
                                  const GradientTamper& tamper = {});

}  // namespace gadforge
