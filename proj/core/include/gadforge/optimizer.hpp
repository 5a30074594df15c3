#pragma once

#include "gadforge/params.hpp"

namespace gadforge {

struct AdamOptions {
  double lr = 0.001;
  double weight_decay = 0.01;  // L2 coefficient, added to the gradient of decayed tensors
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

/// One bias-corrected Adam update. L2 regularization enters as
/// weight_decay * theta on the gradient before the moment updates.
template <typename T>
void adam_step(ModelParams<T>& params, const GradSet<T>& grads, const AdamOptions& opts);

/// Throws Error(Numeric) naming the first tensor holding a non-finite value.
template <typename T>
void require_finite(const Weights<T>& w, const char* what);

}  // namespace gadforge
