#include "gadforge/optimizer.hpp"

#include <cmath>
#include <string>

namespace gadforge {

void AdamOptions::validate() const {
  if (!(lr > 0.0)) throw Error(ErrorKind::Config, "learning rate must be > 0");
  if (!(weight_decay >= 0.0)) throw Error(ErrorKind::Config, "weight decay must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw Error(ErrorKind::Config, "Adam betas must lie in [0, 1)");
  if (!(eps > 0.0)) throw Error(ErrorKind::Config, "Adam epsilon must be > 0");
}

template <typename T>
void adam_step(ModelParams<T>& params, const GradSet<T>& grads, const AdamOptions& opts) {
  opts.validate();
  auto theta = params.weights.tensors();
  auto first = params.adam.first.tensors();
  auto second = params.adam.second.tensors();
  const auto g = grads.tensors();
  if (theta.size() != g.size()) throw Error(ErrorKind::Contract, "gradient set layout mismatch");

  params.adam.step += 1;
  const auto t = static_cast<double>(params.adam.step);
  const T b1 = static_cast<T>(opts.beta1), b2 = static_cast<T>(opts.beta2);
  const T correction1 = static_cast<T>(1.0 - std::pow(opts.beta1, t));
  const T correction2 = static_cast<T>(1.0 - std::pow(opts.beta2, t));
  const T lr = static_cast<T>(opts.lr);
  const T eps = static_cast<T>(opts.eps);
  const T wd = static_cast<T>(opts.weight_decay);

  for (std::size_t k = 0; k < theta.size(); ++k) {
    Matrix<T>& p = *theta[k].tensor;
    Matrix<T>& m = *first[k].tensor;
    Matrix<T>& v = *second[k].tensor;
    const Matrix<T>& gk = *g[k].tensor;
    if (!p.same_shape(gk) || !p.same_shape(m) || !p.same_shape(v))
      throw Error(ErrorKind::Contract, "shape mismatch in tensor " + theta[k].name);
    const bool decayed = theta[k].decayed && wd != T{};
    for (std::size_t i = 0; i < p.size(); ++i) {
      const T grad = decayed ? gk[i] + wd * p[i] : gk[i];
      m[i] = b1 * m[i] + (T{1} - b1) * grad;
      v[i] = b2 * v[i] + (T{1} - b2) * grad * grad;
      const T m_hat = m[i] / correction1;
      const T v_hat = v[i] / correction2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

template <typename T>
void require_finite(const Weights<T>& w, const char* what) {
  for (const auto& ref : w.tensors()) {
    for (const T x : ref.tensor->values()) {
      if (!std::isfinite(x))
        throw Error(ErrorKind::Numeric, std::string("non-finite ") + what + " in tensor " + ref.name);
    }
  }
}

template void adam_step<float>(ModelParams<float>&, const GradSet<float>&, const AdamOptions&);
template void adam_step<double>(ModelParams<double>&, const GradSet<double>&, const AdamOptions&);
template void require_finite<float>(const Weights<float>&, const char*);
template void require_finite<double>(const Weights<double>&, const char*);

}  // namespace gadforge
