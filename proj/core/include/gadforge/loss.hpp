#pragma once

#include <cmath>
#include <span>
#include <string>

#include "gadforge/error.hpp"

namespace gadforge {

/// Probabilities are clamped into [eps, 1 - eps] before taking logs.
inline constexpr double kProbEpsilon = 1e-7;

template <typename T>
T sigmoid(T z) noexcept {
  if (z >= T{}) return T{1} / (T{1} + std::exp(-z));
  const T e = std::exp(z);
  return e / (T{1} + e);
}

template <typename T>
T clamp_probability(T p) noexcept {
  const T lo = static_cast<T>(kProbEpsilon);
  const T hi = T{1} - lo;
  return p < lo ? lo : (p > hi ? hi : p);
}

/// Mean binary cross-entropy of probabilities `p` against 0/1 labels.
template <typename T>
T bce(std::span<const T> p, std::span<const int> y) {
  if (p.empty()) throw Error(ErrorKind::Contract, "bce: empty batch");
  if (p.size() != y.size()) throw Error(ErrorKind::Contract, "bce: size mismatch");
  T total{};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const T q = clamp_probability(p[i]);
    total -= y[i] ? std::log(q) : std::log(T{1} - q);
  }
  return total / static_cast<T>(p.size());
}

/// bce(sigmoid(logits), y). Writes scale * dL/dlogit into `d_logits`; the
/// derivative is 0 where the clamp is active.
template <typename T>
T bce_from_logits(std::span<const T> logits, std::span<const int> y, T scale,
                  std::span<T> d_logits) {
  if (logits.empty()) throw Error(ErrorKind::Contract, "bce: empty batch");
  if (logits.size() != y.size() || d_logits.size() != y.size())
    throw Error(ErrorKind::Contract, "bce: size mismatch");
  const T lo = static_cast<T>(kProbEpsilon);
  const T inv_b = T{1} / static_cast<T>(logits.size());
  T total{};
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const T p = sigmoid(logits[i]);
    const T q = clamp_probability(p);
    total -= y[i] ? std::log(q) : std::log(T{1} - q);
    const bool clamped = p < lo || p > T{1} - lo;
    d_logits[i] = clamped ? T{} : scale * (p - static_cast<T>(y[i])) * inv_b;
  }
  return total * inv_b;
}

}  // namespace gadforge
