#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gadforge/rng.hpp"
#include "gadforge/tensor.hpp"

namespace gadforge {

struct ModelShape {
  std::size_t input_dim = 0;
  std::size_t hidden = 64;        // encoder width d'
  std::size_t head_hidden = 64;
  std::size_t num_synthetic = 5;  // K

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

/// One attention layer with separate ego and neighbor transforms.
template <typename T>
struct AttentionLayer {
  Matrix<T> w_self;  // in x out
  Matrix<T> w_nbr;   // in x out
  Matrix<T> a_self;  // 1 x out
  Matrix<T> a_nbr;   // 1 x out
  Matrix<T> bias;    // 1 x out

  friend bool operator==(const AttentionLayer&, const AttentionLayer&) = default;
};

/// linear(h -> hh), ReLU, linear(hh -> 1). The sigmoid is applied by callers.
template <typename T>
struct Head {
  Matrix<T> w1;  // h x hh
  Matrix<T> b1;  // 1 x hh
  Matrix<T> w2;  // hh x 1
  Matrix<T> b2;  // 1 x 1

  friend bool operator==(const Head&, const Head&) = default;
};

template <typename T>
struct EncoderParams {
  std::vector<AttentionLayer<T>> layers;  // input -> hidden -> hidden

  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

template <typename T>
struct HeadParams {
  std::vector<Head<T>> synthetic;  // one per perturbation type
  Head<T> real;

  friend bool operator==(const HeadParams&, const HeadParams&) = default;
};

template <typename T>
struct TensorRef {
  std::string name;
  Matrix<T>* tensor;
  bool decayed;  // receives L2 regularization
};

template <typename T>
struct ConstTensorRef {
  std::string name;
  const Matrix<T>* tensor;
  bool decayed;
};

/// Every trainable tensor of the model. Also used for gradients and Adam
/// moments, which share the layout.
template <typename T>
struct Weights {
  EncoderParams<T> encoder;
  HeadParams<T> heads;

  static Weights zeros(const ModelShape& shape);

  /// Stable enumeration order: encoder layers, synthetic heads, real head.
  std::vector<TensorRef<T>> tensors();
  std::vector<ConstTensorRef<T>> tensors() const;
  std::size_t parameter_count() const;
  void fill(T value);

  template <typename U>
  Weights<U> cast() const;

  friend bool operator==(const Weights&, const Weights&) = default;
};

template <typename T>
using GradSet = Weights<T>;

template <typename T>
struct AdamState {
  Weights<T> first;
  Weights<T> second;
  std::uint64_t step = 0;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

template <typename T>
struct ModelParams {
  ModelShape shape;
  Weights<T> weights;
  AdamState<T> adam;

  void reset_adam();
  template <typename U>
  ModelParams<U> cast() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Glorot-uniform weights, zero biases, fresh Adam state. Uses the "init"
/// stream of `seed`.
template <typename T>
ModelParams<T> init_model(const ModelShape& shape, std::uint64_t seed);

template <typename T>
template <typename U>
Weights<U> Weights<T>::cast() const {
  Weights<U> out;
  for (const auto& l : encoder.layers) {
    out.encoder.layers.push_back({l.w_self.template cast<U>(), l.w_nbr.template cast<U>(),
                                  l.a_self.template cast<U>(), l.a_nbr.template cast<U>(),
                                  l.bias.template cast<U>()});
  }
  auto cast_head = [](const Head<T>& h) {
    return Head<U>{h.w1.template cast<U>(), h.b1.template cast<U>(), h.w2.template cast<U>(),
                   h.b2.template cast<U>()};
  };
  for (const auto& h : heads.synthetic) out.heads.synthetic.push_back(cast_head(h));
  out.heads.real = cast_head(heads.real);
  return out;
}

template <typename T>
template <typename U>
ModelParams<U> ModelParams<T>::cast() const {
  ModelParams<U> out;
  out.shape = shape;
  out.weights = weights.template cast<U>();
  out.adam.first = adam.first.template cast<U>();
  out.adam.second = adam.second.template cast<U>();
  out.adam.step = adam.step;
  return out;
}

}  // namespace gadforge
