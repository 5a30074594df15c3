#include "gadforge/params.hpp"

#include <cmath>

namespace gadforge {

namespace {

template <typename T>
AttentionLayer<T> zero_layer(std::size_t in, std::size_t out) {
  return {Matrix<T>(in, out), Matrix<T>(in, out), Matrix<T>(1, out), Matrix<T>(1, out),
          Matrix<T>(1, out)};
}

template <typename T>
Head<T> zero_head(std::size_t in, std::size_t hidden) {
  return {Matrix<T>(in, hidden), Matrix<T>(1, hidden), Matrix<T>(hidden, 1), Matrix<T>(1, 1)};
}

template <typename T>
void glorot(Matrix<T>& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& x : m.values()) x = static_cast<T>(rng.uniform(-limit, limit));
}

}  // namespace

template <typename T>
Weights<T> Weights<T>::zeros(const ModelShape& shape) {
  Weights<T> w;
  w.encoder.layers.push_back(zero_layer<T>(shape.input_dim, shape.hidden));
  w.encoder.layers.push_back(zero_layer<T>(shape.hidden, shape.hidden));
  for (std::size_t k = 0; k < shape.num_synthetic; ++k)
    w.heads.synthetic.push_back(zero_head<T>(shape.hidden, shape.head_hidden));
  w.heads.real = zero_head<T>(shape.hidden, shape.head_hidden);
  return w;
}

template <typename T>
std::vector<TensorRef<T>> Weights<T>::tensors() {
  std::vector<TensorRef<T>> out;
  for (std::size_t i = 0; i < encoder.layers.size(); ++i) {
    auto& l = encoder.layers[i];
    const std::string p = "encoder." + std::to_string(i) + ".";
    out.push_back({p + "w_self", &l.w_self, true});
    out.push_back({p + "w_nbr", &l.w_nbr, true});
    out.push_back({p + "a_self", &l.a_self, true});
    out.push_back({p + "a_nbr", &l.a_nbr, true});
    out.push_back({p + "bias", &l.bias, false});
  }
  auto add_head = [&out](const std::string& p, Head<T>& h) {
    out.push_back({p + "w1", &h.w1, true});
    out.push_back({p + "b1", &h.b1, false});
    out.push_back({p + "w2", &h.w2, true});
    out.push_back({p + "b2", &h.b2, false});
  };
  for (std::size_t k = 0; k < heads.synthetic.size(); ++k)
    add_head("head.synth" + std::to_string(k + 1) + ".", heads.synthetic[k]);
  add_head("head.real.", heads.real);
  return out;
}

template <typename T>
std::vector<ConstTensorRef<T>> Weights<T>::tensors() const {
  std::vector<ConstTensorRef<T>> out;
  for (const auto& ref : const_cast<Weights<T>*>(this)->tensors())
    out.push_back({ref.name, ref.tensor, ref.decayed});
  return out;
}

template <typename T>
std::size_t Weights<T>::parameter_count() const {
  std::size_t total = 0;
  for (const auto& ref : tensors()) total += ref.tensor->size();
  return total;
}

template <typename T>
void Weights<T>::fill(T value) {
  for (auto& ref : tensors()) ref.tensor->fill(value);
}

template <typename T>
void ModelParams<T>::reset_adam() {
  adam.first = Weights<T>::zeros(shape);
  adam.second = Weights<T>::zeros(shape);
  adam.step = 0;
}

template <typename T>
ModelParams<T> init_model(const ModelShape& shape, std::uint64_t seed) {
  ModelParams<T> p;
  p.shape = shape;
  p.weights = Weights<T>::zeros(shape);
  p.reset_adam();
  Rng rng(seed, "init");
  for (auto& ref : p.weights.tensors()) {
    if (!ref.decayed) continue;  // biases stay zero
    Matrix<T>& m = *ref.tensor;
    if (m.rows() == 1) {
      glorot(m, m.cols(), 1, rng);  // attention vector
    } else {
      glorot(m, m.rows(), m.cols(), rng);
    }
  }
  return p;
}

template struct Weights<float>;
template struct Weights<double>;
template struct ModelParams<float>;
template struct ModelParams<double>;
template ModelParams<float> init_model<float>(const ModelShape&, std::uint64_t);
template ModelParams<double> init_model<double>(const ModelShape&, std::uint64_t);

}  // namespace gadforge
