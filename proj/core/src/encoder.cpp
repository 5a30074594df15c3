#include "gadforge/encoder.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gadforge {

template <typename T>
Matrix<T> features_as(const Graph& g) {
  Matrix<T> x(g.num_nodes(), g.dim());
  const auto src = g.features();
  for (std::size_t i = 0; i < src.size(); ++i) x[i] = static_cast<T>(src[i]);
  return x;
}

template <typename T>
void attention_forward(const Graph& g, const Matrix<T>& input, const AttentionLayer<T>& layer,
                       LayerCache<T>& cache) {
  const std::size_t n = g.num_nodes();
  if (input.rows() != n || input.cols() != layer.w_self.rows()) {
    throw Error(ErrorKind::Contract, "attention layer expects input " + std::to_string(n) + "x" +
                                         std::to_string(layer.w_self.rows()) + ", got " +
                                         std::to_string(input.rows()) + "x" +
                                         std::to_string(input.cols()));
  }
  const std::size_t out = layer.w_self.cols();
  cache.input = input;
  matmul(input, layer.w_self, cache.m_self);
  matmul(input, layer.w_nbr, cache.m_nbr);

  cache.score_self.assign(n, T{});
  cache.score_nbr.assign(n, T{});
  for (std::size_t v = 0; v < n; ++v) {
    cache.score_self[v] = dot<T>(layer.a_self.row(0), cache.m_self.row(v));
    cache.score_nbr[v] = dot<T>(layer.a_nbr.row(0), cache.m_nbr.row(v));
  }

  const auto offsets = g.offsets();
  const auto adj = g.adjacency();
  cache.pre_activation.assign(adj.size(), T{});
  cache.alpha.assign(adj.size(), T{});
  cache.output = Matrix<T>(n, out);
  const T slope = static_cast<T>(kAttentionSlope);

  for (std::size_t v = 0; v < n; ++v) {
    auto o = cache.output.row(v);
    const auto ms = cache.m_self.row(v);
    for (std::size_t j = 0; j < out; ++j) o[j] = ms[j] + layer.bias[j];

    const std::size_t begin = offsets[v], end = offsets[v + 1];
    if (begin == end) continue;
    T max_logit = -std::numeric_limits<T>::infinity();
    for (std::size_t e = begin; e < end; ++e) {
      const T t = cache.score_self[v] + cache.score_nbr[adj[e]];
      cache.pre_activation[e] = t;
      const T logit = t > T{} ? t : slope * t;
      cache.alpha[e] = logit;
      max_logit = std::max(max_logit, logit);
    }
    T total{};
    for (std::size_t e = begin; e < end; ++e) {
      cache.alpha[e] = std::exp(cache.alpha[e] - max_logit);
      total += cache.alpha[e];
    }
    for (std::size_t e = begin; e < end; ++e) {
      cache.alpha[e] /= total;
      const T a = cache.alpha[e];
      const auto mu = cache.m_nbr.row(adj[e]);
      for (std::size_t j = 0; j < out; ++j) o[j] += a * mu[j];
    }
  }
}

template <typename T>
void attention_backward(const Graph& g, const AttentionLayer<T>& layer, const LayerCache<T>& cache,
                        const Matrix<T>& d_output, AttentionLayer<T>& grad, Matrix<T>* d_input) {
  const std::size_t n = g.num_nodes();
  const std::size_t out = layer.w_self.cols();
  const auto offsets = g.offsets();
  const auto adj = g.adjacency();
  const T slope = static_cast<T>(kAttentionSlope);

  Matrix<T> d_self = d_output;
  Matrix<T> d_nbr(n, out);
  std::vector<T> d_score_self(n, T{}), d_score_nbr(n, T{});
  std::vector<T> d_alpha;

  for (std::size_t v = 0; v < n; ++v) {
    const auto dz = d_output.row(v);
    for (std::size_t j = 0; j < out; ++j) grad.bias[j] += dz[j];

    const std::size_t begin = offsets[v], end = offsets[v + 1];
    if (begin == end) continue;
    d_alpha.assign(end - begin, T{});
    T weighted{};
    for (std::size_t e = begin; e < end; ++e) {
      const NodeId u = adj[e];
      const T a = cache.alpha[e];
      d_alpha[e - begin] = dot<T>(dz, cache.m_nbr.row(u));
      weighted += a * d_alpha[e - begin];
      auto dm = d_nbr.row(u);
      for (std::size_t j = 0; j < out; ++j) dm[j] += a * dz[j];
    }
    for (std::size_t e = begin; e < end; ++e) {
      const T d_logit = cache.alpha[e] * (d_alpha[e - begin] - weighted);
      const T d_pre = cache.pre_activation[e] > T{} ? d_logit : slope * d_logit;
      d_score_self[v] += d_pre;
      d_score_nbr[adj[e]] += d_pre;
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    const auto ms = cache.m_self.row(v);
    const auto mn = cache.m_nbr.row(v);
    auto ds = d_self.row(v);
    auto dn = d_nbr.row(v);
    for (std::size_t j = 0; j < out; ++j) {
      grad.a_self[j] += d_score_self[v] * ms[j];
      grad.a_nbr[j] += d_score_nbr[v] * mn[j];
      ds[j] += d_score_self[v] * layer.a_self[j];
      dn[j] += d_score_nbr[v] * layer.a_nbr[j];
    }
  }

  matmul_tn_acc(cache.input, d_self, grad.w_self);
  matmul_tn_acc(cache.input, d_nbr, grad.w_nbr);
  if (d_input) {
    *d_input = Matrix<T>(n, layer.w_self.rows());
    matmul_nt_acc(d_self, layer.w_self, *d_input);
    matmul_nt_acc(d_nbr, layer.w_nbr, *d_input);
  }
}

template <typename T>
Matrix<T> encode(const Graph& g, const EncoderParams<T>& params, EncoderCache<T>* cache) {
  if (params.layers.empty()) throw Error(ErrorKind::Contract, "encoder has no layers");
  EncoderCache<T> local;
  EncoderCache<T>& c = cache ? *cache : local;
  c.layers.resize(params.layers.size());

  Matrix<T> h = features_as<T>(g);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    attention_forward(g, h, params.layers[i], c.layers[i]);
    h = c.layers[i].output;
    if (i + 1 < params.layers.size()) {
      for (auto& x : h.values()) x = x > T{} ? x : T{};
    }
  }
  c.embeddings = h;
  return h;
}

template <typename T>
void encode_backward(const Graph& g, const EncoderParams<T>& params, const EncoderCache<T>& cache,
                     const Matrix<T>& d_embeddings, EncoderParams<T>& grad) {
  Matrix<T> d_out = d_embeddings;
  for (std::size_t i = params.layers.size(); i-- > 0;) {
    Matrix<T> d_in;
    attention_backward(g, params.layers[i], cache.layers[i], d_out, grad.layers[i],
                       i > 0 ? &d_in : nullptr);
    if (i == 0) break;
    // Through the ReLU that fed layer i.
    const auto& pre = cache.layers[i - 1].output;
    for (std::size_t k = 0; k < d_in.size(); ++k)
      if (!(pre[k] > T{})) d_in[k] = T{};
    d_out = std::move(d_in);
  }
}

#define GADFORGE_INSTANTIATE(T)                                                                   \
  template Matrix<T> features_as<T>(const Graph&);                                                \
  template void attention_forward<T>(const Graph&, const Matrix<T>&, const AttentionLayer<T>&,    \
                                     LayerCache<T>&);                                             \
  template void attention_backward<T>(const Graph&, const AttentionLayer<T>&,                     \
                                      const LayerCache<T>&, const Matrix<T>&, AttentionLayer<T>&, \
                                      Matrix<T>*);                                                \
  template Matrix<T> encode<T>(const Graph&, const EncoderParams<T>&, EncoderCache<T>*);          \
  template void encode_backward<T>(const Graph&, const EncoderParams<T>&, const EncoderCache<T>&, \
                                   const Matrix<T>&, EncoderParams<T>&);

GADFORGE_INSTANTIATE(float)
GADFORGE_INSTANTIATE(double)
#undef GADFORGE_INSTANTIATE

}  // namespace gadforge
