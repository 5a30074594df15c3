#pragma once

#include <vector>

#include "gadforge/graph.hpp"
#include "gadforge/params.hpp"

namespace gadforge {

inline constexpr double kAttentionSlope = 0.2;

/// Forward intermediates of one attention layer. Per-edge arrays follow the
/// graph's CSR order.
template <typename T>
struct LayerCache {
  Matrix<T> input;
  Matrix<T> m_self;
  Matrix<T> m_nbr;
  std::vector<T> score_self;
  std::vector<T> score_nbr;
  std::vector<T> pre_activation;  // score_self[v] + score_nbr[u], per edge
  std::vector<T> alpha;           // attention weights, per edge
  Matrix<T> output;               // before any outer activation
};

template <typename T>
struct EncoderCache {
  std::vector<LayerCache<T>> layers;
  Matrix<T> embeddings;
};

/// For every node v:
///   m_self = x_v W_self,  m_u = x_u W_nbr  (u in N(v))
///   alpha_vu = softmax_u LeakyReLU(a_self . m_self + a_nbr . m_u)
///   out_v = m_self + sum_u alpha_vu m_u + bias
/// Isolated nodes get a zero neighbor term. Neighbors are reduced in
/// ascending id order.
template <typename T>
void attention_forward(const Graph& g, const Matrix<T>& input, const AttentionLayer<T>& layer,
                       LayerCache<T>& cache);

/// Accumulates parameter gradients into `grad` and, when `d_input` is
/// non-null, writes the gradient with respect to the layer input.
template <typename T>
void attention_backward(const Graph& g, const AttentionLayer<T>& layer, const LayerCache<T>& cache,
                        const Matrix<T>& d_output, AttentionLayer<T>& grad, Matrix<T>* d_input);

/// Two layers with ReLU in between; the final embedding is left signed.
template <typename T>
Matrix<T> encode(const Graph& g, const EncoderParams<T>& params, EncoderCache<T>* cache = nullptr);

template <typename T>
void encode_backward(const Graph& g, const EncoderParams<T>& params, const EncoderCache<T>& cache,
                     const Matrix<T>& d_embeddings, EncoderParams<T>& grad);

template <typename T>
Matrix<T> features_as(const Graph& g);

}  // namespace gadforge
