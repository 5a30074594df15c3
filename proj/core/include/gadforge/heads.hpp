#pragma once

#include <span>
#include <vector>

#include "gadforge/graph.hpp"
#include "gadforge/params.hpp"

namespace gadforge {

template <typename T>
struct HeadCache {
  std::vector<NodeId> rows;
  Matrix<T> hidden_pre;  // rows x head_hidden, before ReLU
};

/// Pre-sigmoid scores for the given embedding rows (rows may repeat).
template <typename T>
std::vector<T> head_logits(const Matrix<T>& embeddings, const Head<T>& head,
                           std::span<const NodeId> rows, HeadCache<T>* cache = nullptr);

/// Accumulates into `grad` and into the matching rows of `d_embeddings`.
template <typename T>
void head_backward(const Matrix<T>& embeddings, const Head<T>& head, const HeadCache<T>& cache,
                   std::span<const T> d_logits, Head<T>& grad, Matrix<T>& d_embeddings);

/// sigmoid(MLP(h_v)) for every node.
template <typename T>
std::vector<T> head_forward(const Matrix<T>& embeddings, const Head<T>& head);

}  // namespace gadforge
