#include "gadforge/heads.hpp"

#include <numeric>

#include "gadforge/loss.hpp"

namespace gadforge {

template <typename T>
std::vector<T> head_logits(const Matrix<T>& embeddings, const Head<T>& head,
                           std::span<const NodeId> rows, HeadCache<T>* cache) {
  if (embeddings.cols() != head.w1.rows())
    throw Error(ErrorKind::Contract, "head input width does not match embedding width");
  const std::size_t in = head.w1.rows();
  const std::size_t hidden = head.w1.cols();
  Matrix<T> pre(rows.size(), hidden);
  std::vector<T> logits(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto h = embeddings.row(rows[r]);
    auto z = pre.row(r);
    for (std::size_t j = 0; j < hidden; ++j) z[j] = head.b1[j];
    for (std::size_t i = 0; i < in; ++i) {
      const T hi = h[i];
      const T* w = head.w1.data() + i * hidden;
      for (std::size_t j = 0; j < hidden; ++j) z[j] += hi * w[j];
    }
    T out = head.b2[0];
    for (std::size_t j = 0; j < hidden; ++j)
      if (z[j] > T{}) out += z[j] * head.w2[j];
    logits[r] = out;
  }
  if (cache) {
    cache->rows.assign(rows.begin(), rows.end());
    cache->hidden_pre = std::move(pre);
  }
  return logits;
}

template <typename T>
void head_backward(const Matrix<T>& embeddings, const Head<T>& head, const HeadCache<T>& cache,
                   std::span<const T> d_logits, Head<T>& grad, Matrix<T>& d_embeddings) {
  const std::size_t in = head.w1.rows();
  const std::size_t hidden = head.w1.cols();
  std::vector<T> dz(hidden);
  for (std::size_t r = 0; r < cache.rows.size(); ++r) {
    const T g = d_logits[r];
    if (g == T{}) continue;
    const auto z = cache.hidden_pre.row(r);
    grad.b2[0] += g;
    for (std::size_t j = 0; j < hidden; ++j) {
      const bool active = z[j] > T{};
      if (active) grad.w2[j] += g * z[j];
      dz[j] = active ? g * head.w2[j] : T{};
      grad.b1[j] += dz[j];
    }
    const auto h = embeddings.row(cache.rows[r]);
    auto dh = d_embeddings.row(cache.rows[r]);
    for (std::size_t i = 0; i < in; ++i) {
      T* gw = grad.w1.data() + i * hidden;
      const T* w = head.w1.data() + i * hidden;
      const T hi = h[i];
      T acc{};
      for (std::size_t j = 0; j < hidden; ++j) {
        gw[j] += hi * dz[j];
        acc += w[j] * dz[j];
      }
      dh[i] += acc;
    }
  }
}

template <typename T>
std::vector<T> head_forward(const Matrix<T>& embeddings, const Head<T>& head) {
  std::vector<NodeId> rows(embeddings.rows());
  std::iota(rows.begin(), rows.end(), NodeId{0});
  auto p = head_logits(embeddings, head, rows);
  for (auto& x : p) x = sigmoid(x);
  return p;
}

#define GADFORGE_INSTANTIATE(T)                                                                \
  template std::vector<T> head_logits<T>(const Matrix<T>&, const Head<T>&,                     \
                                         std::span<const NodeId>, HeadCache<T>*);              \
  template void head_backward<T>(const Matrix<T>&, const Head<T>&, const HeadCache<T>&,        \
                                 std::span<const T>, Head<T>&, Matrix<T>&);                    \
  template std::vector<T> head_forward<T>(const Matrix<T>&, const Head<T>&);

GADFORGE_INSTANTIATE(float)
GADFORGE_INSTANTIATE(double)
#undef GADFORGE_INSTANTIATE

}  // namespace gadforge
