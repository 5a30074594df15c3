#include "gadforge/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gadforge/rng.hpp"

namespace gadforge {

double GradCheckReport::worst() const noexcept {
  double w = 0.0;
  for (const auto& g : groups) w = std::max(w, g.max_relative_error);
  return w;
}

const GradCheckGroup* GradCheckReport::find(const std::string& prefix) const noexcept {
  const GradCheckGroup* best = nullptr;
  for (const auto& g : groups) {
    if (g.name.rfind(prefix, 0) != 0) continue;
    if (!best || g.max_relative_error > best->max_relative_error) best = &g;
  }
  return best;
}

GradCheckReport finite_difference_check(const std::vector<TensorRef<double>>& params,
                                        const std::function<double()>& loss,
                                        const std::vector<ConstTensorRef<double>>& analytic,
                                        const GradCheckOptions& opts) {
  if (params.size() != analytic.size())
    throw Error(ErrorKind::Contract, "gradient check: parameter/gradient layout mismatch");
  GradCheckReport report;
  Rng rng(opts.seed, "gradcheck");
  for (std::size_t t = 0; t < params.size(); ++t) {
    Matrix<double>& theta = *params[t].tensor;
    const Matrix<double>& grad = *analytic[t].tensor;
    if (!theta.same_shape(grad))
      throw Error(ErrorKind::Contract, "gradient check: shape mismatch in " + params[t].name);

    std::vector<std::uint32_t> coords(theta.size());
    std::iota(coords.begin(), coords.end(), 0u);
    if (opts.max_coordinates > 0 && opts.max_coordinates < coords.size()) {
      coords = rng.sample_without_replacement(static_cast<std::uint32_t>(theta.size()),
                                              static_cast<std::uint32_t>(opts.max_coordinates));
    }

    GradCheckGroup group;
    group.name = params[t].name;
    for (const auto i : coords) {
      const double saved = theta[i];
      theta[i] = saved + opts.step;
      const double up = loss();
      theta[i] = saved - opts.step;
      const double down = loss();
      theta[i] = saved;
      const double numeric = (up - down) / (2.0 * opts.step);
      const double a = grad[i];
      const double abs_err = std::abs(a - numeric);
      const double denom = std::max({std::abs(a), std::abs(numeric), opts.floor});
      group.max_absolute_error = std::max(group.max_absolute_error, abs_err);
      group.max_relative_error = std::max(group.max_relative_error, abs_err / denom);
      ++group.coordinates;
    }
    report.groups.push_back(std::move(group));
  }
  return report;
}

GradCheckReport grad_check(const Graph& clean, const Graph& perturbed, Weights<double> weights,
                           const ObjectiveSpec& spec, const GradCheckOptions& opts,
                           const GradientTamper& tamper) {
  GradSet<double> grad = weights;
  grad.fill(0.0);
  evaluate_objective<double>(clean, &perturbed, weights, spec, &grad);
  if (tamper) tamper(grad);
  auto loss = [&] {
    return evaluate_objective<double>(clean, &perturbed, weights, spec, nullptr).total;
  };
  return finite_difference_check(weights.tensors(), loss, std::as_const(grad).tensors(), opts);
}

GradCheckReport grad_check_random(const GradCheckSetup& setup, const GradCheckOptions& opts,
                                  const GradientTamper& tamper) {
  Rng rng(setup.seed, "gradcheck-graph");
  const std::size_t n = setup.nodes;
  std::vector<double> features(n * setup.dim);
  for (auto& x : features) x = rng.normal();
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(setup.edge_probability))
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  const Graph g = Graph::from_edges(n, setup.dim, std::move(features), edges);

  // Minimal weak split: the first `labeled` nodes are labeled anomalies.
  WeakSplit split;
  for (std::size_t v = 0; v < n; ++v) {
    split.train.push_back(static_cast<NodeId>(v));
    (v < setup.labeled ? split.labeled_anomalies : split.unlabeled_pool)
        .push_back(static_cast<NodeId>(v));
  }

  PerturbConfig pcfg;
  pcfg.per_type = setup.per_type;
  Rng inject_rng(setup.seed, "inject");
  Injection inj = inject_all(g, split.unlabeled_pool, pcfg, inject_rng);
  Rng batch_rng(setup.seed, "batch");
  const auto synth = sample_synth_batches(inj.ledger, split, batch_rng);
  const RealBatch real = sample_real_batch(split, batch_rng, setup.real_batch);

  ModelShape shape;
  shape.input_dim = setup.dim;
  shape.hidden = setup.hidden;
  shape.head_hidden = setup.hidden;
  const auto params = init_model<double>(shape, setup.seed);

  ObjectiveSpec spec;
  spec.real = &real;
  spec.synth = synth;
  spec.synth_weight = setup.lambda;
  return grad_check(g, inj.graph, params.weights, spec, opts, tamper);
}

}  // namespace gadforge
