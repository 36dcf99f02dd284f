#include "difnet/likelihood.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace difnet {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Exponential: return "exp";
    case ModelKind::PowerLaw: return "pow";
    case ModelKind::Rayleigh: return "ray";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "exp") return ModelKind::Exponential;
  if (name == "pow") return ModelKind::PowerLaw;
  if (name == "ray") return ModelKind::Rayleigh;
  return std::nullopt;
}

void TransmissionModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (!(pow_min_delay > 0.0) || !std::isfinite(pow_min_delay)) {
    throw std::invalid_argument("pow_min_delay must be > 0");
  }
}

void Hyper::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
}

double transmission_kernel(const TransmissionModel& model, double delay) {
  if (!(delay > 0.0)) return 0.0;
  switch (model.kind) {
    case ModelKind::Exponential:
      return std::exp(-model.alpha * delay);
    case ModelKind::PowerLaw:
      if (delay < model.pow_min_delay) return 0.0;
      return std::pow(delay, -1.0 - model.alpha);
    case ModelKind::Rayleigh:
      return delay * std::exp(-model.alpha * delay * delay);
  }
  return 0.0;
}

double pairwise_likelihood(const TransmissionModel& model, InfectionTime parent, InfectionTime child) {
  return transmission_kernel(model, child.value() - parent.value());
}

double edge_weight(const TransmissionModel& model, const Hyper& hyper, InfectionTime parent,
                   InfectionTime child) {
  return pairwise_likelihood(model, parent, child) / hyper.epsilon;
}

double cascade_score(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                     const Hyper& hyper) {
  if (cascade.size() != network.n_nodes()) {
    throw std::invalid_argument("cascade and network disagree on population size");
  }
  double score = 0.0;
  for (NodeId child = 0; child < cascade.size(); ++child) {
    const InfectionTime tc = cascade.time(child);
    if (!tc.infected()) continue;
    double in_weight = 1.0;
    for (const NodeId parent : network.in_neighbors(child)) {
      const InfectionTime tp = cascade.time(parent);
      if (tp.infected() && tp < tc) in_weight += edge_weight(model, hyper, tp, tc);
    }
    score += std::log(in_weight);
  }
  return score;
}

double total_score(const CascadeSet& set, const Network& network, const TransmissionModel& model,
                   const Hyper& hyper) {
  double total = 0.0;
  for (const Cascade& c : set.cascades()) total += cascade_score(c, network, model, hyper);
  return total;
}

ReducedLaplacian reduced_laplacian(const Cascade& cascade, const Network& network,
                                   const TransmissionModel& model, const Hyper& hyper) {
  ReducedLaplacian lap;
  lap.order.assign(cascade.infected_by_time().begin(), cascade.infected_by_time().end());
  const std::size_t n = lap.order.size();
  // Full weight matrix over [source, order...]; index 0 is the source.
  std::vector<double> w((n + 1) * (n + 1), 0.0);
  auto weight = [&](std::size_t from, std::size_t to) -> double& { return w[from * (n + 1) + to]; };
  for (std::size_t b = 0; b < n; ++b) {
    weight(0, b + 1) = 1.0;
    const InfectionTime tb = cascade.time(lap.order[b]);
    for (std::size_t a = 0; a < n; ++a) {
      if (a == b) continue;
      const InfectionTime ta = cascade.time(lap.order[a]);
      if (ta < tb && network.contains({lap.order[a], lap.order[b]})) {
        weight(a + 1, b + 1) = edge_weight(model, hyper, ta, tb);
      }
    }
  }
  // a_jj = sum_k w_kj, a_ij = -w_ij; drop the source row and column.
  lap.entries.assign(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c) {
        double in = 0.0;
        for (std::size_t k = 0; k <= n; ++k) in += weight(k, c + 1);
        lap.entries[r * n + c] = in;
      } else {
        lap.entries[r * n + c] = -weight(r + 1, c + 1);
      }
    }
  }
  return lap;
}

double tree_sum_matrix(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                       const Hyper& hyper) {
  const ReducedLaplacian lap = reduced_laplacian(cascade, network, model, hyper);
  double det = 1.0;
  for (std::size_t r = 0; r < lap.dim(); ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      if (lap.at(r, c) != 0.0) throw std::logic_error("time-ordered Laplacian is not upper triangular");
    }
    det *= lap.at(r, r);
  }
  return det;
}

namespace {

struct Enumerator {
  // choices[b] holds the weights of every admissible parent of order[b],
  // the source (weight 1) first.
  std::vector<std::vector<double>> choices;

  double sum(std::size_t node, double product) const {
    if (node == choices.size()) return product;
    double total = 0.0;
    for (double w : choices[node]) total += sum(node + 1, product * w);
    return total;
  }
};

}  // namespace

double tree_sum_enumerate(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                          const Hyper& hyper) {
  const auto order = cascade.infected_by_time();
  if (order.size() > kMaxEnumeratedInfected) {
    throw std::invalid_argument("tree enumeration limited to " + std::to_string(kMaxEnumeratedInfected) +
                                " infected nodes, got " + std::to_string(order.size()));
  }
  Enumerator en;
  en.choices.resize(order.size());
  for (std::size_t b = 0; b < order.size(); ++b) {
    en.choices[b].push_back(1.0);
    const InfectionTime tb = cascade.time(order[b]);
    for (std::size_t a = 0; a < order.size(); ++a) {
      const InfectionTime ta = cascade.time(order[a]);
      if (a != b && ta < tb && network.contains({order[a], order[b]})) {
        en.choices[b].push_back(edge_weight(model, hyper, ta, tb));
      }
    }
  }
  return en.sum(0, 1.0);
}

}  // namespace difnet
