#include "difnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace difnet {

void KroneckerParams::validate() const {
  for (double p : seed_matrix) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("seed matrix entries must lie in [0, 1]");
  }
  if (power < 1 || power > 30) throw std::invalid_argument("power must lie in [1, 30]");
}

double KroneckerParams::edge_probability(NodeId u, NodeId v) const {
  double p = 1.0;
  for (unsigned level = 0; level < power; ++level) {
    const unsigned bu = (u >> level) & 1u;
    const unsigned bv = (v >> level) & 1u;
    p *= seed_matrix[2 * bu + bv];
  }
  return p;
}

void SimConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be > 0");
  if (min_cascade_size < 1) throw std::invalid_argument("min_cascade_size must be >= 1");
  if (!(rate_low > 0.0) || !(rate_low <= rate_high) || !std::isfinite(rate_high)) {
    throw std::invalid_argument("rates must satisfy 0 < rate_low <= rate_high");
  }
  if (!(pow_min_delay > 0.0)) throw std::invalid_argument("pow_min_delay must be > 0");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Network kronecker_network(const KroneckerParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = params.n_nodes();
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      const double p = params.edge_probability(u, v);
      if (p >= 1.0 || (p > 0.0 && unit(rng) < p)) edges.push_back({u, v});
    }
  }
  return Network(n, std::move(edges));
}

Network scale_free_network(std::size_t n_nodes, std::size_t out_degree, std::uint64_t seed) {
  if (out_degree < 1 || out_degree >= n_nodes) {
    throw std::invalid_argument("scale-free generator needs n_nodes > out_degree >= 1");
  }
  std::mt19937_64 rng(seed);
  // Each node appears (in-degree + 1) times, so a uniform pick is
  // preferential in in-degree + 1.
  std::vector<NodeId> urn{0};
  std::vector<Edge> edges;
  edges.reserve(n_nodes * out_degree);
  std::vector<NodeId> chosen;
  for (NodeId t = 1; t < n_nodes; ++t) {
    chosen.clear();
    const std::size_t want = std::min<std::size_t>(t, out_degree);
    if (want == t) {
      for (NodeId v = 0; v < t; ++v) chosen.push_back(v);
    } else {
      while (chosen.size() < want) {
        std::uniform_int_distribution<std::size_t> pick(0, urn.size() - 1);
        const NodeId v = urn[pick(rng)];
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
      }
    }
    for (NodeId v : chosen) {
      edges.push_back({t, v});
      urn.push_back(v);
    }
    urn.push_back(t);
  }
  return Network(n_nodes, std::move(edges));
}

Network assign_rates(const Network& network, double low, double high, std::uint64_t seed) {
  if (network.has_rates()) throw std::invalid_argument("network already carries rates");
  if (!(low > 0.0) || !(low <= high)) throw std::invalid_argument("rates must satisfy 0 < low <= high");
  std::mt19937_64 rng(seed);
  std::vector<double> rates(network.edge_count(), low);
  if (high > low) {
    std::uniform_real_distribution<double> dist(low, high);
    for (double& r : rates) r = dist(rng);
  }
  return network.with_rates(std::move(rates));
}

double sample_delay(ModelKind kind, double alpha, double pow_min_delay, std::mt19937_64& rng) {
  // u in (0, 1]
  const double u = 1.0 - std::generate_canonical<double, 53>(rng);
  switch (kind) {
    case ModelKind::Exponential:
      return -std::log(u) / alpha;
    case ModelKind::PowerLaw:
      return pow_min_delay * std::pow(u, -1.0 / alpha);
    case ModelKind::Rayleigh:
      return std::sqrt(-2.0 * std::log(u) / alpha);
  }
  return 0.0;
}

Cascade propagate(const Network& network, ModelKind kind, const SimConfig& config, NodeId root,
                  std::mt19937_64& rng) {
  if (!network.has_rates()) throw std::invalid_argument("simulation requires per-edge rates");
  const std::size_t n = network.n_nodes();
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> done(n, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  std::bernoulli_distribution fires(config.beta);

  best[root] = 0.0;
  frontier.push({0.0, root});
  while (!frontier.empty()) {
    const auto [t, u] = frontier.top();
    frontier.pop();
    if (done[u]) continue;
    done[u] = 1;
    const auto [first, last] = network.out_range(u);
    for (std::size_t e = first; e < last; ++e) {
      const NodeId v = network.edges()[e].dst;
      if (done[v] || !fires(rng)) continue;
      const double tv = t + sample_delay(kind, network.rate(e), config.pow_min_delay, rng);
      if (tv <= config.horizon && tv < best[v]) {
        best[v] = tv;
        frontier.push({tv, v});
      }
    }
  }

  std::vector<InfectionTime> times(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v]) times[v] = InfectionTime(best[v]);
  }
  return Cascade(std::move(times));
}

Cascade simulate_cascade(const Network& network, ModelKind kind, const SimConfig& config, std::uint64_t seed) {
  config.validate();
  if (network.n_nodes() == 0) throw SimulationError("cannot simulate on an empty population");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick_root(0, static_cast<NodeId>(network.n_nodes() - 1));
  for (std::size_t attempt = 0; attempt < config.max_retries; ++attempt) {
    Cascade c = propagate(network, kind, config, pick_root(rng), rng);
    if (c.infected_count() >= config.min_cascade_size) return c;
  }
  throw SimulationError("no cascade reached " + std::to_string(config.min_cascade_size) + " nodes in " +
                        std::to_string(config.max_retries) + " attempts");
}

CascadeSet simulate_set(const Network& network, ModelKind kind, const SimConfig& config, std::size_t n,
                        std::uint64_t seed) {
  CascadeSet set(network.n_nodes());
  for (std::size_t i = 0; i < n; ++i) set.add(simulate_cascade(network, kind, config, mix_seed(seed, i)));
  return set;
}

}  // namespace difnet
