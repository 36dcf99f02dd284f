#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "difnet/core.hpp"
#include "difnet/likelihood.hpp"

namespace difnet {

/// 2x2 seed matrix, row-major {a, b, c, d} = [a b; c d]; n_nodes = 2^power.
struct KroneckerParams {
  std::array<double, 4> seed_matrix{0.5, 0.5, 0.5, 0.5};
  unsigned power = 1;

  void validate() const;
  std::size_t n_nodes() const { return std::size_t{1} << power; }
  /// Entry (u, v) of the power-th Kronecker power of the seed matrix.
  double edge_probability(NodeId u, NodeId v) const;
};

inline constexpr std::array<double, 4> kRandomSeedMatrix{0.5, 0.5, 0.5, 0.5};
inline constexpr std::array<double, 4> kHierarchicalSeedMatrix{0.9, 0.1, 0.1, 0.9};
inline constexpr std::array<double, 4> kCorePeripherySeedMatrix{0.9, 0.5, 0.5, 0.3};

struct SimConfig {
  double beta = 0.5;
  double horizon = 10.0;
  std::size_t min_cascade_size = 2;
  double rate_low = 0.5;
  double rate_high = 1.5;
  double pow_min_delay = 1.0;
  std::size_t max_retries = 1000;

  void validate() const;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Independent Bernoulli draw per ordered pair (u != v), O(n^2).
Network kronecker_network(const KroneckerParams& params, std::uint64_t seed);

/// Preferential attachment: node t >= 1 links to min(t, out_degree) distinct
/// earlier nodes drawn with probability proportional to in-degree + 1, edges
/// pointing from the new node to the chosen ones.
Network scale_free_network(std::size_t n_nodes, std::size_t out_degree, std::uint64_t seed);

/// Uniform per-edge rates in [low, high].
Network assign_rates(const Network& network, double low, double high, std::uint64_t seed);

/// Delay sampled from the normalized density of `kind` with rate `alpha`:
/// exponential, Pareto(shape alpha, scale pow_min_delay), or Rayleigh with
/// density alpha d exp(-alpha d^2 / 2).
double sample_delay(ModelKind kind, double alpha, double pow_min_delay, std::mt19937_64& rng);

/// One continuous-time independent-cascade run from `root` at time 0. Nodes
/// reached after the horizon stay UNINFECTED. No size check.
Cascade propagate(const Network& network, ModelKind kind, const SimConfig& config, NodeId root,
                  std::mt19937_64& rng);

/// Uniform root; retried with a fresh root while fewer than
/// min_cascade_size nodes are infected. Throws SimulationError after
/// max_retries rejections.
Cascade simulate_cascade(const Network& network, ModelKind kind, const SimConfig& config, std::uint64_t seed);

/// n accepted cascades, cascade i seeded from mix_seed(seed, i).
CascadeSet simulate_set(const Network& network, ModelKind kind, const SimConfig& config, std::size_t n,
                        std::uint64_t seed);

/// SplitMix64-style derivation of independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace difnet
