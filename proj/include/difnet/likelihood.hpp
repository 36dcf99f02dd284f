#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "difnet/core.hpp"

namespace difnet {

enum class ModelKind { Exponential, PowerLaw, Rayleigh };

std::string_view to_string(ModelKind kind);
/// Accepts "exp", "pow", "ray".
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Pairwise transmission model used at inference time. Kernels are the
/// unnormalized densities with proportionality constant 1:
///   EXP  exp(-alpha * d)
///   POW  d^(-1 - alpha), zero below pow_min_delay
///   RAY  d * exp(-alpha * d^2)
struct TransmissionModel {
  ModelKind kind = ModelKind::Exponential;
  double alpha = 1.0;
  double pow_min_delay = 1.0;

  void validate() const;
};

/// epsilon: likelihood of the external-source edge. beta: prior transmission
/// probability, which cancels out of the objective and only drives simulation.
struct Hyper {
  double epsilon = 1e-9;
  double beta = 0.5;

  void validate() const;
};

/// Kernel value for delay d = t_child - t_parent; 0 for d <= 0.
double transmission_kernel(const TransmissionModel& model, double delay);

/// Throws std::logic_error when either time is UNINFECTED.
double pairwise_likelihood(const TransmissionModel& model, InfectionTime parent, InfectionTime child);

/// pairwise_likelihood / epsilon. The source edge (weight 1) is not included.
double edge_weight(const TransmissionModel& model, const Hyper& hyper, InfectionTime parent,
                   InfectionTime child);

/// Log-likelihood improvement of one cascade under `network` over the empty
/// graph: sum over infected j of log(1 + sum_{(i,j) in G, t_i < t_j} w(i,j)).
double cascade_score(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                     const Hyper& hyper);

double total_score(const CascadeSet& set, const Network& network, const TransmissionModel& model,
                   const Hyper& hyper);

/// Laplacian of the source-augmented, time-ordered weight graph with the
/// source row and column removed. Row/column r corresponds to order[r].
struct ReducedLaplacian {
  std::vector<NodeId> order;
  std::vector<double> entries;  // row-major, dim x dim

  std::size_t dim() const { return order.size(); }
  double at(std::size_t row, std::size_t col) const { return entries[row * dim() + col]; }
};

ReducedLaplacian reduced_laplacian(const Cascade& cascade, const Network& network,
                                   const TransmissionModel& model, const Hyper& hyper);

/// Sum over source-rooted spanning trees of the product of edge weights via
/// the matrix-tree theorem. The time-ordered minor is upper triangular, so
/// the determinant is the product of its diagonal.
double tree_sum_matrix(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                       const Hyper& hyper);

inline constexpr std::size_t kMaxEnumeratedInfected = 12;

/// Same quantity by explicit enumeration of every parent assignment. Throws
/// std::invalid_argument above kMaxEnumeratedInfected infected nodes.
double tree_sum_enumerate(const Cascade& cascade, const Network& network, const TransmissionModel& model,
                          const Hyper& hyper);

}  // namespace difnet
