#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "difnet/core.hpp"
#include "difnet/likelihood.hpp"

namespace difnet {

/// ALL_TREES: node term log(1 + sum of selected in-weights).
/// BEST_TREE: node term log(max(1, largest selected in-weight)), a
/// most-probable-tree baseline.
enum class Mode { AllTrees, BestTree };

struct InferenceConfig {
  std::size_t k = 1;
  Mode mode = Mode::AllTrees;
  bool stop_at_zero_gain = true;
  bool lazy = true;
  Hyper hyper;

  void validate() const;
};

struct SelectedEdge {
  Edge edge;
  double gain = 0.0;
  double objective = 0.0;
  double elapsed_ms = 0.0;  // since the start of the selection loop
};

struct InferenceResult {
  std::vector<SelectedEdge> edges;
  bool exhausted = false;
  double online_bound = 0.0;
  std::size_t candidate_count = 0;
  double setup_ms = 0.0;

  double objective() const { return edges.empty() ? 0.0 : edges.back().objective; }
  Network network(std::size_t n_nodes) const;
};

class NoCandidatesError : public std::runtime_error {
 public:
  NoCandidatesError() : std::runtime_error("no candidate edges: no cascade orders two infected nodes") {}
};

/// Sufficient statistics for incremental gains. For every infected (cascade,
/// node) slot it holds S = 1 + sum of selected in-weights (ALL_TREES) or
/// max(1, selected in-weights) (BEST_TREE). Each candidate owns the
/// contiguous occurrences (slot of its target, weight) of the cascades that
/// order it in time, so a gain touches only those slots.
///
/// Selecting (j, i) changes only slots of node i, which invalidates exactly
/// the cached gains of candidates (., i).
class GainLedger {
 public:
  GainLedger(const CascadeSet& set, const TransmissionModel& model, const Hyper& hyper,
             Mode mode = Mode::AllTrees);

  Mode mode() const { return mode_; }
  std::size_t candidate_count() const { return candidates_.size(); }
  std::span<const Edge> candidates() const { return candidates_; }
  std::optional<std::size_t> find(Edge e) const;

  /// Exact objective change from adding candidate `c`; recomputed from S.
  double marginal_gain(std::size_t c) const;
  /// 0 for pairs that are not candidates.
  double marginal_gain(Edge e) const;

  /// Adds a candidate to the selection. Throws std::logic_error when the
  /// edge is already selected or is not a candidate.
  void apply(std::size_t c);
  void apply(Edge e);

  bool selected(std::size_t c) const { return selected_[c] != 0; }
  std::span<const Edge> selected_edges() const { return selection_; }
  std::size_t round() const { return selection_.size(); }
  double objective() const { return objective_; }

  /// Lazy-evaluation cache. A cached gain is stale when it was computed
  /// before the last selection that targeted the candidate's destination.
  double cached_gain(std::size_t c) const { return cached_[c]; }
  bool stale(std::size_t c) const;
  double refresh(std::size_t c);

  /// S for an infected node of a cascade (tests and diagnostics).
  double in_weight(std::size_t cascade, NodeId node) const;
  std::span<const double> slots() const { return s_; }
  std::size_t occurrence_count(std::size_t c) const { return occ_offsets_[c + 1] - occ_offsets_[c]; }

 private:
  static constexpr std::uint64_t kNever = ~std::uint64_t{0};

  Mode mode_;
  std::vector<double> s_;
  std::vector<std::size_t> cascade_slot_base_;
  std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> slot_of_node_;

  std::vector<Edge> candidates_;
  std::vector<std::uint32_t> target_index_;  // candidate -> dense target id
  std::vector<std::size_t> occ_offsets_;
  std::vector<std::uint32_t> occ_slots_;
  std::vector<double> occ_weights_;

  std::vector<std::uint8_t> selected_;
  std::vector<Edge> selection_;
  std::vector<double> cached_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::uint64_t> target_invalidated_at_;
  double objective_ = 0.0;
};

/// Greedy maximization with lazy evaluation (or a full rescan per round when
/// config.lazy is false). Ties resolve to the lexicographically smallest
/// (src, dst), so both strategies select identical sequences.
InferenceResult greedy_infer(GainLedger& ledger, const InferenceConfig& config);

/// Builds the ledger and runs greedy_infer. Throws NoCandidatesError when
/// the cascades yield no candidate edge.
InferenceResult greedy_infer(const CascadeSet& set, const TransmissionModel& model,
                             const InferenceConfig& config);

/// Submodularity bound on the best objective reachable with k edges:
/// current objective plus the k largest current marginal gains.
double online_bound(const GainLedger& ledger, std::size_t k);

inline constexpr double kMaxExhaustiveSubsets = 1e6;

/// Exact maximum of total_score over all k-subsets of candidate edges.
/// Throws std::invalid_argument when C(|candidates|, k) exceeds 1e6.
double exhaustive_opt(const CascadeSet& set, const TransmissionModel& model, const Hyper& hyper,
                      std::size_t k);

/// From-scratch BEST_TREE objective of `network`.
double best_tree_score(const CascadeSet& set, const Network& network, const TransmissionModel& model,
                       const Hyper& hyper);

}  // namespace difnet
