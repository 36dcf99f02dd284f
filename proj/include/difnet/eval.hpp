#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "difnet/core.hpp"
#include "difnet/inference.hpp"
#include "difnet/likelihood.hpp"
#include "difnet/simulate.hpp"

namespace difnet {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// precision = |inferred & truth| / |inferred| (1 for an empty inference),
/// recall = |inferred & truth| / |truth|. Throws when truth has no edges.
PrecisionRecall precision_recall(const Network& inferred, const Network& truth);

/// 2 |inferred & truth| / (|inferred| + |truth|). Throws when both are empty.
double accuracy(const Network& inferred, const Network& truth);

struct ScoredEdge {
  Edge edge;
  double score = 0.0;
};

/// ROC AUC over `universe`, labelled by membership in `truth`. Universe
/// edges missing from `ranked` share one score below every ranked score.
/// Ties count one half. Throws unless the universe holds both classes.
double roc_auc(std::span<const ScoredEdge> ranked, const Network& truth, std::span<const Edge> universe);

/// Selection-order scores: the i-th selected edge (0-based) scores k_max - i.
std::vector<ScoredEdge> selection_scores(const InferenceResult& result, std::size_t k_max);

struct MetricRow {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double objective = 0.0;
  double elapsed_ms_per_edge = 0.0;
};

/// One greedy run; one row per selected edge, built incrementally.
std::vector<MetricRow> sweep_k(const CascadeSet& set, const TransmissionModel& model, InferenceConfig config,
                               const Network& truth, std::size_t k_max);

/// Metric row for a fixed inferred network.
MetricRow evaluate(const Network& inferred, const Network& truth, double objective);

struct AucGainRow {
  std::size_t n_cascades = 0;
  double auc_all_trees = 0.0;
  double auc_best_tree = 0.0;
  double relative_gain = 0.0;
};

/// Both modes ranked over the candidate universe of the same cascades.
AucGainRow auc_gain_for(const CascadeSet& set, const Network& truth, const TransmissionModel& model,
                        const InferenceConfig& config);

/// Simulates max(counts) cascades once and evaluates nested prefixes of the
/// requested sizes. `counts` must be ascending. Each mode runs until
/// exhaustion (k = number of candidates).
std::vector<AucGainRow> auc_gain_experiment(const Network& truth, ModelKind kind,
                                            std::span<const std::size_t> counts, const SimConfig& sim,
                                            const TransmissionModel& model, const InferenceConfig& config,
                                            std::uint64_t seed);

void write_sweep_csv(std::ostream& out, std::span<const MetricRow> rows);
void write_auc_gain_csv(std::ostream& out, std::span<const AucGainRow> rows);

}  // namespace difnet
