#include "difnet/eval.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "difnet/format.hpp"

namespace difnet {

namespace {

std::size_t overlap(const Network& a, const Network& b) {
  std::size_t hits = 0;
  for (const Edge e : a.edges()) hits += b.contains(e) ? 1 : 0;
  return hits;
}

void require_same_population(const Network& a, const Network& b) {
  if (a.n_nodes() != b.n_nodes()) {
    throw std::invalid_argument("networks have different node counts (" + std::to_string(a.n_nodes()) +
                                " vs " + std::to_string(b.n_nodes()) + ")");
  }
}

}  // namespace

PrecisionRecall precision_recall(const Network& inferred, const Network& truth) {
  require_same_population(inferred, truth);
  if (truth.edge_count() == 0) throw std::invalid_argument("recall undefined: true network has no edges");
  const double hits = static_cast<double>(overlap(inferred, truth));
  PrecisionRecall pr;
  pr.precision = inferred.edge_count() == 0 ? 1.0 : hits / static_cast<double>(inferred.edge_count());
  pr.recall = hits / static_cast<double>(truth.edge_count());
  return pr;
}

double accuracy(const Network& inferred, const Network& truth) {
  require_same_population(inferred, truth);
  const std::size_t total = inferred.edge_count() + truth.edge_count();
  if (total == 0) throw std::invalid_argument("accuracy undefined: both networks are empty");
  return 2.0 * static_cast<double>(overlap(inferred, truth)) / static_cast<double>(total);
}

double roc_auc(std::span<const ScoredEdge> ranked, const Network& truth, std::span<const Edge> universe) {
  std::unordered_map<Edge, double, EdgeHash> score_of;
  score_of.reserve(ranked.size());
  for (const auto& s : ranked) score_of.emplace(s.edge, s.score);

  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(universe.size());
  std::size_t positives = 0;
  for (const Edge e : universe) {
    auto it = score_of.find(e);
    const double s = it == score_of.end() ? -std::numeric_limits<double>::infinity() : it->second;
    const bool pos = truth.contains(e);
    positives += pos ? 1 : 0;
    items.push_back({s, pos});
  }
  const std::size_t negatives = items.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("AUC needs both true and false edges in the universe");
  }

  // Mann-Whitney U with midranks for ties.
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.score < b.score; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < items.size()) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < items.size() && items[j].score == items[i].score) {
      pos_in_group += items[j].positive ? 1 : 0;
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += midrank * static_cast<double>(pos_in_group);
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

std::vector<ScoredEdge> selection_scores(const InferenceResult& result, std::size_t k_max) {
  std::vector<ScoredEdge> out;
  out.reserve(result.edges.size());
  for (std::size_t i = 0; i < result.edges.size(); ++i) {
    out.push_back({result.edges[i].edge, static_cast<double>(k_max) - static_cast<double>(i)});
  }
  return out;
}

std::vector<MetricRow> sweep_k(const CascadeSet& set, const TransmissionModel& model, InferenceConfig config,
                               const Network& truth, std::size_t k_max) {
  if (truth.n_nodes() != set.n_nodes()) throw std::invalid_argument("truth and cascades disagree on node count");
  if (truth.edge_count() == 0) throw std::invalid_argument("true network has no edges");
  config.k = k_max;
  const InferenceResult result = greedy_infer(set, model, config);

  std::vector<MetricRow> rows;
  rows.reserve(result.edges.size());
  std::size_t hits = 0;
  const double true_edges = static_cast<double>(truth.edge_count());
  for (std::size_t i = 0; i < result.edges.size(); ++i) {
    const SelectedEdge& sel = result.edges[i];
    hits += truth.contains(sel.edge) ? 1 : 0;
    const double k = static_cast<double>(i + 1);
    MetricRow row;
    row.k = i + 1;
    row.precision = static_cast<double>(hits) / k;
    row.recall = static_cast<double>(hits) / true_edges;
    row.accuracy = 2.0 * static_cast<double>(hits) / (k + true_edges);
    row.objective = sel.objective;
    row.elapsed_ms_per_edge = (result.setup_ms + sel.elapsed_ms) / k;
    rows.push_back(row);
  }
  return rows;
}

MetricRow evaluate(const Network& inferred, const Network& truth, double objective) {
  const PrecisionRecall pr = precision_recall(inferred, truth);
  MetricRow row;
  row.k = inferred.edge_count();
  row.precision = pr.precision;
  row.recall = pr.recall;
  row.accuracy = accuracy(inferred, truth);
  row.objective = objective;
  return row;
}

AucGainRow auc_gain_for(const CascadeSet& set, const Network& truth, const TransmissionModel& model,
                        const InferenceConfig& config) {
  const std::vector<Edge> universe = candidate_pairs(set);
  if (universe.empty()) throw NoCandidatesError();

  auto auc_for = [&](Mode mode) {
    InferenceConfig cfg = config;
    cfg.mode = mode;
    cfg.k = universe.size();
    const InferenceResult result = greedy_infer(set, model, cfg);
    const auto scores = selection_scores(result, cfg.k);
    return roc_auc(scores, truth, universe);
  };

  AucGainRow row;
  row.n_cascades = set.size();
  row.auc_all_trees = auc_for(Mode::AllTrees);
  row.auc_best_tree = auc_for(Mode::BestTree);
  row.relative_gain = (row.auc_all_trees - row.auc_best_tree) / row.auc_best_tree;
  return row;
}

std::vector<AucGainRow> auc_gain_experiment(const Network& truth, ModelKind kind,
                                            std::span<const std::size_t> counts, const SimConfig& sim,
                                            const TransmissionModel& model, const InferenceConfig& config,
                                            std::uint64_t seed) {
  if (!std::is_sorted(counts.begin(), counts.end())) {
    throw std::invalid_argument("cascade counts must be ascending");
  }
  if (counts.empty()) return {};
  const CascadeSet all = simulate_set(truth, kind, sim, counts.back(), seed);
  std::vector<AucGainRow> rows;
  rows.reserve(counts.size());
  for (const std::size_t n : counts) rows.push_back(auc_gain_for(all.prefix(n), truth, model, config));
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const MetricRow> rows) {
  out << "k,precision,recall,accuracy,objective,elapsed_ms_per_edge\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_g6(r.precision) << ',' << format_g6(r.recall) << ','
        << format_g6(r.accuracy) << ',' << format_g6(r.objective) << ',' << format_g6(r.elapsed_ms_per_edge)
        << '\n';
  }
}

void write_auc_gain_csv(std::ostream& out, std::span<const AucGainRow> rows) {
  out << "n_cascades,auc_all_trees,auc_best_tree,relative_gain\n";
  for (const auto& r : rows) {
    out << r.n_cascades << ',' << format_g6(r.auc_all_trees) << ',' << format_g6(r.auc_best_tree) << ','
        << format_g6(r.relative_gain) << '\n';
  }
}

}  // namespace difnet
