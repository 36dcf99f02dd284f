#include "difnet/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

#include "difnet/kernels.hpp"

namespace difnet {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Occurrence {
  std::uint64_t key;
  std::uint32_t slot;
  double weight;
};

}  // namespace

void InferenceConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  hyper.validate();
}

Network InferenceResult::network(std::size_t n_nodes) const {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(e.edge);
  return Network(n_nodes, std::move(out));
}

GainLedger::GainLedger(const CascadeSet& set, const TransmissionModel& model, const Hyper& hyper, Mode mode)
    : mode_(mode) {
  model.validate();
  hyper.validate();

  std::vector<Occurrence> occ;
  cascade_slot_base_.reserve(set.size() + 1);
  slot_of_node_.resize(set.size());
  for (std::size_t c = 0; c < set.size(); ++c) {
    const Cascade& cascade = set[c];
    const auto order = cascade.infected_by_time();
    const std::size_t base = s_.size();
    cascade_slot_base_.push_back(base);
    auto& lookup = slot_of_node_[c];
    lookup.reserve(order.size());
    for (std::size_t b = 0; b < order.size(); ++b) {
      const auto slot = static_cast<std::uint32_t>(base + b);
      lookup.emplace_back(order[b], slot);
      const InfectionTime tb = cascade.time(order[b]);
      for (std::size_t a = 0; a < b; ++a) {
        const InfectionTime ta = cascade.time(order[a]);
        if (!(ta < tb)) continue;
        occ.push_back({edge_key({order[a], order[b]}), slot, edge_weight(model, hyper, ta, tb)});
      }
    }
    std::sort(lookup.begin(), lookup.end());
    s_.resize(base + order.size(), 1.0);
  }
  cascade_slot_base_.push_back(s_.size());
  if (s_.size() > 0x7fffffffu) throw std::length_error("too many infected slots for 32-bit indices");

  std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) {
    return a.key != b.key ? a.key < b.key : a.slot < b.slot;
  });

  occ_slots_.reserve(occ.size());
  occ_weights_.reserve(occ.size());
  occ_offsets_.push_back(0);
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i > 0 && occ[i].key != occ[i - 1].key) occ_offsets_.push_back(i);
    if (i == 0 || occ[i].key != occ[i - 1].key) candidates_.push_back(edge_from_key(occ[i].key));
    occ_slots_.push_back(occ[i].slot);
    occ_weights_.push_back(occ[i].weight);
  }
  if (!occ.empty()) occ_offsets_.push_back(occ.size());

  std::vector<std::uint32_t> dense(set.n_nodes(), ~std::uint32_t{0});
  std::uint32_t next = 0;
  target_index_.reserve(candidates_.size());
  for (const Edge e : candidates_) {
    if (dense[e.dst] == ~std::uint32_t{0}) dense[e.dst] = next++;
    target_index_.push_back(dense[e.dst]);
  }
  target_invalidated_at_.assign(next, 0);

  selected_.assign(candidates_.size(), 0);
  cached_.assign(candidates_.size(), 0.0);
  stamp_.assign(candidates_.size(), kNever);
}

std::optional<std::size_t> GainLedger::find(Edge e) const {
  auto it = std::lower_bound(candidates_.begin(), candidates_.end(), e);
  if (it == candidates_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - candidates_.begin());
}

double GainLedger::marginal_gain(std::size_t c) const {
  const std::size_t first = occ_offsets_[c];
  const std::size_t n = occ_offsets_[c + 1] - first;
  const auto& k = kernels::active();
  return mode_ == Mode::AllTrees
             ? k.sum_log_ratio(s_.data(), occ_slots_.data() + first, occ_weights_.data() + first, n)
             : k.sum_log_ratio_max(s_.data(), occ_slots_.data() + first, occ_weights_.data() + first, n);
}

double GainLedger::marginal_gain(Edge e) const {
  const auto c = find(e);
  return c ? marginal_gain(*c) : 0.0;
}

void GainLedger::apply(std::size_t c) {
  if (c >= candidates_.size()) throw std::logic_error("candidate index out of range");
  if (selected_[c]) {
    const Edge e = candidates_[c];
    throw std::logic_error("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                           " is already selected");
  }
  objective_ += marginal_gain(c);
  for (std::size_t i = occ_offsets_[c]; i < occ_offsets_[c + 1]; ++i) {
    double& s = s_[occ_slots_[i]];
    s = mode_ == Mode::AllTrees ? s + occ_weights_[i] : std::max(s, occ_weights_[i]);
  }
  selected_[c] = 1;
  selection_.push_back(candidates_[c]);
  target_invalidated_at_[target_index_[c]] = round();
}

void GainLedger::apply(Edge e) {
  const auto c = find(e);
  if (!c) {
    throw std::logic_error("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                           " is not a candidate");
  }
  apply(*c);
}

bool GainLedger::stale(std::size_t c) const {
  return stamp_[c] == kNever || stamp_[c] < target_invalidated_at_[target_index_[c]];
}

double GainLedger::refresh(std::size_t c) {
  cached_[c] = marginal_gain(c);
  stamp_[c] = round();
  return cached_[c];
}

double GainLedger::in_weight(std::size_t cascade, NodeId node) const {
  const auto& lookup = slot_of_node_.at(cascade);
  auto it = std::lower_bound(lookup.begin(), lookup.end(), std::pair<NodeId, std::uint32_t>{node, 0});
  if (it == lookup.end() || it->first != node) {
    throw std::out_of_range("node " + std::to_string(node) + " is not infected in cascade " +
                            std::to_string(cascade));
  }
  return s_[it->second];
}

namespace {

struct HeapEntry {
  double gain;
  std::uint32_t candidate;
};

// Max-heap on gain; equal gains pop the smaller candidate index first, and
// candidate indices follow (src, dst) order.
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.gain != b.gain ? a.gain < b.gain : a.candidate > b.candidate;
  }
};

void record(GainLedger& ledger, std::size_t c, double gain, Clock::time_point start, InferenceResult& out) {
  ledger.apply(c);
  out.edges.push_back({ledger.candidates()[c], gain, ledger.objective(), ms_since(start)});
}

void run_lazy(GainLedger& ledger, const InferenceConfig& config, Clock::time_point start,
              InferenceResult& out) {
  std::vector<HeapEntry> init;
  init.reserve(ledger.candidate_count());
  for (std::size_t c = 0; c < ledger.candidate_count(); ++c) {
    if (!ledger.selected(c)) init.push_back({ledger.refresh(c), static_cast<std::uint32_t>(c)});
  }
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap(HeapOrder{}, std::move(init));

  while (out.edges.size() < config.k) {
    if (heap.empty()) {
      out.exhausted = true;
      return;
    }
    HeapEntry top = heap.top();
    heap.pop();
    if (ledger.stale(top.candidate)) {
      top.gain = ledger.refresh(top.candidate);
      heap.push(top);
      continue;
    }
    if (config.stop_at_zero_gain && top.gain <= 0.0) {
      out.exhausted = true;
      return;
    }
    record(ledger, top.candidate, top.gain, start, out);
  }
}

void run_naive(GainLedger& ledger, const InferenceConfig& config, Clock::time_point start,
               InferenceResult& out) {
  while (out.edges.size() < config.k) {
    std::optional<std::size_t> best;
    double best_gain = 0.0;
    for (std::size_t c = 0; c < ledger.candidate_count(); ++c) {
      if (ledger.selected(c)) continue;
      const double g = ledger.refresh(c);
      if (!best || g > best_gain) {
        best = c;
        best_gain = g;
      }
    }
    if (!best || (config.stop_at_zero_gain && best_gain <= 0.0)) {
      out.exhausted = true;
      return;
    }
    record(ledger, *best, best_gain, start, out);
  }
}

}  // namespace

InferenceResult greedy_infer(GainLedger& ledger, const InferenceConfig& config) {
  config.validate();
  if (ledger.candidate_count() == 0) throw NoCandidatesError();
  InferenceResult out;
  out.candidate_count = ledger.candidate_count();
  const auto start = Clock::now();
  if (config.lazy) {
    run_lazy(ledger, config, start, out);
  } else {
    run_naive(ledger, config, start, out);
  }
  if (ledger.round() == ledger.candidate_count()) out.exhausted = true;
  out.online_bound = online_bound(ledger, config.k);
  return out;
}

InferenceResult greedy_infer(const CascadeSet& set, const TransmissionModel& model,
                             const InferenceConfig& config) {
  config.validate();
  const auto start = Clock::now();
  GainLedger ledger(set, model, config.hyper, config.mode);
  const double setup = ms_since(start);
  InferenceResult out = greedy_infer(ledger, config);
  out.setup_ms = setup;
  return out;
}

double online_bound(const GainLedger& ledger, std::size_t k) {
  std::vector<double> gains;
  gains.reserve(ledger.candidate_count() - ledger.round());
  for (std::size_t c = 0; c < ledger.candidate_count(); ++c) {
    if (ledger.selected(c)) continue;
    const double g = ledger.marginal_gain(c);
    if (g > 0.0) gains.push_back(g);
  }
  const std::size_t take = std::min(k, gains.size());
  std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(take), gains.end(),
                    std::greater<>());
  double bound = ledger.objective();
  for (std::size_t i = 0; i < take; ++i) bound += gains[i];
  return bound;
}

double exhaustive_opt(const CascadeSet& set, const TransmissionModel& model, const Hyper& hyper,
                      std::size_t k) {
  const std::vector<Edge> cand = candidate_pairs(set);
  const std::size_t m = cand.size();
  if (k >= m) return total_score(set, Network(set.n_nodes(), cand), model, hyper);

  double subsets = 1.0;
  for (std::size_t i = 0; i < k; ++i) subsets = subsets * static_cast<double>(m - i) / static_cast<double>(i + 1);
  if (subsets > kMaxExhaustiveSubsets) {
    throw std::invalid_argument("exhaustive search over " + std::to_string(subsets) +
                                " subsets exceeds the 1e6 guard");
  }

  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  double best = 0.0;
  std::vector<Edge> edges(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) edges[i] = cand[pick[i]];
    best = std::max(best, total_score(set, Network(set.n_nodes(), edges), model, hyper));
    // Next k-combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

double best_tree_score(const CascadeSet& set, const Network& network, const TransmissionModel& model,
                       const Hyper& hyper) {
  double total = 0.0;
  for (const Cascade& cascade : set.cascades()) {
    for (NodeId child = 0; child < cascade.size(); ++child) {
      const InfectionTime tc = cascade.time(child);
      if (!tc.infected()) continue;
      double best = 1.0;
      for (const NodeId parent : network.in_neighbors(child)) {
        const InfectionTime tp = cascade.time(parent);
        if (tp.infected() && tp < tc) best = std::max(best, edge_weight(model, hyper, tp, tc));
      }
      total += std::log(best);
    }
  }
  return total;
}

}  // namespace difnet
