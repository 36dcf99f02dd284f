#include "difnet/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace difnet {

InfectionTime::InfectionTime(double t) : raw_(t) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("infection time must be finite; use kUninfected for the sentinel");
  }
}

double InfectionTime::value() const {
  if (!infected()) throw std::logic_error("UNINFECTED has no numeric time");
  return raw_;
}

void Cascade::index() {
  order_.clear();
  for (NodeId v = 0; v < times_.size(); ++v) {
    if (times_[v].infected()) order_.push_back(v);
  }
  std::stable_sort(order_.begin(), order_.end(),
                   [this](NodeId a, NodeId b) { return times_[a] < times_[b]; });
}

CascadeSet::CascadeSet(std::size_t n_nodes, std::vector<Cascade> cascades) : n_nodes_(n_nodes) {
  cascades_.reserve(cascades.size());
  for (auto& c : cascades) add(std::move(c));
}

void CascadeSet::add(Cascade cascade) {
  if (cascade.size() != n_nodes_) {
    throw std::invalid_argument("cascade has " + std::to_string(cascade.size()) +
                                " entries, population has " + std::to_string(n_nodes_));
  }
  cascades_.push_back(std::move(cascade));
}

CascadeSet CascadeSet::prefix(std::size_t count) const {
  CascadeSet out(n_nodes_);
  count = std::min(count, cascades_.size());
  out.cascades_.assign(cascades_.begin(), cascades_.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

Network::Network(std::size_t n_nodes) : n_nodes_(n_nodes) { build_index(); }

Network::Network(std::size_t n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  build_index();
}

Network::Network(std::size_t n_nodes, std::vector<Edge> edges, std::vector<double> rates)
    : n_nodes_(n_nodes), rated_(true) {
  if (rates.size() != edges.size()) {
    throw std::invalid_argument("rate count does not match edge count");
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  edges_.reserve(edges.size());
  rates_.reserve(rates.size());
  for (std::size_t i : order) {
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
      throw std::invalid_argument("edge rate must be positive and finite");
    }
    edges_.push_back(edges[i]);
    rates_.push_back(rates[i]);
  }
  build_index();
}

void Network::build_index() {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge e = edges_[i];
    if (e.src >= n_nodes_ || e.dst >= n_nodes_) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.src == e.dst) throw std::invalid_argument("self-loop on node " + std::to_string(e.src));
    if (i > 0 && edges_[i - 1] == e) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
    }
  }

  out_offsets_.assign(n_nodes_ + 1, 0);
  in_offsets_.assign(n_nodes_ + 1, 0);
  for (const Edge e : edges_) {
    ++out_offsets_[e.src + 1];
    ++in_offsets_[e.dst + 1];
  }
  for (std::size_t v = 0; v < n_nodes_; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  in_sources_.resize(edges_.size());
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (const Edge e : edges_) in_sources_[cursor[e.dst]++] = e.src;
}

std::optional<std::size_t> Network::index_of(Edge e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

bool Network::contains(Edge e) const { return index_of(e).has_value(); }

std::pair<std::size_t, std::size_t> Network::out_range(NodeId node) const {
  return {out_offsets_.at(node), out_offsets_.at(node + 1)};
}

std::span<const NodeId> Network::in_neighbors(NodeId node) const {
  const std::size_t first = in_offsets_.at(node);
  const std::size_t last = in_offsets_.at(node + 1);
  return std::span<const NodeId>(in_sources_).subspan(first, last - first);
}

Network Network::with_rates(std::vector<double> rates) const {
  return Network(n_nodes_, edges_, std::move(rates));
}

std::vector<Violation> validate(const CascadeSet& set) {
  std::vector<Violation> out;
  for (std::size_t c = 0; c < set.size(); ++c) {
    const Cascade& cascade = set[c];
    if (cascade.size() != set.n_nodes()) {
      out.push_back({c, std::nullopt, "cascade length differs from population size"});
      continue;
    }
    bool any = false;
    for (NodeId v = 0; v < cascade.size(); ++v) {
      const InfectionTime t = cascade.time(v);
      if (!t.infected()) continue;
      any = true;
      if (t.value() < 0.0) out.push_back({c, v, "negative time"});
    }
    if (!any) out.push_back({c, std::nullopt, "no infected node"});
  }
  return out;
}

std::vector<Edge> candidate_pairs(const CascadeSet& set) {
  std::vector<std::uint64_t> keys;
  for (const Cascade& cascade : set.cascades()) {
    const auto order = cascade.infected_by_time();
    for (std::size_t b = 0; b < order.size(); ++b) {
      const InfectionTime tb = cascade.time(order[b]);
      for (std::size_t a = 0; a < b; ++a) {
        if (cascade.time(order[a]) < tb) keys.push_back(edge_key({order[a], order[b]}));
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<Edge> pairs;
  pairs.reserve(keys.size());
  for (auto k : keys) pairs.push_back(edge_from_key(k));
  return pairs;
}

}  // namespace difnet
