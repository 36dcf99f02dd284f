#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace difnet {

/// Dense node index in [0, n_nodes).
using NodeId = std::uint32_t;

/// Directed pair (src -> dst). Ordered lexicographically by (src, dst).
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr std::uint64_t edge_key(Edge e) {
  return (static_cast<std::uint64_t>(e.src) << 32) | e.dst;
}

constexpr Edge edge_from_key(std::uint64_t key) {
  return Edge{static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

struct EdgeHash {
  std::size_t operator()(Edge e) const noexcept {
    return std::hash<std::uint64_t>{}(edge_key(e));
  }
};

/// Infection time of one node in one cascade: either a finite real or the
/// UNINFECTED sentinel, which orders after every finite time. The sentinel
/// carries no numeric value; value() on it throws.
class InfectionTime {
 public:
  constexpr InfectionTime() = default;
  // Implicit on purpose so cascades can be written as {0.0, 1.5, kUninfected}.
  InfectionTime(double t);  // NOLINT(google-explicit-constructor)

  static constexpr InfectionTime uninfected() { return InfectionTime{}; }

  constexpr bool infected() const { return raw_ != kSentinel; }
  double value() const;

  friend constexpr bool operator==(InfectionTime a, InfectionTime b) { return a.raw_ == b.raw_; }
  friend constexpr std::partial_ordering operator<=>(InfectionTime a, InfectionTime b) {
    return a.raw_ <=> b.raw_;
  }

 private:
  static constexpr double kSentinel = std::numeric_limits<double>::infinity();
  double raw_ = kSentinel;
};

inline constexpr InfectionTime kUninfected = InfectionTime::uninfected();

/// One observed cascade: an infection time per node of the population.
class Cascade {
 public:
  Cascade() = default;
  explicit Cascade(std::vector<InfectionTime> times) : times_(std::move(times)) { index(); }
  Cascade(std::initializer_list<InfectionTime> times) : times_(times) { index(); }

  std::size_t size() const { return times_.size(); }
  InfectionTime time(NodeId node) const { return times_.at(node); }
  std::span<const InfectionTime> times() const { return times_; }

  std::size_t infected_count() const { return order_.size(); }
  /// Infected nodes sorted by (time, node id); built once at construction so
  /// consumers never scan the whole population.
  std::span<const NodeId> infected_by_time() const { return order_; }

  friend bool operator==(const Cascade& a, const Cascade& b) { return a.times_ == b.times_; }

 private:
  void index();

  std::vector<InfectionTime> times_;
  std::vector<NodeId> order_;
};

/// Cascades over a shared population. add() enforces the shared size.
class CascadeSet {
 public:
  CascadeSet() = default;
  explicit CascadeSet(std::size_t n_nodes) : n_nodes_(n_nodes) {}
  CascadeSet(std::size_t n_nodes, std::vector<Cascade> cascades);

  void add(Cascade cascade);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t size() const { return cascades_.size(); }
  bool empty() const { return cascades_.empty(); }
  const Cascade& operator[](std::size_t i) const { return cascades_[i]; }
  std::span<const Cascade> cascades() const { return cascades_; }

  /// First `count` cascades as a new set.
  CascadeSet prefix(std::size_t count) const;

  friend bool operator==(const CascadeSet&, const CascadeSet&) = default;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Cascade> cascades_;
};

/// Directed network without self-loops or duplicate edges. Edges are kept
/// sorted by (src, dst); rates, when present, are parallel to edges().
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n_nodes);
  Network(std::size_t n_nodes, std::vector<Edge> edges);
  Network(std::size_t n_nodes, std::vector<Edge> edges, std::vector<double> rates);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  bool has_rates() const { return rated_; }
  std::span<const double> rates() const { return rates_; }
  double rate(std::size_t edge_index) const { return rates_.at(edge_index); }

  bool contains(Edge e) const;
  std::optional<std::size_t> index_of(Edge e) const;

  /// Edge indices [first, last) whose source is `node`.
  std::pair<std::size_t, std::size_t> out_range(NodeId node) const;
  std::span<const NodeId> in_neighbors(NodeId node) const;

  Network with_rates(std::vector<double> rates) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.n_nodes_ == b.n_nodes_ && a.edges_ == b.edges_ && a.rated_ == b.rated_ &&
           a.rates_ == b.rates_;
  }

 private:
  void build_index();

  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> rates_;
  bool rated_ = false;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
};

struct Violation {
  std::size_t cascade = 0;
  std::optional<NodeId> node;
  std::string message;
};

/// Checks the cascade invariants; empty result iff the set is well formed.
std::vector<Violation> validate(const CascadeSet& set);

/// Pairs (j, i), j != i, with t_j < t_i (both finite) in some cascade.
/// Sorted by (src, dst), no duplicates.
std::vector<Edge> candidate_pairs(const CascadeSet& set);

}  // namespace difnet
