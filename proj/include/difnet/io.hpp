#pragma once

// Text formats:
//
// Network edge list: one `src,dst[,alpha]` per line, `#` comments. A
// `# nodes=N` comment fixes the population size (otherwise max id + 1) and
// `# rates=yes` marks a rated network with no edges.
//
// Cascades: one `node_id,node_label` line per node, a single blank line,
// then one cascade per line as `id,time;id,time;...` in time order.
// Uninfected nodes are absent from the line. Node ids map to dense indices
// in order of appearance.
//
// Inferred edges: `# nodes=N`, the header `src,dst,gain,objective`, then
// one row per selected edge in selection order.
//
// Manifest: `key=value` lines.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "difnet/core.hpp"
#include "difnet/inference.hpp"

namespace difnet {

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_network(std::ostream& out, const Network& network);
Network read_network(std::istream& in);

struct CascadeFile {
  CascadeSet cascades;
  std::vector<std::string> labels;
};

/// Labels default to the decimal node id.
void write_cascades(std::ostream& out, const CascadeSet& set, std::span<const std::string> labels = {});
CascadeFile read_cascades(std::istream& in);

struct InferredFile {
  std::size_t n_nodes = 0;
  std::vector<SelectedEdge> edges;

  Network network() const;
};

void write_inferred(std::ostream& out, const InferenceResult& result, std::size_t n_nodes);
InferredFile read_inferred(std::istream& in);

class Manifest {
 public:
  void set(std::string key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  std::span<const std::pair<std::string, std::string>> entries() const { return entries_; }

  void write(std::ostream& out) const;
  static Manifest read(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

Network load_network(const std::string& path);
CascadeFile load_cascades(const std::string& path);
InferredFile load_inferred(const std::string& path);

}  // namespace difnet
