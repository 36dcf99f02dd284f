#include "difnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "difnet/format.hpp"

namespace difnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError(where(line_no) + "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw DataError(where(line_no) + std::string(what) + " must be finite");
  }
  return value;
}

// `# key=value` directive in a comment line, if any.
std::optional<std::pair<std::string_view, std::string_view>> directive(std::string_view line) {
  std::string_view body = trim(line.substr(1));
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return std::pair{trim(body.substr(0, eq)), trim(body.substr(eq + 1))};
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace

void write_network(std::ostream& out, const Network& network) {
  out << "# nodes=" << network.n_nodes() << '\n';
  if (network.has_rates()) out << "# rates=yes\n";
  for (std::size_t i = 0; i < network.edge_count(); ++i) {
    const Edge e = network.edges()[i];
    out << e.src << ',' << e.dst;
    if (network.has_rates()) out << ',' << format_exact(network.rate(i));
    out << '\n';
  }
}

Network read_network(std::istream& in) {
  std::optional<std::size_t> n_nodes;
  bool rated_directive = false;
  std::optional<bool> with_rates;
  std::vector<Edge> edges;
  std::vector<double> rates;
  std::size_t max_id_plus_one = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (const auto d = directive(line)) {
        if (d->first == "nodes") n_nodes = parse_number<std::size_t>(d->second, line_no, "node count");
        if (d->first == "rates") rated_directive = d->second == "yes";
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 2 && fields.size() != 3) {
      throw DataError(where(line_no) + "expected src,dst[,alpha]");
    }
    const bool has_rate = fields.size() == 3;
    if (with_rates && *with_rates != has_rate) {
      throw DataError(where(line_no) + "either every edge or no edge carries a rate");
    }
    with_rates = has_rate;
    const Edge e{parse_number<NodeId>(fields[0], line_no, "source id"),
                 parse_number<NodeId>(fields[1], line_no, "target id")};
    edges.push_back(e);
    max_id_plus_one = std::max<std::size_t>({max_id_plus_one, std::size_t{e.src} + 1, std::size_t{e.dst} + 1});
    if (has_rate) rates.push_back(parse_number<double>(fields[2], line_no, "rate"));
  }
  const std::size_t n = n_nodes.value_or(max_id_plus_one);
  if (max_id_plus_one > n) throw DataError("edge endpoint exceeds declared node count " + std::to_string(n));
  try {
    if (with_rates.value_or(rated_directive)) return Network(n, std::move(edges), std::move(rates));
    return Network(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

void write_cascades(std::ostream& out, const CascadeSet& set, std::span<const std::string> labels) {
  if (!labels.empty() && labels.size() != set.n_nodes()) {
    throw std::invalid_argument("label count does not match population size");
  }
  for (NodeId v = 0; v < set.n_nodes(); ++v) {
    out << v << ',';
    if (labels.empty()) {
      out << v;
    } else {
      out << labels[v];
    }
    out << '\n';
  }
  out << '\n';
  for (const Cascade& c : set.cascades()) {
    bool first = true;
    for (const NodeId v : c.infected_by_time()) {
      if (!first) out << ';';
      first = false;
      out << v << ',' << format_exact(c.time(v).value());
    }
    out << '\n';
  }
}

CascadeFile read_cascades(std::istream& in) {
  CascadeFile file;
  std::unordered_map<std::string, NodeId> index;
  std::string raw;
  std::size_t line_no = 0;
  bool in_nodes = true;
  std::vector<std::vector<InfectionTime>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (in_nodes) {
      if (line.empty()) {
        in_nodes = false;
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string_view::npos) throw DataError(where(line_no) + "expected node_id,node_label");
      const std::string id(trim(line.substr(0, comma)));
      if (id.empty()) throw DataError(where(line_no) + "empty node id");
      if (!index.emplace(id, static_cast<NodeId>(file.labels.size())).second) {
        throw DataError(where(line_no) + "duplicate node id " + id);
      }
      file.labels.emplace_back(trim(line.substr(comma + 1)));
      continue;
    }
    if (line.empty()) continue;
    std::vector<InfectionTime> times(file.labels.size());
    std::optional<double> previous;
    for (const auto entry : split(line, ';')) {
      const auto fields = split(entry, ',');
      if (fields.size() != 2) throw DataError(where(line_no) + "expected id,time entries");
      auto it = index.find(std::string(fields[0]));
      if (it == index.end()) throw DataError(where(line_no) + "unknown node id " + std::string(fields[0]));
      const double t = parse_number<double>(fields[1], line_no, "time");
      if (t < 0.0) throw DataError(where(line_no) + "negative time");
      if (previous && t < *previous) throw DataError(where(line_no) + "times must be in increasing order");
      if (times[it->second].infected()) {
        throw DataError(where(line_no) + "node " + std::string(fields[0]) + " appears twice");
      }
      times[it->second] = InfectionTime(t);
      previous = t;
    }
    rows.push_back(std::move(times));
  }
  file.cascades = CascadeSet(file.labels.size());
  for (auto& r : rows) file.cascades.add(Cascade(std::move(r)));
  return file;
}

Network InferredFile::network() const {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(e.edge);
  return Network(n_nodes, std::move(out));
}

void write_inferred(std::ostream& out, const InferenceResult& result, std::size_t n_nodes) {
  out << "# nodes=" << n_nodes << '\n';
  out << "src,dst,gain,objective\n";
  for (const auto& e : result.edges) {
    out << e.edge.src << ',' << e.edge.dst << ',' << format_g6(e.gain) << ',' << format_g6(e.objective) << '\n';
  }
}

InferredFile read_inferred(std::istream& in) {
  InferredFile file;
  std::optional<std::size_t> n_nodes;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t max_id_plus_one = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (const auto d = directive(line); d && d->first == "nodes") {
        n_nodes = parse_number<std::size_t>(d->second, line_no, "node count");
      }
      continue;
    }
    if (!header_seen) {
      if (line != "src,dst,gain,objective") throw DataError(where(line_no) + "missing src,dst,gain,objective header");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw DataError(where(line_no) + "expected src,dst,gain,objective");
    SelectedEdge e;
    e.edge = {parse_number<NodeId>(fields[0], line_no, "source id"),
              parse_number<NodeId>(fields[1], line_no, "target id")};
    e.gain = parse_number<double>(fields[2], line_no, "gain");
    e.objective = parse_number<double>(fields[3], line_no, "objective");
    max_id_plus_one = std::max<std::size_t>({max_id_plus_one, std::size_t{e.edge.src} + 1, std::size_t{e.edge.dst} + 1});
    file.edges.push_back(e);
  }
  file.n_nodes = n_nodes.value_or(max_id_plus_one);
  if (max_id_plus_one > file.n_nodes) throw DataError("inferred edge endpoint exceeds declared node count");
  return file;
}

void Manifest::set(std::string key, std::string value) {
  if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos) {
    throw std::invalid_argument("manifest keys cannot contain '=' or newlines; values cannot contain newlines");
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> Manifest::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Manifest::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

Manifest Manifest::read(std::istream& in) {
  Manifest m;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty() || raw.front() == '#') continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw DataError(where(line_no) + "expected key=value");
    m.set(raw.substr(0, eq), raw.substr(eq + 1));
  }
  return m;
}

Network load_network(const std::string& path) {
  auto in = open_input(path);
  return read_network(in);
}

CascadeFile load_cascades(const std::string& path) {
  auto in = open_input(path);
  return read_cascades(in);
}

InferredFile load_inferred(const std::string& path) {
  auto in = open_input(path);
  return read_inferred(in);
}

}  // namespace difnet
