#include "difnet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "difnet/eval.hpp"
#include "difnet/format.hpp"
#include "difnet/inference.hpp"
#include "difnet/io.hpp"
#include "difnet/kernels.hpp"
#include "difnet/likelihood.hpp"
#include "difnet/simulate.hpp"

namespace difnet::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename F>
void as_usage(const std::string& field, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(field + ": " + e.what());
  }
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_field(std::string_view text, const std::string& field) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(field + ": malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::array<double, 4> parse_seed_matrix(const std::string& text) {
  const auto parts = split_commas(text);
  if (parts.size() != 4) throw UsageError("--seed-matrix: expected four comma-separated probabilities a,b,c,d");
  std::array<double, 4> m{};
  for (std::size_t i = 0; i < 4; ++i) {
    m[i] = parse_field<double>(parts[i], "--seed-matrix");
    if (!(m[i] >= 0.0 && m[i] <= 1.0)) {
      throw UsageError("--seed-matrix: probability out of range [0, 1]: " + std::string(parts[i]));
    }
  }
  return m;
}

ModelKind parse_likelihood(const std::string& name) {
  const auto kind = parse_model_kind(name);
  if (!kind) throw UsageError("--likelihood: expected exp, pow or ray, got '" + name + "'");
  return *kind;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

struct InferFlags {
  std::size_t k = 0;
  double epsilon = 1e-9;
  std::string likelihood = "exp";
  double alpha = 1.0;
  double pow_min_delay = 1.0;
  std::string mode = "all-trees";
  bool no_lazy = false;
  bool keep_going = false;

  void add_to(CLI::App& sub, bool with_k) {
    if (with_k) sub.add_option("--k", k, "Maximum number of edges to select")->required();
    sub.add_option("--epsilon", epsilon, "Likelihood of the external-source edge, in (0,1)");
    sub.add_option("--likelihood", likelihood, "Transmission model: exp, pow or ray");
    sub.add_option("--alpha", alpha, "Global transmission rate used for inference");
    sub.add_option("--pow-min-delay", pow_min_delay, "Power-law delay cutoff");
    sub.add_option("--mode", mode, "all-trees or best-tree");
    sub.add_flag("--no-lazy", no_lazy, "Rescan every candidate each round");
    sub.add_flag("--keep-going", keep_going, "Keep selecting after gains reach zero");
  }

  TransmissionModel model() const {
    TransmissionModel m{parse_likelihood(likelihood), alpha, pow_min_delay};
    as_usage("--alpha/--pow-min-delay", [&] { m.validate(); });
    return m;
  }

  InferenceConfig config(bool check_k) const {
    InferenceConfig c;
    c.k = check_k ? k : std::max<std::size_t>(k, 1);
    if (mode == "all-trees") {
      c.mode = Mode::AllTrees;
    } else if (mode == "best-tree") {
      c.mode = Mode::BestTree;
    } else {
      throw UsageError("--mode: expected all-trees or best-tree, got '" + mode + "'");
    }
    c.lazy = !no_lazy;
    c.stop_at_zero_gain = !keep_going;
    c.hyper.epsilon = epsilon;
    if (check_k && k < 1) throw UsageError("--k: must be >= 1");
    as_usage("--epsilon", [&] { c.hyper.validate(); });
    return c;
  }
};

struct SimFlags {
  std::string likelihood = "exp";
  double beta = 0.5;
  double horizon = 10.0;
  std::size_t min_size = 2;
  double pow_min_delay = 1.0;
  std::uint64_t rng = 1;

  void add_to(CLI::App& sub) {
    sub.add_option("--likelihood", likelihood, "Transmission model: exp, pow or ray");
    sub.add_option("--beta", beta, "Per-edge transmission probability");
    sub.add_option("--horizon", horizon, "Observation window");
    sub.add_option("--min-size", min_size, "Minimum infected nodes per cascade");
    sub.add_option("--pow-min-delay", pow_min_delay, "Power-law minimum delay");
    sub.add_option("--rng", rng, "Random seed");
  }

  SimConfig config() const {
    SimConfig c;
    c.beta = beta;
    c.horizon = horizon;
    c.min_cascade_size = min_size;
    c.pow_min_delay = pow_min_delay;
    as_usage("--beta/--horizon/--min-size", [&] { c.validate(); });
    return c;
  }
};

void record_options(const CLI::App& sub, Manifest& manifest) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string& name = opt->get_lnames().front();
    std::string value;
    if (opt->get_type_size() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (std::size_t i = 0; i < opt->results().size(); ++i) value += (i ? "," : "") + opt->results()[i];
    } else {
      value = opt->get_default_str();
    }
    manifest.set("param." + name, value);
  }
}

class Runner {
 public:
  Runner(std::vector<std::string> args, std::ostream& out, std::ostream& err)
      : args_(std::move(args)), out_(out), err_(err) {}

  int run();

 private:
  void write_manifest(const CLI::App& sub, const std::string& output_path) const;

  void generate();
  void simulate();
  void infer();
  void evaluate_cmd();
  void sweep();
  void aucgain();
  int replay();

  std::vector<std::string> args_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

  CLI::App app_{"Diffusion network inference from infection-time cascades", "difnet"};
  std::string simd_ = "auto";

  // generate
  std::string gen_model_, gen_matrix_ = "0.5,0.5,0.5,0.5", gen_out_;
  unsigned gen_power_ = 0;
  std::size_t gen_nodes_ = 0, gen_out_degree_ = 2;
  double gen_rate_low_ = 0.5, gen_rate_high_ = 1.5;
  std::uint64_t gen_rng_ = 1;

  // simulate
  std::string sim_network_, sim_out_;
  std::size_t sim_cascades_ = 0;
  SimFlags sim_;

  // infer / sweep / aucgain
  std::string inf_cascades_, inf_out_, truth_path_, inferred_path_, csv_out_, counts_ = "25,50,100,200";
  std::size_t k_max_ = 0;
  InferFlags inf_;
  SimFlags auc_sim_;

  std::string manifest_path_;
};

void Runner::write_manifest(const CLI::App& sub, const std::string& output_path) const {
  Manifest m;
  m.set("tool", "difnet");
  m.set("version", kVersion);
  m.set("command", sub.get_name());
  for (std::size_t i = 0; i < args_.size(); ++i) m.set("arg." + std::to_string(i), args_[i]);
  m.set("param.simd", simd_);
  record_options(sub, m);
  m.set("output", output_path);
  m.set("kernel_isa", std::string(kernels::to_string(kernels::active_isa())));
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  m.set("elapsed_ms", format_g6(ms));
  auto f = open_output(output_path + ".manifest");
  m.write(f);
}

void Runner::generate() {
  const auto* sub = app_.get_subcommand("generate");
  Network net;
  if (gen_model_ == "kronecker") {
    if (gen_power_ == 0) throw UsageError("--power: required for the kronecker model");
    KroneckerParams params{parse_seed_matrix(gen_matrix_), gen_power_};
    as_usage("--power", [&] { params.validate(); });
    net = kronecker_network(params, mix_seed(gen_rng_, 0));
  } else if (gen_model_ == "scalefree") {
    if (gen_nodes_ == 0) throw UsageError("--nodes: required for the scalefree model");
    if (gen_out_degree_ < 1 || gen_out_degree_ >= gen_nodes_) {
      throw UsageError("--out-degree: must satisfy 1 <= out-degree < nodes");
    }
    net = scale_free_network(gen_nodes_, gen_out_degree_, mix_seed(gen_rng_, 0));
  } else {
    throw UsageError("--model: expected kronecker or scalefree, got '" + gen_model_ + "'");
  }
  if (!(gen_rate_low_ > 0.0) || !(gen_rate_low_ <= gen_rate_high_)) {
    throw UsageError("--rate-low/--rate-high: need 0 < rate-low <= rate-high");
  }
  net = assign_rates(net, gen_rate_low_, gen_rate_high_, mix_seed(gen_rng_, 1));
  auto f = open_output(gen_out_);
  write_network(f, net);
  f.close();
  write_manifest(*sub, gen_out_);
  out_ << "nodes=" << net.n_nodes() << " edges=" << net.edge_count() << '\n';
}

void Runner::simulate() {
  const auto* sub = app_.get_subcommand("simulate");
  const ModelKind kind = parse_likelihood(sim_.likelihood);
  const SimConfig config = sim_.config();
  const Network net = load_network(sim_network_);
  if (!net.has_rates()) throw DataError("network '" + sim_network_ + "' carries no per-edge rates");
  CascadeSet set;
  try {
    set = simulate_set(net, kind, config, sim_cascades_, sim_.rng);
  } catch (const SimulationError& e) {
    throw DataError(e.what());
  }
  auto f = open_output(sim_out_);
  write_cascades(f, set);
  f.close();
  write_manifest(*sub, sim_out_);
  out_ << "cascades=" << set.size() << '\n';
}

void Runner::infer() {
  const auto* sub = app_.get_subcommand("infer");
  const TransmissionModel model = inf_.model();
  const InferenceConfig config = inf_.config(true);
  const CascadeFile file = load_cascades(inf_cascades_);
  const InferenceResult result = greedy_infer(file.cascades, model, config);
  auto f = open_output(inf_out_);
  write_inferred(f, result, file.cascades.n_nodes());
  f.close();
  write_manifest(*sub, inf_out_);
  out_ << "candidates=" << result.candidate_count << " selected=" << result.edges.size()
       << " exhausted=" << (result.exhausted ? "yes" : "no") << " objective=" << format_g6(result.objective())
       << " online_bound=" << format_g6(result.online_bound) << '\n';
}

void Runner::evaluate_cmd() {
  const auto* sub = app_.get_subcommand("evaluate");
  const InferredFile inferred = load_inferred(inferred_path_);
  const Network truth = load_network(truth_path_);
  if (inferred.n_nodes != truth.n_nodes()) {
    throw DataError("node-count mismatch: inferred has " + std::to_string(inferred.n_nodes) + ", truth has " +
                    std::to_string(truth.n_nodes()));
  }
  const double objective = inferred.edges.empty() ? 0.0 : inferred.edges.back().objective;
  const MetricRow row = evaluate(inferred.network(), truth, objective);
  const MetricRow rows[] = {row};
  if (csv_out_.empty()) {
    write_sweep_csv(out_, rows);
  } else {
    auto f = open_output(csv_out_);
    write_sweep_csv(f, rows);
    f.close();
    write_manifest(*sub, csv_out_);
  }
}

void Runner::sweep() {
  const auto* sub = app_.get_subcommand("sweep");
  const TransmissionModel model = inf_.model();
  InferenceConfig config = inf_.config(false);
  if (k_max_ < 1) throw UsageError("--k-max: must be >= 1");
  const CascadeFile file = load_cascades(inf_cascades_);
  const Network truth = load_network(truth_path_);
  if (file.cascades.n_nodes() != truth.n_nodes()) {
    throw DataError("node-count mismatch: cascades have " + std::to_string(file.cascades.n_nodes()) +
                    " nodes, truth has " + std::to_string(truth.n_nodes()));
  }
  const auto rows = sweep_k(file.cascades, model, config, truth, k_max_);
  if (csv_out_.empty()) {
    write_sweep_csv(out_, rows);
  } else {
    auto f = open_output(csv_out_);
    write_sweep_csv(f, rows);
    f.close();
    write_manifest(*sub, csv_out_);
  }
}

void Runner::aucgain() {
  const auto* sub = app_.get_subcommand("aucgain");
  const ModelKind kind = parse_likelihood(auc_sim_.likelihood);
  const SimConfig sim = auc_sim_.config();
  TransmissionModel model = inf_.model();
  model.kind = kind;
  const InferenceConfig config = inf_.config(false);
  std::vector<std::size_t> counts;
  for (const auto part : split_commas(counts_)) counts.push_back(parse_field<std::size_t>(part, "--counts"));
  if (!std::is_sorted(counts.begin(), counts.end()) || counts.empty() || counts.front() == 0) {
    throw UsageError("--counts: expected ascending positive integers");
  }
  const Network truth = load_network(truth_path_);
  if (!truth.has_rates()) throw DataError("network '" + truth_path_ + "' carries no per-edge rates");
  std::vector<AucGainRow> rows;
  try {
    rows = auc_gain_experiment(truth, kind, counts, sim, model, config, auc_sim_.rng);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  if (csv_out_.empty()) {
    write_auc_gain_csv(out_, rows);
  } else {
    auto f = open_output(csv_out_);
    write_auc_gain_csv(f, rows);
    f.close();
    write_manifest(*sub, csv_out_);
  }
}

int Runner::replay() {
  std::ifstream in(manifest_path_);
  if (!in) throw DataError("cannot open '" + manifest_path_ + "'");
  const Manifest m = Manifest::read(in);
  std::vector<std::string> args;
  for (std::size_t i = 0;; ++i) {
    auto v = m.get("arg." + std::to_string(i));
    if (!v) break;
    args.push_back(*v);
  }
  if (args.empty()) throw DataError("manifest '" + manifest_path_ + "' records no arguments");
  return cli::run(args, out_, err_);
}

int Runner::run() {
  app_.option_defaults()->always_capture_default();
  app_.require_subcommand(1);
  app_.set_version_flag("--version", kVersion);
  app_.add_option("--simd", simd_, "Gain kernel ISA: auto, scalar or avx2");

  auto* gen = app_.add_subcommand("generate", "Generate a ground-truth network with per-edge rates");
  gen->add_option("--model", gen_model_, "kronecker or scalefree")->required();
  gen->add_option("--seed-matrix", gen_matrix_, "Kronecker seed matrix a,b,c,d");
  gen->add_option("--power", gen_power_, "Kronecker power (nodes = 2^power)");
  gen->add_option("--nodes", gen_nodes_, "Scale-free node count");
  gen->add_option("--out-degree", gen_out_degree_, "Scale-free edges per new node");
  gen->add_option("--rate-low", gen_rate_low_, "Lower bound of per-edge rates");
  gen->add_option("--rate-high", gen_rate_high_, "Upper bound of per-edge rates");
  gen->add_option("--rng", gen_rng_, "Random seed");
  gen->add_option("--out", gen_out_, "Output edge-list file")->required();

  auto* sim = app_.add_subcommand("simulate", "Simulate cascades over a rated network");
  sim->add_option("--network", sim_network_, "Edge-list file with rates")->required();
  sim->add_option("--cascades", sim_cascades_, "Number of cascades")->required();
  sim_.add_to(*sim);
  sim->add_option("--out", sim_out_, "Output cascade file")->required();

  auto* inf = app_.add_subcommand("infer", "Infer a network from cascades");
  inf->add_option("--cascades", inf_cascades_, "Cascade file")->required();
  inf_.add_to(*inf, true);
  inf->add_option("--out", inf_out_, "Output edge file (src,dst,gain,objective)")->required();

  auto* ev = app_.add_subcommand("evaluate", "Score an inferred network against the truth");
  ev->add_option("--inferred", inferred_path_, "Output of infer")->required();
  ev->add_option("--truth", truth_path_, "True edge list")->required();
  ev->add_option("--out", csv_out_, "CSV output (default stdout)");

  auto* sw = app_.add_subcommand("sweep", "Precision/recall/accuracy for every k of one greedy run");
  sw->add_option("--cascades", inf_cascades_, "Cascade file")->required();
  sw->add_option("--truth", truth_path_, "True edge list")->required();
  sw->add_option("--k-max", k_max_, "Maximum number of edges")->required();
  inf_.add_to(*sw, false);
  sw->add_option("--out", csv_out_, "CSV output (default stdout)");

  auto* ag = app_.add_subcommand("aucgain", "Relative AUC gain of all-trees over best-tree vs cascade count");
  ag->add_option("--truth", truth_path_, "True edge list with rates")->required();
  ag->add_option("--counts", counts_, "Ascending cascade counts, comma separated");
  auc_sim_.add_to(*ag);
  ag->add_option("--epsilon", inf_.epsilon, "Likelihood of the external-source edge");
  ag->add_option("--alpha", inf_.alpha, "Global transmission rate used for inference");
  ag->add_flag("--no-lazy", inf_.no_lazy, "Rescan every candidate each round");
  ag->add_option("--out", csv_out_, "CSV output (default stdout)");

  auto* rp = app_.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("--manifest", manifest_path_, "Manifest file")->required();

  try {
    std::vector<std::string> reversed(args_.rbegin(), args_.rend());
    app_.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app_.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (simd_ == "scalar") {
    kernels::select(kernels::Isa::Scalar);
  } else if (simd_ == "avx2") {
    if (!kernels::available(kernels::Isa::Avx2)) throw UsageError("--simd: avx2 is not available on this CPU");
    kernels::select(kernels::Isa::Avx2);
  } else if (simd_ == "auto") {
    kernels::select(kernels::default_isa());
  } else {
    throw UsageError("--simd: expected auto, scalar or avx2");
  }

  if (gen->parsed()) generate();
  if (sim->parsed()) simulate();
  if (inf->parsed()) infer();
  if (ev->parsed()) evaluate_cmd();
  if (sw->parsed()) sweep();
  if (ag->parsed()) aucgain();
  if (rp->parsed()) return replay();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Runner runner(args, out, err);
    return runner.run();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace difnet::cli
