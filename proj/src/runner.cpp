#include "nvrotor/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "nvrotor/parallel.hpp"
#include "nvrotor/quantum_states.hpp"
#include "nvrotor/spectra.hpp"

namespace nvrotor::runner {

namespace {

class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    const YAML::Mark mark = node.Mark();
    if (mark.is_null()) throw ConfigError(fmt::format("{}: {}", source_, what));
    throw ConfigError(fmt::format("{}:{}: {}", source_, mark.line + 1, what));
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("{} has an invalid value '{}'", key, node.Scalar()));
    }
  }

  std::vector<double> grid(const YAML::Node& node, const std::string& key) const {
    if (node.IsSequence()) {
      std::vector<double> out;
      for (const auto& v : node) out.push_back(scalar<double>(v, key));
      return out;
    }
    if (node.IsMap()) {
      check_keys(node, {"start", "stop", "points"}, key);
      if (!node["start"] || !node["stop"] || !node["points"])
        fail(node, key + " range needs start, stop and points");
      const long points = scalar<long>(node["points"], key + ".points");
      if (points < 1) fail(node["points"], key + ".points must be at least 1");
      return linspace(scalar<double>(node["start"], key + ".start"),
                      scalar<double>(node["stop"], key + ".stop"),
                      static_cast<std::size_t>(points));
    }
    if (node.IsNull()) return {};
    fail(node, key + " must be a list or a {start, stop, points} range");
  }

  std::vector<int> int_list(const YAML::Node& node, const std::string& key) const {
    if (!node.IsSequence()) fail(node, key + " must be a list of integers");
    std::vector<int> out;
    for (const auto& v : node) out.push_back(scalar<int>(v, key));
    return out;
  }

  void check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed,
                  const std::string& where) const {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(kv.first, fmt::format("unknown key '{}' in {}", key, where));
    }
  }

 private:
  std::string source_;
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw std::runtime_error(
          fmt::format("cannot create output directory {}: {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write output file {}", path.string()));
  out << fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : rows) out << fmt::format("{}\n", fmt::join(row, ","));
  if (!out) throw std::runtime_error(fmt::format("error while writing {}", path.string()));
}

std::string flag(bool b) { return b ? "1" : "0"; }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  return fmt::format("{:.12g}", value);
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {start};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = stop;
  return out;
}

void SweepConfig::validate() const {
  params.validate();
  require(cutoff >= 1, "cutoff must be at least 1 for physics runs");
  require(!fields.empty(), "fields grid must not be empty");
  for (double b : fields) require(b >= 0.0 && std::isfinite(b), "fields must be non-negative");
  for (double t : temperatures)
    require(t >= 0.0 && std::isfinite(t), "temperatures must be non-negative");
  require(n_levels >= 1, "n_levels must be at least 1");
  require(n_levels <= BasisSet::dimension_for(cutoff), "n_levels exceeds basis dimension");
  require(!output.empty(), "output file name must not be empty");
  require(threads >= 1, "threads must be at least 1");
}

void ConvergenceConfig::validate() const {
  params.validate();
  require(base_cutoff >= 1, "convergence base cutoff must be at least 1");
  require(!compare.empty(), "convergence compare list must not be empty");
  for (int c : compare) require(c >= base_cutoff, "compare cutoffs must not be below the base");
  for (int c : negativity_cutoffs) require(c >= 1, "negativity cutoffs must be at least 1");
  require(!fields.empty(), "convergence fields grid must not be empty");
  for (double b : fields) require(b >= 0.0 && std::isfinite(b), "fields must be non-negative");
  require(temperature >= 0.0 && std::isfinite(temperature),
          "convergence temperature must be non-negative");
  require(threads >= 1, "threads must be at least 1");
}

RunConfig parse_config(const std::string& yaml_text, const std::string& source_name) {
  YamlReader rd(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: {}", source_name, e.mark.line + 1, e.msg));
  }
  RunConfig cfg;
  cfg.convergence.fields = linspace(0.0, 1.0, 21);
  cfg.sweep.fields = linspace(0.0, 1.0, 41);
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError(source_name + ": top level must be a mapping");
  rd.check_keys(root,
                {"frame", "cutoff", "jmax", "fields", "temperatures", "n_levels", "output",
                 "threads", "params", "convergence"},
                "config");
  SweepConfig& s = cfg.sweep;
  if (const auto n = root["frame"]) {
    const auto f = rd.scalar<std::string>(n, "frame");
    if (f == "body")
      s.frame = Frame::Body;
    else if (f == "space")
      s.frame = Frame::Space;
    else
      rd.fail(n, "frame must be 'body' or 'space'");
  }
  for (const char* key : {"cutoff", "jmax"})
    if (const auto n = root[key]) {
      s.cutoff = rd.scalar<int>(n, key);
      if (s.cutoff < 1) rd.fail(n, std::string(key) + " must be at least 1");
    }
  if (const auto n = root["fields"]) {
    s.fields = rd.grid(n, "fields");
    if (s.fields.empty()) rd.fail(n, "fields grid must not be empty");
    for (double b : s.fields)
      if (!(b >= 0.0)) rd.fail(n, "fields must be non-negative");
  }
  if (const auto n = root["temperatures"]) {
    s.temperatures = rd.grid(n, "temperatures");
    for (double t : s.temperatures)
      if (!(t >= 0.0)) rd.fail(n, "temperatures must be non-negative");
  }
  if (const auto n = root["n_levels"]) {
    const long v = rd.scalar<long>(n, "n_levels");
    if (v < 1) rd.fail(n, "n_levels must be at least 1");
    s.n_levels = static_cast<std::size_t>(v);
  }
  if (const auto n = root["output"]) s.output = rd.scalar<std::string>(n, "output");
  if (const auto n = root["threads"]) {
    const long v = rd.scalar<long>(n, "threads");
    if (v < 1) rd.fail(n, "threads must be at least 1");
    s.threads = static_cast<unsigned>(v);
  }
  if (const auto n = root["params"]) {
    if (!n.IsMap()) rd.fail(n, "params must be a mapping");
    rd.check_keys(n, {"D", "g", "I1", "I3"}, "params");
    if (n["D"]) s.params.zero_field_splitting = rd.scalar<double>(n["D"], "params.D");
    if (n["g"]) s.params.g_factor = rd.scalar<double>(n["g"], "params.g");
    if (n["I1"]) s.params.inertia_1 = rd.scalar<double>(n["I1"], "params.I1");
    if (n["I3"]) s.params.inertia_3 = rd.scalar<double>(n["I3"], "params.I3");
    try {
      s.params.validate();
    } catch (const std::invalid_argument& e) {
      rd.fail(n, e.what());
    }
  }
  ConvergenceConfig& c = cfg.convergence;
  if (const auto n = root["convergence"]) {
    if (!n.IsMap()) rd.fail(n, "convergence must be a mapping");
    rd.check_keys(n, {"base", "compare", "negativity_cutoffs", "temperature", "fields"},
                  "convergence");
    if (n["base"]) c.base_cutoff = rd.scalar<int>(n["base"], "convergence.base");
    if (n["compare"]) c.compare = rd.int_list(n["compare"], "convergence.compare");
    if (n["negativity_cutoffs"])
      c.negativity_cutoffs = rd.int_list(n["negativity_cutoffs"], "convergence.negativity_cutoffs");
    if (n["temperature"])
      c.temperature = rd.scalar<double>(n["temperature"], "convergence.temperature");
    if (n["fields"]) c.fields = rd.grid(n["fields"], "convergence.fields");
    try {
      ConvergenceConfig probe = c;
      probe.params = s.params;
      probe.validate();
    } catch (const ConfigError& e) {
      rd.fail(n, e.what());
    }
  }
  c.params = s.params;
  c.threads = s.threads;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::vector<std::string> sweep_header(std::size_t n_levels) {
  std::vector<std::string> h{"B_T", "T_K"};
  for (std::size_t i = 0; i < n_levels; ++i) h.push_back(fmt::format("E{}_GHz", i));
  for (const char* c : {"entropy_ground_bits", "entropy_excited_bits", "negativity",
                        "ground_degenerate", "excited_degenerate"})
    h.emplace_back(c);
  return h;
}

std::vector<ResultRow> compute_sweep(const SweepConfig& config) {
  config.validate();
  const BasisPtr basis = build_basis(config.frame, config.cutoff);
  const std::vector<double> temps =
      config.temperatures.empty() ? std::vector<double>{0.0} : config.temperatures;
  std::vector<std::vector<ResultRow>> per_field(config.fields.size());
  parallel_for(config.fields.size(), config.threads, [&](std::size_t i) {
    const double b = config.fields[i];
    const Spectrum spectrum = solve_hamiltonian(basis, config.params, b);
    ResultRow base;
    base.field = b;
    for (std::size_t l = 0; l < config.n_levels; ++l)
      base.levels_ghz.push_back(to_gigahertz(spectrum.eigenvalue(l)));
    const SelectedState g = ground_state(spectrum);
    const SelectedState e = excited_state(spectrum, 1);
    base.entropy_ground = entanglement_entropy(reduce_to_spin(g.vector, *basis));
    base.entropy_excited = entanglement_entropy(reduce_to_spin(e.vector, *basis));
    base.ground_degenerate = g.degenerate;
    base.excited_degenerate = e.degenerate;
    for (double t : temps) {
      ResultRow row = base;
      row.temperature = t;
      row.negativity = t == 0.0 ? negativity(DensityMatrix::pure(g.vector, basis))
                                : negativity(thermal_state(spectrum, t, config.params).rho);
      per_field[i].push_back(std::move(row));
    }
  });
  std::vector<ResultRow> rows;
  for (auto& v : per_field)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

std::filesystem::path run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir) {
  const auto rows = compute_sweep(config);
  std::vector<std::vector<std::string>> text;
  for (const ResultRow& r : rows) {
    std::vector<std::string> line{format_number(r.field), format_number(r.temperature)};
    for (double e : r.levels_ghz) line.push_back(format_number(e));
    line.push_back(format_number(r.entropy_ground));
    line.push_back(format_number(r.entropy_excited));
    line.push_back(format_number(r.negativity));
    line.push_back(flag(r.ground_degenerate));
    line.push_back(flag(r.excited_degenerate));
    text.push_back(std::move(line));
  }
  const auto path = out_dir / config.output;
  write_csv(path, sweep_header(config.n_levels), text);
  return path;
}

ConvergenceResult compute_convergence(const ConvergenceConfig& config) {
  config.validate();
  ConvergenceResult result;
  result.fields = config.fields;
  result.negativity_cutoffs = config.negativity_cutoffs;
  if (result.negativity_cutoffs.empty()) {
    std::set<int> all(config.compare.begin(), config.compare.end());
    all.insert(config.base_cutoff);
    result.negativity_cutoffs.assign(all.begin(), all.end());
  }
  const BasisPtr base = build_body_basis(config.base_cutoff);
  std::vector<BasisPtr> compared;
  for (int c : config.compare) compared.push_back(build_body_basis(c));
  std::vector<BasisPtr> neg_bases;
  for (int c : result.negativity_cutoffs) neg_bases.push_back(build_body_basis(c));

  result.fidelity.resize(config.fields.size());
  result.negativity.assign(config.fields.size(),
                           std::vector<double>(result.negativity_cutoffs.size(), 0.0));
  parallel_for(config.fields.size(), config.threads, [&](std::size_t i) {
    const double b = config.fields[i];
    const Spectrum s0 = solve_hamiltonian(base, config.params, b);
    const SelectedState g0 = ground_state(s0);
    const SelectedState e0 = excited_state(s0, 1);
    ConvergenceRow& row = result.fidelity[i];
    row.field = b;
    row.degenerate = g0.degenerate || e0.degenerate;
    for (const BasisPtr& cmp : compared) {
      const Spectrum s = solve_hamiltonian(cmp, config.params, b);
      const SelectedState g = ground_state(s);
      const SelectedState e = excited_state(s, 1);
      row.ground_fidelity.push_back(fidelity(embed(g0.vector, *base, *cmp), g.vector));
      row.excited_fidelity.push_back(fidelity(embed(e0.vector, *base, *cmp), e.vector));
      row.degenerate = row.degenerate || g.degenerate || e.degenerate;
    }
    for (std::size_t k = 0; k < neg_bases.size(); ++k) {
      const Spectrum s = solve_hamiltonian(neg_bases[k], config.params, b);
      result.negativity[i][k] = negativity(thermal_state(s, config.temperature, config.params).rho);
    }
  });
  return result;
}

std::vector<std::filesystem::path> convergence_report(const ConvergenceConfig& config,
                                                      const std::filesystem::path& out_dir) {
  const ConvergenceResult r = compute_convergence(config);
  std::vector<std::string> fh{"B_T"};
  for (int c : config.compare) fh.push_back(fmt::format("F_ground_J{}", c));
  for (int c : config.compare) fh.push_back(fmt::format("F_excited_J{}", c));
  fh.emplace_back("degenerate");
  std::vector<std::vector<std::string>> frows;
  for (const ConvergenceRow& row : r.fidelity) {
    std::vector<std::string> line{format_number(row.field)};
    for (double f : row.ground_fidelity) line.push_back(format_number(f));
    for (double f : row.excited_fidelity) line.push_back(format_number(f));
    line.push_back(flag(row.degenerate));
    frows.push_back(std::move(line));
  }
  std::vector<std::string> nh{"B_T"};
  for (int c : r.negativity_cutoffs) nh.push_back(fmt::format("N_J{}", c));
  std::vector<std::vector<std::string>> nrows;
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    std::vector<std::string> line{format_number(r.fields[i])};
    for (double n : r.negativity[i]) line.push_back(format_number(n));
    nrows.push_back(std::move(line));
  }
  const auto fpath = out_dir / "convergence_fidelity.csv";
  const auto npath = out_dir / "convergence_negativity.csv";
  write_csv(fpath, fh, frows);
  write_csv(npath, nh, nrows);
  return {fpath, npath};
}

const std::vector<std::string>& figure_tags() {
  static const std::vector<std::string> tags{"3a", "3b", "3c", "4a", "4b", "4c", "5"};
  return tags;
}

std::vector<Component> probability_distribution(const ComplexVector& state, const BasisSet& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.dimension())
    throw std::invalid_argument("probability_distribution: vector length does not match basis");
  std::vector<Component> out;
  out.reserve(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i)
    out.push_back({basis.state_of(i), std::norm(state(static_cast<Eigen::Index>(i)))});
  std::stable_sort(out.begin(), out.end(),
                   [](const Component& a, const Component& b) { return a.probability > b.probability; });
  return out;
}

std::filesystem::path reproduce_figure(const std::string& tag, const std::filesystem::path& out_dir,
                                       const FigureOptions& options) {
  const auto& tags = figure_tags();
  if (std::find(tags.begin(), tags.end(), tag) == tags.end())
    throw ConfigError(fmt::format("unknown figure tag '{}' (known: {})", tag, fmt::join(tags, " ")));
  const auto path = out_dir / fmt::format("fig{}.csv", tag);
  const int cutoff = options.cutoff.value_or(4);

  if (tag == "3a") {
    std::vector<std::vector<std::string>> rows;
    for (double b : linspace(0.0, 0.3, 60)) {
      const HermitianOperator h = assemble_spin_reference(options.params, b);
      // Diagonal in the m = (+1, 0, -1) order.
      std::vector<double> e{h.element(0, 0).real(), h.element(1, 1).real(), h.element(2, 2).real()};
      const auto low = std::min_element(e.begin(), e.end()) - e.begin();
      rows.push_back({format_number(b), format_number(to_gigahertz(e[0])),
                      format_number(to_gigahertz(e[1])), format_number(to_gigahertz(e[2])),
                      std::to_string(1 - static_cast<int>(low))});
    }
    write_csv(path, {"B_T", "E_mplus1_GHz", "E_m0_GHz", "E_mminus1_GHz", "ground_m"}, rows);
    return path;
  }
  if (tag == "3c") {
    const BasisPtr basis = build_body_basis(cutoff);
    const Spectrum s = solve_hamiltonian(basis, options.params, options.distribution_field);
    const auto dist = probability_distribution(ground_state(s).vector, *basis);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t r = 0; r < dist.size() && dist[r].probability >= 1e-6; ++r) {
      const auto& st = dist[r].state;
      rows.push_back({std::to_string(r + 1), format_number(options.distribution_field),
                      std::to_string(st.j), std::to_string(st.m), std::to_string(st.k),
                      std::to_string(st.spin), format_number(dist[r].probability)});
    }
    write_csv(path, {"rank", "B_T", "J", "mJ", "kJ", "kK", "probability"}, rows);
    return path;
  }

  SweepConfig cfg;
  cfg.cutoff = cutoff;
  cfg.threads = options.threads;
  cfg.params = options.params;
  cfg.output = path.filename().string();
  cfg.n_levels = 2;
  if (tag == "3b") {
    cfg.fields = linspace(0.0, 0.3, 60);
    cfg.n_levels = 20;
  } else if (tag == "4a") {
    cfg.fields = linspace(0.0, 1.0, 41);
  } else if (tag == "4b") {
    cfg.fields = linspace(0.0, 1.0, 41);
    cfg.temperatures = {0.5e-3, 1e-3, 2e-3, 5e-3};
  } else if (tag == "4c") {
    cfg.fields = {0.1, 0.5, 1.0};
    cfg.temperatures = linspace(0.2e-3, 10e-3, 50);
  } else {  // "5"
    cfg.frame = Frame::Space;
    cfg.fields = linspace(0.0, 1.0, 41);
  }
  return run_sweep(cfg, out_dir);
}

}  // namespace nvrotor::runner
