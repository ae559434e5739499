#pragma once

// Parameter sweeps, convergence studies and canned figure datasets.
//
// Configuration files are YAML. Every key is optional:
//
//   frame: body            # body | space
//   cutoff: 4              # Jmax (body) or Lmax (space); alias: jmax
//   fields:                # tesla, either a list or a uniform range
//     start: 0.0
//     stop: 1.0
//     points: 41
//   temperatures: []       # kelvin; empty means ground state only (T = 0)
//   n_levels: 20
//   output: sweep.csv      # file name inside the output directory
//   threads: 1
//   params:                # overrides of the physical defaults
//     D: 1.8033e10         # zero-field splitting, rad/s
//     g: 2.0028
//     I1: 5.06e-44         # kg m^2
//     I3: 3.11e-44
//   convergence:
//     base: 4
//     compare: [5, 6, 7, 8]
//     negativity_cutoffs: [4, 5, 6, 7, 8]   # default: base + compare
//     temperature: 0.01    # kelvin
//     fields: {start: 0.0, stop: 1.0, points: 21}
//
// Sweep CSV schema (one row per field and temperature, fields outer):
//   B_T,T_K,E0_GHz,...,E{n-1}_GHz,entropy_ground_bits,entropy_excited_bits,
//   negativity,ground_degenerate,excited_degenerate
// Energies are w/2pi in GHz and numbers carry 12 significant digits. T_K = 0
// rows use the ground state itself.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvrotor/basis.hpp"
#include "nvrotor/hamiltonian.hpp"

namespace nvrotor::runner {

/// Invalid configuration; the message carries "file:line:" when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  Frame frame = Frame::Body;
  int cutoff = 4;
  std::vector<double> fields;
  std::vector<double> temperatures;
  std::size_t n_levels = 20;
  std::string output = "sweep.csv";
  unsigned threads = 1;
  SystemParams params = default_params();

  void validate() const;
};

struct ConvergenceConfig {
  int base_cutoff = 4;
  std::vector<int> compare{5, 6, 7, 8};
  std::vector<int> negativity_cutoffs;  // empty: base + compare
  std::vector<double> fields;
  double temperature = 10e-3;
  unsigned threads = 1;
  SystemParams params = default_params();

  void validate() const;
};

/// Configuration loaded from YAML; convergence settings share `params` and
/// `threads` with the sweep.
struct RunConfig {
  SweepConfig sweep;
  ConvergenceConfig convergence;
};

RunConfig parse_config(const std::string& yaml_text, const std::string& source_name = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// n evenly spaced values from start to stop inclusive.
std::vector<double> linspace(double start, double stop, std::size_t n);

struct ResultRow {
  double field = 0.0;
  double temperature = 0.0;
  std::vector<double> levels_ghz;
  double entropy_ground = 0.0;
  double entropy_excited = 0.0;
  double negativity = 0.0;
  bool ground_degenerate = false;
  bool excited_degenerate = false;
};

/// Computes the rows of a sweep in deterministic (field, temperature) order.
std::vector<ResultRow> compute_sweep(const SweepConfig& config);

std::vector<std::string> sweep_header(std::size_t n_levels);

/// Writes compute_sweep(config) to out_dir/config.output; returns the path.
std::filesystem::path run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir);

struct ConvergenceRow {
  double field = 0.0;
  std::vector<double> ground_fidelity;   // one per compare cutoff
  std::vector<double> excited_fidelity;  // one per compare cutoff
  bool degenerate = false;               // any compared level degenerate
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> fidelity;
  std::vector<int> negativity_cutoffs;
  std::vector<double> fields;
  std::vector<std::vector<double>> negativity;  // [field][cutoff]
};

ConvergenceResult compute_convergence(const ConvergenceConfig& config);

/// Writes convergence_fidelity.csv and convergence_negativity.csv.
std::vector<std::filesystem::path> convergence_report(const ConvergenceConfig& config,
                                                      const std::filesystem::path& out_dir);

/// Known figure tags: 3a 3b 3c 4a 4b 4c 5.
const std::vector<std::string>& figure_tags();

struct FigureOptions {
  std::optional<int> cutoff;
  unsigned threads = 1;
  SystemParams params = default_params();
  /// Field used for the ground-state distribution of tag 3c, tesla.
  double distribution_field = 1.0;
};

/// Writes fig<tag>.csv into out_dir; throws ConfigError for an unknown tag.
std::filesystem::path reproduce_figure(const std::string& tag, const std::filesystem::path& out_dir,
                                       const FigureOptions& options = {});

struct Component {
  BasisState state;
  double probability;
};

/// Basis-ket probabilities of a state, descending, ties by basis order.
std::vector<Component> probability_distribution(const ComplexVector& state, const BasisSet& basis);

/// Formats a value with 12 significant digits.
std::string format_number(double value);

}  // namespace nvrotor::runner
