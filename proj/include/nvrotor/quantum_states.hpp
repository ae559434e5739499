#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nvrotor/basis.hpp"
#include "nvrotor/hamiltonian.hpp"
#include "nvrotor/linalg.hpp"
#include "nvrotor/spectra.hpp"

namespace nvrotor {

/// Hermitian, unit-trace, positive semidefinite operator. `basis` is set for
/// states on the full truncated space and null for the 3-dim spin factor
/// (ordered by spin projection -1, 0, +1).
class DensityMatrix {
 public:
  /// Validates trace (1e-12), Hermiticity and PSD (eigenvalues >= -1e-12);
  /// throws std::invalid_argument on violation.
  DensityMatrix(ComplexMatrix matrix, BasisPtr basis);

  static DensityMatrix pure(const ComplexVector& state, BasisPtr basis);

  const ComplexMatrix& matrix() const { return matrix_; }
  const BasisPtr& basis() const { return basis_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
  BasisPtr basis_;
};

struct ThermalState {
  DensityMatrix rho;
  /// Set at T = 0 when the ground level is degenerate; the projector then
  /// depends on which vector the solver returned.
  bool degenerate_ground = false;
};

/// Gibbs state sum_i w_i |i><i| with w_i ~ exp(-hbar (w_i - w_0) / kB T).
/// Relative weights below 1e-16 are dropped. T = 0 gives the ground-state
/// projector. Throws std::invalid_argument for T < 0.
ThermalState thermal_state(const Spectrum& spectrum, double temperature_kelvin,
                           const SystemParams& params);

/// Unnormalized Gibbs weights (largest = 1) before truncation.
std::vector<double> gibbs_weights(const Spectrum& spectrum, double temperature_kelvin,
                                  const SystemParams& params);

/// Partial trace over the rotor; 3x3 result indexed by spin projection + 1.
DensityMatrix reduce_to_spin(const ComplexVector& state, const BasisSet& basis);
DensityMatrix reduce_to_spin(const DensityMatrix& rho);

/// Partial trace over the spin for a pure state (rotor_dimension square).
ComplexMatrix reduce_to_rotor(const ComplexVector& state, const BasisSet& basis);

/// von Neumann entropy in bits; eigenvalues clamped to [0, 1], 0 log 0 = 0.
double von_neumann_entropy(const ComplexMatrix& rho);
double entanglement_entropy(const DensityMatrix& rho_spin);

/// Transpose of the spin indices of a full-space density matrix.
ComplexMatrix partial_transpose_spin(const DensityMatrix& rho);

struct NegativityForms {
  double negative_sum;  // sum over |lambda| of negative PT eigenvalues
  double trace_norm;    // (||rho^T_S||_1 - 1) / 2
};

/// Both negativity formulas. The partial transpose is diagonalized on the
/// connected components of its non-zero pattern.
NegativityForms negativity_forms(const DensityMatrix& rho);

/// Negativity; throws std::runtime_error if the two formulas disagree
/// by more than 1e-10.
double negativity(const DensityMatrix& rho);

/// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// |<a|b>|^2 for normalized pure states.
double fidelity(const ComplexVector& a, const ComplexVector& b);

struct EntanglementReport {
  double entropy_ground = 0.0;
  double entropy_first_excited = 0.0;
  double negativity = 0.0;
  bool ground_degenerate = false;
  bool excited_degenerate = false;
  std::vector<std::string> warnings;
};

/// Entropies of the two lowest eigenvectors, and the negativity of the
/// thermal state at `temperature_kelvin` (ground state when 0).
EntanglementReport entanglement_report(const Spectrum& spectrum, double temperature_kelvin,
                                       const SystemParams& params);

}  // namespace nvrotor
