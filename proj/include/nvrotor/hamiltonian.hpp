#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "nvrotor/basis.hpp"
#include "nvrotor/linalg.hpp"

namespace nvrotor {

/// Physical inputs of the spin-rotor Hamiltonian (SI units, D in rad/s).
struct SystemParams {
  double zero_field_splitting;  // D, rad/s
  double g_factor;
  double bohr_magneton;  // J/T
  double inertia_1;      // I1 = I2, kg m^2
  double inertia_3;      // I3, kg m^2
  double hbar;           // J s
  double boltzmann;      // J/K

  /// hbar / (2 I1), rad/s.
  double rotational_scale() const { return hbar / (2.0 * inertia_1); }
  /// (hbar/2)(1/I3 - 1/I1), rad/s.
  double anisotropy_scale() const { return 0.5 * hbar * (1.0 / inertia_3 - 1.0 / inertia_1); }
  /// g muB / hbar, rad/(s T).
  double larmor_scale() const { return g_factor * bohr_magneton / hbar; }

  /// Throws std::invalid_argument unless D, I1, I3 and the constants are positive.
  void validate() const;
};

/// NV- nanodiamond defaults: D = 2pi 2.87 GHz, g = 2.0028, I1 = 5.06e-44,
/// I3 = 3.11e-44 kg m^2, CODATA 2018 constants.
SystemParams default_params();

/// Unit conversions from the internal angular-frequency unit.
double to_gigahertz(double omega);
double to_joule(double omega, const SystemParams& params);
double to_kelvin(double omega, const SystemParams& params);

using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

/// Hermitian operator H/hbar (rad/s) on a truncated basis. The spin-only
/// reference operator carries no basis.
class HermitianOperator {
 public:
  HermitianOperator(BasisPtr basis, SparseComplexMatrix matrix);

  const BasisPtr& basis() const { return basis_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const SparseComplexMatrix& sparse() const { return matrix_; }

  ComplexMatrix dense() const;
  /// Dense principal submatrix on the given indices.
  ComplexMatrix block(const std::vector<std::size_t>& indices) const;
  Complex element(std::size_t row, std::size_t col) const;

  double max_abs() const;
  /// max |M - M^dagger| / max |M| (0 for the zero matrix).
  double hermiticity_defect() const;

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator*(double factor) const;

 private:
  BasisPtr basis_;
  SparseComplexMatrix matrix_;
};

/// Body-frame H0/hbar: D kK^2 + (hbar/2I1)[J(J+1) + 2 kJ kK + J'+K'- + J'-K'+]
/// + (hbar/2)(1/I3 - 1/I1)(kJ + kK)^2. The constant S^2 term is dropped.
HermitianOperator assemble_h0_body(const BasisPtr& basis, const SystemParams& params);

/// Body-frame V/hbar = -(g muB B/hbar) sum_i K'_i (e'_i . e3).
HermitianOperator assemble_v_body(const BasisPtr& basis, const SystemParams& params,
                                  double field_tesla);

/// 3x3 H_S/hbar = D Sz^2 + (g muB B/hbar) Sz in the m = (+1, 0, -1) order.
HermitianOperator assemble_spin_reference(const SystemParams& params, double field_tesla);

/// Space-frame H/hbar = D (S'3)^2 + (hbar/2I1) L(L+1) + (hbar/2)(1/I3 - 1/I1) kL^2
/// + (g muB B/hbar) mS. (S'3)^2 is formed in a basis with cutoff Lmax + 1 and
/// then truncated, which is exact because S'3 changes L by at most one.
/// Unlike the body frame, the rotor energy includes the S(S+1) contribution,
/// so its spectrum sits hbar/I1 above the body-frame one.
HermitianOperator assemble_space_frame(const BasisPtr& basis, const SystemParams& params,
                                       double field_tesla);

/// Full Hamiltonian in whichever frame the basis belongs to.
HermitianOperator assemble_hamiltonian(const BasisPtr& basis, const SystemParams& params,
                                       double field_tesla);

/// Dense block of the full Hamiltonian on the given indices, built directly
/// from the matrix-element rules without forming the whole operator. The
/// indices must be closed under the Hamiltonian (a block or sector of the
/// basis); a coupling leaving the set throws std::logic_error.
ComplexMatrix assemble_hamiltonian_block(const BasisSet& basis, const SystemParams& params,
                                         double field_tesla,
                                         const std::vector<std::size_t>& indices);

/// Constant offset between the space-frame and body-frame spectra, hbar/I1.
double frame_energy_offset(const SystemParams& params);

namespace spin1 {
/// Body-fixed K'_i matrices in the kK = (+1, 0, -1) row order.
ComplexMatrix k_prime(int axis);
}  // namespace spin1

}  // namespace nvrotor
