#pragma once

#include <cstddef>
#include <vector>

#include "nvrotor/basis.hpp"
#include "nvrotor/hamiltonian.hpp"
#include "nvrotor/linalg.hpp"

namespace nvrotor {

/// Default relative gap (fraction of the spectral range) below which two
/// levels are treated as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-8;

/// Eigenpairs of one diagonal block; `indices` are basis indices.
struct SpectrumBlock {
  std::vector<std::size_t> indices;
  RealVector values;
  ComplexMatrix vectors;
};

/// Ascending eigenvalues (rad/s) with orthonormal eigenvectors. Eigenvectors
/// are stored per block and expanded on request. Each eigenvector's phase is
/// fixed so that its largest-magnitude component is real and positive.
class Spectrum {
 public:
  Spectrum(BasisPtr basis, std::size_t dimension, std::vector<SpectrumBlock> blocks);

  const BasisPtr& basis() const { return basis_; }
  std::size_t size() const { return eigenvalues_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t i) const { return eigenvalues_.at(i); }

  /// Full-length eigenvector for the i-th lowest level.
  ComplexVector eigenvector(std::size_t i) const;
  /// Basis indices on which eigenvector i can be non-zero.
  const std::vector<std::size_t>& support(std::size_t i) const;
  /// Position in blocks() of the block holding eigenvector i.
  std::size_t block_of(std::size_t i) const { return order_.at(i).block; }
  /// Components of eigenvector i on support(i).
  Eigen::Ref<const ComplexVector> local_vector(std::size_t i) const;

  ComplexMatrix dense_eigenvectors() const;
  const std::vector<SpectrumBlock>& blocks() const { return blocks_; }

  double spectral_range() const;
  /// max_i ||H v_i - l_i v_i||_2, filled in by the solver.
  double residual_bound() const { return residual_bound_; }
  void set_residual_bound(double r) { residual_bound_ = r; }
  /// max |<v_i|v_j> - delta_ij| over all pairs.
  double orthonormality_defect() const;

 private:
  struct Slot {
    std::size_t block;
    Eigen::Index column;
  };
  BasisPtr basis_;
  std::size_t dimension_;
  std::vector<SpectrumBlock> blocks_;
  std::vector<double> eigenvalues_;
  std::vector<Slot> order_;
  double residual_bound_ = 0.0;
};

/// Dense Hermitian solve of the whole operator. Throws std::invalid_argument
/// when the Hermiticity defect exceeds 1e-12.
Spectrum eigendecompose(const HermitianOperator& op);

/// Solve restricted to the given index partition. Every element coupling two
/// different parts must be exactly zero, otherwise std::invalid_argument.
Spectrum eigendecompose_blocked(const HermitianOperator& op,
                                const std::vector<std::vector<std::size_t>>& partition);

enum class BlockMode { Dense, Blocks, Sectors };

/// Assembles and diagonalizes the Hamiltonian of the basis' frame at field B.
/// Sectors mode works on the (block, sector) partition and builds each block
/// directly; Blocks mode uses the z-projection blocks; Dense ignores symmetry.
Spectrum solve_hamiltonian(const BasisPtr& basis, const SystemParams& params, double field_tesla,
                           BlockMode mode = BlockMode::Sectors);

struct SelectedState {
  ComplexVector vector;
  double energy = 0.0;
  bool degenerate = false;
};

/// Lowest eigenvector; degenerate when l1 - l0 <= rel_tol * spectral range.
SelectedState ground_state(const Spectrum& spectrum, double rel_tol = kDegeneracyTolerance);

/// i-th eigenvector; degenerate when either neighbour lies within the tolerance.
SelectedState excited_state(const Spectrum& spectrum, std::size_t index,
                            double rel_tol = kDegeneracyTolerance);

struct LevelTable {
  std::vector<double> fields;               // tesla
  std::vector<std::vector<double>> levels;  // rad/s, ascending per row

  std::vector<double> row_gigahertz(std::size_t row) const;
};

/// Lowest n_levels of the full Hamiltonian at each field.
LevelTable sweep_levels(const SystemParams& params, const BasisPtr& basis,
                        const std::vector<double>& fields, std::size_t n_levels,
                        unsigned threads = 1);

/// The three levels of the spin-only reference Hamiltonian at each field.
LevelTable sweep_spin_reference(const SystemParams& params, const std::vector<double>& fields);

}  // namespace nvrotor
