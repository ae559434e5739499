#include "nvrotor/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvrotor/parallel.hpp"

namespace nvrotor {

namespace {

constexpr double kHermiticityTolerance = 1e-12;

void fix_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index best = 0;
  const double max_mag = v.cwiseAbs().maxCoeff();
  // First component within rounding of the maximum, so ties resolve by index.
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= max_mag * (1.0 - 1e-12)) {
      best = i;
      break;
    }
  if (max_mag == 0.0) return;
  const Complex phase = std::conj(v(best)) / std::abs(v(best));
  v *= phase;
  v(best) = Complex{v(best).real(), 0.0};
}

SpectrumBlock solve_block(std::vector<std::size_t> indices, const ComplexMatrix& m,
                          double& residual) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: Hermitian eigensolver did not converge");
  SpectrumBlock block{std::move(indices), solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < block.vectors.cols(); ++c) fix_phase(block.vectors.col(c));
  residual = 0.0;
  for (Eigen::Index c = 0; c < block.vectors.cols(); ++c) {
    const ComplexVector r = m * block.vectors.col(c) - block.values(c) * block.vectors.col(c);
    residual = std::max(residual, r.norm());
  }
  return block;
}

void require_hermitian(const HermitianOperator& op) {
  const double defect = op.hermiticity_defect();
  if (defect > kHermiticityTolerance)
    throw std::invalid_argument("eigendecompose: operator is not Hermitian (defect " +
                                std::to_string(defect) + ")");
}

std::vector<std::vector<std::size_t>> partition_for(const BasisSet& basis, BlockMode mode) {
  std::vector<std::vector<std::size_t>> parts;
  if (mode == BlockMode::Blocks) {
    for (const auto& [label, idx] : basis.blocks()) parts.push_back(idx);
  } else {
    for (const auto& [label, idx] : basis.sectors()) parts.push_back(idx);
  }
  return parts;
}

}  // namespace

Spectrum::Spectrum(BasisPtr basis, std::size_t dimension, std::vector<SpectrumBlock> blocks)
    : basis_(std::move(basis)), dimension_(dimension), blocks_(std::move(blocks)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (Eigen::Index c = 0; c < blocks_[b].values.size(); ++c) order_.push_back({b, c});
  std::stable_sort(order_.begin(), order_.end(), [&](const Slot& a, const Slot& b) {
    return blocks_[a.block].values(a.column) < blocks_[b.block].values(b.column);
  });
  eigenvalues_.reserve(order_.size());
  for (const Slot& s : order_) eigenvalues_.push_back(blocks_[s.block].values(s.column));
}

ComplexVector Spectrum::eigenvector(std::size_t i) const {
  const Slot& s = order_.at(i);
  const SpectrumBlock& b = blocks_[s.block];
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension_));
  for (std::size_t r = 0; r < b.indices.size(); ++r)
    v(static_cast<Eigen::Index>(b.indices[r])) = b.vectors(static_cast<Eigen::Index>(r), s.column);
  return v;
}

const std::vector<std::size_t>& Spectrum::support(std::size_t i) const {
  return blocks_[order_.at(i).block].indices;
}

Eigen::Ref<const ComplexVector> Spectrum::local_vector(std::size_t i) const {
  const Slot& s = order_.at(i);
  return blocks_[s.block].vectors.col(s.column);
}

ComplexMatrix Spectrum::dense_eigenvectors() const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  ComplexMatrix out = ComplexMatrix::Zero(n, static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) out.col(static_cast<Eigen::Index>(i)) = eigenvector(i);
  return out;
}

double Spectrum::spectral_range() const {
  if (eigenvalues_.empty()) return 0.0;
  return eigenvalues_.back() - eigenvalues_.front();
}

double Spectrum::orthonormality_defect() const {
  // Vectors from different blocks have disjoint supports, so only in-block
  // overlaps can be non-trivial.
  double worst = 0.0;
  for (const SpectrumBlock& b : blocks_) {
    const ComplexMatrix gram = b.vectors.adjoint() * b.vectors;
    const ComplexMatrix id = ComplexMatrix::Identity(gram.rows(), gram.cols());
    if (gram.size() > 0) worst = std::max(worst, (gram - id).cwiseAbs().maxCoeff());
  }
  return worst;
}

Spectrum eigendecompose(const HermitianOperator& op) {
  require_hermitian(op);
  std::vector<std::size_t> all(op.dimension());
  std::iota(all.begin(), all.end(), std::size_t{0});
  double residual = 0.0;
  std::vector<SpectrumBlock> blocks;
  blocks.push_back(solve_block(std::move(all), op.dense(), residual));
  Spectrum s(op.basis(), op.dimension(), std::move(blocks));
  s.set_residual_bound(residual);
  return s;
}

Spectrum eigendecompose_blocked(const HermitianOperator& op,
                                const std::vector<std::vector<std::size_t>>& partition) {
  require_hermitian(op);
  std::vector<long> part_of(op.dimension(), -1);
  for (std::size_t p = 0; p < partition.size(); ++p)
    for (std::size_t i : partition[p]) {
      if (i >= op.dimension() || part_of[i] != -1)
        throw std::invalid_argument("eigendecompose_blocked: partition is not a partition");
      part_of[i] = static_cast<long>(p);
    }
  if (std::find(part_of.begin(), part_of.end(), -1) != part_of.end())
    throw std::invalid_argument("eigendecompose_blocked: partition does not cover the basis");
  const SparseComplexMatrix& m = op.sparse();
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (SparseComplexMatrix::InnerIterator it(m, c); it; ++it)
      if (it.value() != 0.0 && part_of[static_cast<std::size_t>(it.row())] !=
                                   part_of[static_cast<std::size_t>(it.col())])
        throw std::invalid_argument("eigendecompose_blocked: operator couples different blocks");
  std::vector<SpectrumBlock> blocks;
  double residual = 0.0;
  for (const auto& idx : partition) {
    double r = 0.0;
    blocks.push_back(solve_block(idx, op.block(idx), r));
    residual = std::max(residual, r);
  }
  Spectrum s(op.basis(), op.dimension(), std::move(blocks));
  s.set_residual_bound(residual);
  return s;
}

Spectrum solve_hamiltonian(const BasisPtr& basis, const SystemParams& params, double field_tesla,
                           BlockMode mode) {
  if (mode == BlockMode::Dense)
    return eigendecompose(assemble_hamiltonian(basis, params, field_tesla));
  std::vector<SpectrumBlock> blocks;
  double residual = 0.0;
  for (auto& idx : partition_for(*basis, mode)) {
    const ComplexMatrix m = assemble_hamiltonian_block(*basis, params, field_tesla, idx);
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale > 0.0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTolerance * scale)
      throw std::invalid_argument("solve_hamiltonian: block is not Hermitian");
    double r = 0.0;
    blocks.push_back(solve_block(std::move(idx), m, r));
    residual = std::max(residual, r);
  }
  Spectrum s(basis, basis->dimension(), std::move(blocks));
  s.set_residual_bound(residual);
  return s;
}

SelectedState ground_state(const Spectrum& spectrum, double rel_tol) {
  return excited_state(spectrum, 0, rel_tol);
}

SelectedState excited_state(const Spectrum& spectrum, std::size_t index, double rel_tol) {
  if (index >= spectrum.size()) throw std::out_of_range("excited_state: index beyond spectrum");
  const double tol = rel_tol * spectrum.spectral_range();
  const auto& ev = spectrum.eigenvalues();
  bool degenerate = false;
  if (index > 0 && ev[index] - ev[index - 1] <= tol) degenerate = true;
  if (index + 1 < ev.size() && ev[index + 1] - ev[index] <= tol) degenerate = true;
  return {spectrum.eigenvector(index), ev[index], degenerate};
}

std::vector<double> LevelTable::row_gigahertz(std::size_t row) const {
  std::vector<double> out = levels.at(row);
  for (double& v : out) v = to_gigahertz(v);
  return out;
}

LevelTable sweep_levels(const SystemParams& params, const BasisPtr& basis,
                        const std::vector<double>& fields, std::size_t n_levels,
                        unsigned threads) {
  if (n_levels > basis->dimension())
    throw std::invalid_argument("sweep_levels: more levels requested than basis states");
  LevelTable table{fields, std::vector<std::vector<double>>(fields.size())};
  parallel_for(fields.size(), threads, [&](std::size_t i) {
    const Spectrum s = solve_hamiltonian(basis, params, fields[i]);
    table.levels[i].assign(s.eigenvalues().begin(),
                           s.eigenvalues().begin() + static_cast<long>(n_levels));
  });
  return table;
}

LevelTable sweep_spin_reference(const SystemParams& params, const std::vector<double>& fields) {
  LevelTable table{fields, {}};
  for (double b : fields) table.levels.push_back(eigendecompose(assemble_spin_reference(params, b)).eigenvalues());
  return table;
}

}  // namespace nvrotor
