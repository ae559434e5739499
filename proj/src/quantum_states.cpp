#include "nvrotor/quantum_states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nvrotor {

namespace {

constexpr double kTraceTolerance = 1e-12;
constexpr double kEigenFloor = 1e-12;
constexpr double kWeightCutoff = 1e-16;
constexpr double kFormulaAgreement = 1e-10;

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Index sets of the connected components of the non-zero pattern of m.
std::vector<std::vector<std::size_t>> components(const ComplexMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < c; ++r)
      if (m(r, c) != 0.0 || m(c, r) != 0.0) {
        const std::size_t a = find_root(parent, static_cast<std::size_t>(r));
        const std::size_t b = find_root(parent, static_cast<std::size_t>(c));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find_root(parent, i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  ComplexMatrix out(k, k);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index r = 0; r < k; ++r)
      out(r, c) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  return out;
}

// Eigenvalues of a Hermitian matrix, solved per connected component.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (const auto& idx : components(m)) {
    if (idx.size() == 1) {
      out.push_back(m(static_cast<Eigen::Index>(idx[0]), static_cast<Eigen::Index>(idx[0])).real());
      continue;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(submatrix(m, idx),
                                                        Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

void require_spin_factor(const DensityMatrix& rho, const char* what) {
  if (!rho.basis())
    throw std::invalid_argument(std::string(what) + ": density matrix has no product basis");
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix, BasisPtr basis)
    : matrix_(std::move(matrix)), basis_(std::move(basis)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
  if (basis_ && static_cast<std::size_t>(matrix_.rows()) != basis_->dimension())
    throw std::invalid_argument("DensityMatrix: dimension does not match basis");
  if (!basis_ && matrix_.rows() != 3)
    throw std::invalid_argument("DensityMatrix: spin-factor matrices must be 3x3");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance)
    throw std::invalid_argument("DensityMatrix: trace differs from 1 by " +
                                std::to_string(std::abs(tr - 1.0)));
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTraceTolerance)
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  const auto ev = hermitian_eigenvalues(matrix_);
  const double lowest = *std::min_element(ev.begin(), ev.end());
  if (lowest < -kEigenFloor)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite (eigenvalue " +
                                std::to_string(lowest) + ")");
}

DensityMatrix DensityMatrix::pure(const ComplexVector& state, BasisPtr basis) {
  return DensityMatrix(state * state.adjoint(), std::move(basis));
}

std::vector<double> gibbs_weights(const Spectrum& spectrum, double temperature_kelvin,
                                  const SystemParams& params) {
  if (!(temperature_kelvin > 0.0))
    throw std::invalid_argument("gibbs_weights: temperature must be positive");
  const double beta_hbar = params.hbar / (params.boltzmann * temperature_kelvin);
  const double ground = spectrum.eigenvalue(0);
  std::vector<double> w(spectrum.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = std::exp(-beta_hbar * (spectrum.eigenvalue(i) - ground));
  return w;
}

ThermalState thermal_state(const Spectrum& spectrum, double temperature_kelvin,
                           const SystemParams& params) {
  if (temperature_kelvin < 0.0 || std::isnan(temperature_kelvin))
    throw std::invalid_argument("thermal_state: temperature must be non-negative");
  const auto n = static_cast<Eigen::Index>(spectrum.dimension());
  if (temperature_kelvin == 0.0) {
    const SelectedState g = ground_state(spectrum);
    return {DensityMatrix::pure(g.vector, spectrum.basis()), g.degenerate};
  }
  std::vector<double> w = gibbs_weights(spectrum, temperature_kelvin, params);
  for (double& x : w)
    if (x < kWeightCutoff) x = 0.0;
  const double z = std::accumulate(w.begin(), w.end(), 0.0);

  // Group retained levels by their support so each block is one GEMM.
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  std::vector<std::vector<std::size_t>> by_block(spectrum.blocks().size());
  const auto& blocks = spectrum.blocks();
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (w[i] == 0.0) continue;
    by_block[spectrum.block_of(i)].push_back(i);
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (by_block[b].empty()) continue;
    const auto& idx = blocks[b].indices;
    const auto k = static_cast<Eigen::Index>(by_block[b].size());
    ComplexMatrix vecs(static_cast<Eigen::Index>(idx.size()), k);
    RealVector weights(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      vecs.col(c) = spectrum.local_vector(by_block[b][static_cast<std::size_t>(c)]);
      weights(c) = w[by_block[b][static_cast<std::size_t>(c)]] / z;
    }
    const ComplexMatrix local = vecs * weights.asDiagonal() * vecs.adjoint();
    for (std::size_t c = 0; c < idx.size(); ++c)
      for (std::size_t r = 0; r < idx.size(); ++r)
        rho(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c])) +=
            local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  // Restore exact Hermiticity lost to rounding in the block products.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {DensityMatrix(std::move(rho), spectrum.basis()), false};
}

DensityMatrix reduce_to_spin(const ComplexVector& state, const BasisSet& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.dimension())
    throw std::invalid_argument("reduce_to_spin: vector length does not match basis");
  const auto rotor = static_cast<Eigen::Index>(basis.rotor_dimension());
  // Row r, column s holds the amplitude of rotor ket r with spin index s.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 3, Eigen::RowMajor>> psi(
      state.data(), rotor, 3);
  ComplexMatrix rho = psi.transpose() * psi.conjugate();
  return DensityMatrix(std::move(rho), nullptr);
}

DensityMatrix reduce_to_spin(const DensityMatrix& rho) {
  require_spin_factor(rho, "reduce_to_spin");
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(3, 3);
  for (Eigen::Index r = 0; r < m.rows() / 3; ++r) out += m.block<3, 3>(3 * r, 3 * r);
  return DensityMatrix(std::move(out), nullptr);
}

ComplexMatrix reduce_to_rotor(const ComplexVector& state, const BasisSet& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.dimension())
    throw std::invalid_argument("reduce_to_rotor: vector length does not match basis");
  const auto rotor = static_cast<Eigen::Index>(basis.rotor_dimension());
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 3, Eigen::RowMajor>> psi(
      state.data(), rotor, 3);
  return psi * psi.adjoint();
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  double s = 0.0;
  for (double l : hermitian_eigenvalues(rho)) {
    const double p = std::clamp(l, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

double entanglement_entropy(const DensityMatrix& rho_spin) {
  return von_neumann_entropy(rho_spin.matrix());
}

ComplexMatrix partial_transpose_spin(const DensityMatrix& rho) {
  require_spin_factor(rho, "partial_transpose_spin");
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index rc = 0; rc < m.cols() / 3; ++rc)
    for (Eigen::Index rr = 0; rr < m.rows() / 3; ++rr)
      out.block<3, 3>(3 * rr, 3 * rc) = m.block<3, 3>(3 * rr, 3 * rc).transpose();
  return out;
}

NegativityForms negativity_forms(const DensityMatrix& rho) {
  const ComplexMatrix pt = partial_transpose_spin(rho);
  double negative = 0.0;
  double trace_norm = 0.0;
  for (const auto& idx : components(pt)) {
    const ComplexMatrix sub = submatrix(pt, idx);
    if (idx.size() == 1) {
      const double l = sub(0, 0).real();
      if (l < 0.0) negative -= l;
      trace_norm += std::abs(l);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sub, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      if (eig.eigenvalues()(i) < 0.0) negative -= eig.eigenvalues()(i);
    Eigen::BDCSVD<ComplexMatrix> svd(sub);
    trace_norm += svd.singularValues().sum();
  }
  return {negative, 0.5 * (trace_norm - 1.0)};
}

double negativity(const DensityMatrix& rho) {
  const NegativityForms f = negativity_forms(rho);
  if (std::abs(f.negative_sum - f.trace_norm) > kFormulaAgreement)
    throw std::runtime_error("negativity: eigenvalue and trace-norm formulas disagree");
  return std::max(0.0, f.negative_sum);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dimension() != sigma.dimension())
    throw std::invalid_argument("fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> er(rho.matrix());
  const RealVector root = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = er.eigenvectors() * root.asDiagonal() * er.eigenvectors().adjoint();
  ComplexMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ei(inner, Eigen::EigenvaluesOnly);
  const double t = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::clamp(std::norm(a.dot(b)), 0.0, 1.0);
}

EntanglementReport entanglement_report(const Spectrum& spectrum, double temperature_kelvin,
                                       const SystemParams& params) {
  if (!spectrum.basis()) throw std::invalid_argument("entanglement_report: spectrum has no basis");
  const BasisSet& basis = *spectrum.basis();
  EntanglementReport report;
  const SelectedState g = ground_state(spectrum);
  report.entropy_ground = entanglement_entropy(reduce_to_spin(g.vector, basis));
  report.ground_degenerate = g.degenerate;
  if (g.degenerate) report.warnings.emplace_back("ground level degenerate");
  if (spectrum.size() > 1) {
    const SelectedState e = excited_state(spectrum, 1);
    report.entropy_first_excited = entanglement_entropy(reduce_to_spin(e.vector, basis));
    report.excited_degenerate = e.degenerate;
    if (e.degenerate) report.warnings.emplace_back("first excited level degenerate");
  }
  const ThermalState th = thermal_state(spectrum, temperature_kelvin, params);
  report.negativity = negativity(th.rho);
  return report;
}

}  // namespace nvrotor
