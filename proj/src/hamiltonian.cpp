#include "nvrotor/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "nvrotor/angular_algebra.hpp"

namespace nvrotor {

namespace {

using angular::Ladder;
using angular::RotorKet;

constexpr Complex kI{0.0, 1.0};

RotorKet rotor_of(const BasisState& s) { return {s.j, s.m, s.k}; }

// Row in the (+1, 0, -1) ordering of the K'_i matrices.
int k_row(int k_projection) { return 1 - k_projection; }

const std::array<ComplexMatrix, 3>& k_prime_matrices() {
  static const std::array<ComplexMatrix, 3> mats = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    std::array<ComplexMatrix, 3> k;
    k[0] = ComplexMatrix::Zero(3, 3);
    k[0] << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    k[0] *= r;
    k[1] = ComplexMatrix::Zero(3, 3);
    k[1] << 0, -1, 0, 1, 0, -1, 0, 1, 0;
    k[1] *= -kI * r;
    k[2] = ComplexMatrix::Zero(3, 3);
    k[2] << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return k;
  }();
  return mats;
}

// Body-frame H0 column: emits (row index, value) for fixed ket index.
template <class Sink>
void h0_body_column(const BasisSet& basis, const SystemParams& p, std::size_t col, Sink&& emit) {
  const BasisState& s = basis.state_of(col);
  const double rot = p.rotational_scale();
  const double aniso = p.anisotropy_scale();
  const double d = p.zero_field_splitting;
  const double diag = d * s.spin * s.spin + rot * (s.j * (s.j + 1) + 2.0 * s.k * s.spin) +
                      aniso * (s.k + s.spin) * (s.k + s.spin);
  emit(col, Complex{diag, 0.0});
  // J'+ K'-: (kJ, kK) -> (kJ + 1, kK - 1)
  if (s.k < s.j && s.spin > -1) {
    const double c = rot * angular::ladder_coeff(s.j, s.k, Ladder::Raise) *
                     angular::ladder_coeff(1, s.spin, Ladder::Lower);
    emit(*basis.index_of({s.j, s.m, s.k + 1, s.spin - 1}), Complex{c, 0.0});
  }
  // J'- K'+: (kJ, kK) -> (kJ - 1, kK + 1)
  if (s.k > -s.j && s.spin < 1) {
    const double c = rot * angular::ladder_coeff(s.j, s.k, Ladder::Lower) *
                     angular::ladder_coeff(1, s.spin, Ladder::Raise);
    emit(*basis.index_of({s.j, s.m, s.k - 1, s.spin + 1}), Complex{c, 0.0});
  }
}

// Body-frame V column per unit field: -(g muB/hbar) sum_i K'_i (e'_i . e3).
template <class Sink>
void v_body_column(const BasisSet& basis, const SystemParams& p, double field, std::size_t col,
                   Sink&& emit) {
  const BasisState& s = basis.state_of(col);
  const auto& kp = k_prime_matrices();
  const double scale = -p.larmor_scale() * field;
  const double r = 1.0 / std::numbers::sqrt2;
  const RotorKet ket = rotor_of(s);
  for (int jb = s.j - 1; jb <= s.j + 1; ++jb) {
    if (jb < 0 || jb > basis.cutoff() || std::abs(s.m) > jb) continue;
    for (int mu = -1; mu <= 1; ++mu) {
      const int kb = s.k + mu;
      if (std::abs(kb) > jb) continue;
      const RotorKet bra{jb, s.m, kb};
      const double d_plus = angular::d1_matrix_element(bra, 1, ket);
      const double d_zero = angular::d1_matrix_element(bra, 0, ket);
      const double d_minus = angular::d1_matrix_element(bra, -1, ket);
      // Projections of the body axes on e3 in terms of D^(1)_{mu 0}.
      const Complex e1 = (-d_plus + d_minus) * r;
      const Complex e2 = -kI * (d_plus + d_minus) * r;
      const Complex e3 = d_zero;
      if (e1 == 0.0 && e2 == 0.0 && e3 == 0.0) continue;
      for (int spin_b = -1; spin_b <= 1; ++spin_b) {
        const int a = k_row(spin_b), b = k_row(s.spin);
        const Complex v = scale * (kp[0](a, b) * e1 + kp[1](a, b) * e2 + kp[2](a, b) * e3);
        if (v != 0.0) emit(*basis.index_of({jb, s.m, kb, spin_b}), v);
      }
    }
  }
}

// Spherical spin components S_mu (mu = -1, 0, +1) between mS values.
double spin_spherical(int mu, int ms_bra, int ms_ket) {
  if (ms_bra != ms_ket + mu) return 0.0;
  switch (mu) {
    case 1:
      return -angular::ladder_coeff(1, ms_ket, Ladder::Raise) / std::numbers::sqrt2;
    case -1:
      return angular::ladder_coeff(1, ms_ket, Ladder::Lower) / std::numbers::sqrt2;
    default:
      return static_cast<double>(ms_ket);
  }
}

// S'3 = sum_mu (-1)^mu S_mu D^(1)_{0,-mu} column in `buffer`.
template <class Sink>
void s3_body_axis_column(const BasisSet& buffer, std::size_t col, Sink&& emit) {
  const BasisState& s = buffer.state_of(col);
  const RotorKet ket = rotor_of(s);
  for (int lb = s.j - 1; lb <= s.j + 1; ++lb) {
    if (lb < 0 || lb > buffer.cutoff() || std::abs(s.k) > lb) continue;
    for (int mu = -1; mu <= 1; ++mu) {
      const int ms_b = s.spin + mu;
      const int mb = s.m - mu;
      if (std::abs(ms_b) > 1 || std::abs(mb) > lb) continue;
      const double spin = spin_spherical(mu, ms_b, s.spin);
      if (spin == 0.0) continue;
      const double rot = angular::d1_element({lb, mb, s.k}, 0, -mu, ket);
      if (rot == 0.0) continue;
      const double sign = (mu == 0) ? 1.0 : -1.0;
      emit(*buffer.index_of({lb, mb, s.k, ms_b}), sign * spin * rot);
    }
  }
}

// Space-frame column; `buffer` has cutoff + 1 and shares the index prefix.
template <class Sink>
void space_column(const BasisSet& basis, const BasisSet& buffer, const SystemParams& p,
                  double field, std::size_t col, Sink&& emit) {
  const BasisState& s = basis.state_of(col);
  std::unordered_map<std::size_t, double> squared;
  s3_body_axis_column(buffer, col, [&](std::size_t mid, double a) {
    s3_body_axis_column(buffer, mid, [&](std::size_t row, double b) {
      if (row < basis.dimension()) squared[row] += a * b;
    });
  });
  const double diag = p.rotational_scale() * s.j * (s.j + 1) +
                      p.anisotropy_scale() * s.k * s.k + p.larmor_scale() * field * s.spin;
  squared.try_emplace(col, 0.0);
  // Sorted emission keeps assembled matrices bitwise reproducible.
  std::vector<std::pair<std::size_t, double>> entries(squared.begin(), squared.end());
  std::sort(entries.begin(), entries.end());
  for (const auto& [row, value] : entries) {
    double v = p.zero_field_splitting * value;
    if (row == col) v += diag;
    if (v != 0.0 || row == col) emit(row, Complex{v, 0.0});
  }
}

void require_frame(const BasisSet& basis, Frame frame, const char* what) {
  if (basis.frame() != frame)
    throw std::invalid_argument(std::string(what) + ": expected a " + to_string(frame) +
                                "-frame basis");
}

template <class ColumnFn>
SparseComplexMatrix assemble_sparse(std::size_t n, ColumnFn&& column) {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(n * 16);
  for (std::size_t c = 0; c < n; ++c)
    column(c, [&](std::size_t r, Complex v) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    });
  SparseComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

void SystemParams::validate() const {
  if (!(zero_field_splitting > 0.0)) throw std::invalid_argument("D must be positive");
  if (!(inertia_1 > 0.0)) throw std::invalid_argument("I1 must be positive");
  if (!(inertia_3 > 0.0)) throw std::invalid_argument("I3 must be positive");
  if (!(hbar > 0.0) || !(boltzmann > 0.0) || !(bohr_magneton > 0.0))
    throw std::invalid_argument("physical constants must be positive");
  if (!std::isfinite(g_factor)) throw std::invalid_argument("g factor must be finite");
}

SystemParams default_params() {
  return SystemParams{
      .zero_field_splitting = 2.0 * std::numbers::pi * 2.87e9,
      .g_factor = 2.0028,
      .bohr_magneton = 9.2740100783e-24,
      .inertia_1 = 5.06e-44,
      .inertia_3 = 3.11e-44,
      .hbar = 1.054571817e-34,
      .boltzmann = 1.380649e-23,
  };
}

double to_gigahertz(double omega) { return omega / (2.0 * std::numbers::pi) * 1e-9; }
double to_joule(double omega, const SystemParams& p) { return p.hbar * omega; }
double to_kelvin(double omega, const SystemParams& p) { return p.hbar * omega / p.boltzmann; }

double frame_energy_offset(const SystemParams& p) { return 2.0 * p.rotational_scale(); }

HermitianOperator::HermitianOperator(BasisPtr basis, SparseComplexMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  if (basis_ && static_cast<std::size_t>(matrix_.rows()) != basis_->dimension())
    throw std::invalid_argument("HermitianOperator: dimension does not match basis");
  matrix_.makeCompressed();
}

ComplexMatrix HermitianOperator::dense() const { return ComplexMatrix(matrix_); }

ComplexMatrix HermitianOperator::block(const std::vector<std::size_t>& indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  std::vector<Eigen::Index> local(dimension(), -1);
  for (Eigen::Index i = 0; i < n; ++i) local[indices[static_cast<std::size_t>(i)]] = i;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto gc = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(c)]);
    for (SparseComplexMatrix::InnerIterator it(matrix_, gc); it; ++it) {
      const Eigen::Index r = local[static_cast<std::size_t>(it.row())];
      if (r >= 0) out(r, c) = it.value();
    }
  }
  return out;
}

Complex HermitianOperator::element(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

double HermitianOperator::max_abs() const {
  double m = 0.0;
  for (Eigen::Index c = 0; c < matrix_.outerSize(); ++c)
    for (SparseComplexMatrix::InnerIterator it(matrix_, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double HermitianOperator::hermiticity_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  const SparseComplexMatrix diff = matrix_ - SparseComplexMatrix(matrix_.adjoint());
  double m = 0.0;
  for (Eigen::Index c = 0; c < diff.outerSize(); ++c)
    for (SparseComplexMatrix::InnerIterator it(diff, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m / scale;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dimension() != other.dimension() || basis_ != other.basis_)
    throw std::invalid_argument("HermitianOperator: sum of operators on different bases");
  return HermitianOperator(basis_, SparseComplexMatrix(matrix_ + other.matrix_));
}

HermitianOperator HermitianOperator::operator*(double factor) const {
  return HermitianOperator(basis_, SparseComplexMatrix(matrix_ * Complex{factor, 0.0}));
}

HermitianOperator assemble_h0_body(const BasisPtr& basis, const SystemParams& params) {
  require_frame(*basis, Frame::Body, "assemble_h0_body");
  return HermitianOperator(basis, assemble_sparse(basis->dimension(), [&](std::size_t c, auto&& e) {
                             h0_body_column(*basis, params, c, e);
                           }));
}

HermitianOperator assemble_v_body(const BasisPtr& basis, const SystemParams& params,
                                  double field_tesla) {
  require_frame(*basis, Frame::Body, "assemble_v_body");
  if (!(field_tesla >= 0.0))
    throw std::invalid_argument("magnetic field must be non-negative (fixed along e3)");
  return HermitianOperator(basis, assemble_sparse(basis->dimension(), [&](std::size_t c, auto&& e) {
                             v_body_column(*basis, params, field_tesla, c, e);
                           }));
}

HermitianOperator assemble_spin_reference(const SystemParams& params, double field_tesla) {
  const double d = params.zero_field_splitting;
  const double z = params.larmor_scale() * field_tesla;
  SparseComplexMatrix m(3, 3);
  m.insert(0, 0) = d + z;
  m.insert(1, 1) = 0.0;
  m.insert(2, 2) = d - z;
  return HermitianOperator(nullptr, std::move(m));
}

HermitianOperator assemble_space_frame(const BasisPtr& basis, const SystemParams& params,
                                       double field_tesla) {
  require_frame(*basis, Frame::Space, "assemble_space_frame");
  if (!(field_tesla >= 0.0))
    throw std::invalid_argument("magnetic field must be non-negative (fixed along e3)");
  const BasisSet buffer(Frame::Space, basis->cutoff() + 1);
  return HermitianOperator(basis, assemble_sparse(basis->dimension(), [&](std::size_t c, auto&& e) {
                             space_column(*basis, buffer, params, field_tesla, c, e);
                           }));
}

HermitianOperator assemble_hamiltonian(const BasisPtr& basis, const SystemParams& params,
                                       double field_tesla) {
  if (basis->frame() == Frame::Space) return assemble_space_frame(basis, params, field_tesla);
  return assemble_h0_body(basis, params) + assemble_v_body(basis, params, field_tesla);
}

ComplexMatrix assemble_hamiltonian_block(const BasisSet& basis, const SystemParams& params,
                                         double field_tesla,
                                         const std::vector<std::size_t>& indices) {
  if (!(field_tesla >= 0.0))
    throw std::invalid_argument("magnetic field must be non-negative (fixed along e3)");
  const auto n = static_cast<Eigen::Index>(indices.size());
  std::unordered_map<std::size_t, Eigen::Index> local;
  for (Eigen::Index i = 0; i < n; ++i) local.emplace(indices[static_cast<std::size_t>(i)], i);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  std::optional<BasisSet> buffer;
  if (basis.frame() == Frame::Space) buffer.emplace(Frame::Space, basis.cutoff() + 1);
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::size_t gc = indices[static_cast<std::size_t>(c)];
    auto sink = [&](std::size_t row, Complex v) {
      const auto it = local.find(row);
      if (it == local.end())
        throw std::logic_error("assemble_hamiltonian_block: coupling leaves the index set");
      out(it->second, c) += v;
    };
    if (basis.frame() == Frame::Body) {
      h0_body_column(basis, params, gc, sink);
      v_body_column(basis, params, field_tesla, gc, sink);
    } else {
      space_column(basis, *buffer, params, field_tesla, gc, sink);
    }
  }
  return out;
}

namespace spin1 {
ComplexMatrix k_prime(int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("k_prime: axis must be 1, 2 or 3");
  return k_prime_matrices()[static_cast<std::size_t>(axis - 1)];
}
}  // namespace spin1

}  // namespace nvrotor
