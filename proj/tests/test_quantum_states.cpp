#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nvrotor/quantum_states.hpp"
#include "quantum_helpers.hpp"

using namespace nvrotor;
using namespace testing_states;

namespace {

const SystemParams P = default_params();
const double kLog3 = std::log2(3.0);

DensityMatrix spin_matrix(std::initializer_list<double> diag) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  int i = 0;
  for (double d : diag) m(i, i) = d, ++i;
  return DensityMatrix(m, nullptr);
}

}  // namespace

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(spin_matrix({0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(spin_matrix({1.2, -0.2, 0.0}), std::invalid_argument);
  ComplexMatrix m = ComplexMatrix::Identity(3, 3) / 3.0;
  m(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix(m, nullptr), std::invalid_argument);
  CHECK_NOTHROW(spin_matrix({1.0, 0.0, 0.0}));
}

TEST_CASE("entropy examples") {
  CHECK(entanglement_entropy(spin_matrix({1, 0, 0})) == 0.0);
  CHECK(entanglement_entropy(spin_matrix({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(kLog3).epsilon(1e-14));
  CHECK(entanglement_entropy(spin_matrix({0.5, 0.5, 0})) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reduced spin states") {
  const auto b = build_body_basis(2);
  ComplexVector v = ComplexVector::Zero(b->dimension());
  v(b->index_of({0, 0, 0, 0}).value()) = 1.0;
  const auto rho = reduce_to_spin(v, *b);
  CHECK((rho.matrix() - spin_matrix({0, 1, 0}).matrix()).norm() <= 1e-15);

  ComplexMatrix cols = ComplexMatrix::Zero(b->rotor_dimension(), 3);
  for (int s = 0; s < 3; ++s) cols(b->rotor_index(b->index_of({1, 0, s - 1, 0}).value()), s) = 1.0;
  const ComplexVector me = maximally_entangled(cols);
  CHECK((reduce_to_spin(me, *b).matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm() <= 1e-15);
  CHECK_THROWS_AS(reduce_to_spin(ComplexVector::Zero(7), *b), std::invalid_argument);

  const auto full = DensityMatrix::pure(me, b);
  CHECK((reduce_to_spin(full).matrix() - reduce_to_spin(me, *b).matrix()).norm() <= 1e-15);
}

TEST_CASE("partial transpose and negativity of a maximally entangled pair") {
  const auto b = build_body_basis(1);
  std::mt19937 rng(3);
  const ComplexMatrix u = random_unitary(static_cast<Eigen::Index>(b->rotor_dimension()), rng);
  const ComplexVector me = maximally_entangled(u.leftCols(3));
  const auto rho = DensityMatrix::pure(me, b);
  const ComplexMatrix pt = partial_transpose_spin(rho);
  CHECK((pt - pt.adjoint()).norm() <= 1e-14);
  CHECK(std::abs(pt.trace() - Complex(1.0)) <= 1e-14);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  for (int i = 0; i < 3; ++i) CHECK(ev[i] == doctest::Approx(-1.0 / 3).epsilon(1e-12));
  for (std::size_t i = ev.size() - 6; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  for (std::size_t i = 3; i < ev.size() - 6; ++i) CHECK(std::abs(ev[i]) <= 1e-12);
  CHECK(std::abs(negativity(rho) - 1.0) <= 1e-10);
  CHECK(std::abs(entanglement_entropy(reduce_to_spin(me, *b)) - kLog3) <= 1e-10);

  // Transposing the spin indices of the result gives back rho.
  const auto& m = rho.matrix();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      worst = std::max(worst, std::abs(pt(r - r % 3 + c % 3, c - c % 3 + r % 3) - m(r, c)));
  CHECK(worst == 0.0);
}

TEST_CASE("product states are not entangled") {
  const auto b = build_body_basis(1);
  std::mt19937 rng(5);
  const auto nr = static_cast<Eigen::Index>(b->rotor_dimension());
  for (int t = 0; t < 20; ++t) {
    const ComplexVector v = product(random_vector(nr, rng), random_vector(3, rng));
    const auto rho = DensityMatrix::pure(v, b);
    CHECK(std::abs(negativity(rho)) <= 1e-10);
    CHECK(entanglement_entropy(reduce_to_spin(v, *b)) <= 1e-9);
  }
  // Mixed product rho_rot (x) rho_spin.
  const ComplexVector r1 = random_vector(nr, rng), r2 = random_vector(nr, rng);
  const ComplexVector s1 = random_vector(3, rng), s2 = random_vector(3, rng);
  const ComplexMatrix mixed = 0.7 * product(r1, s1) * product(r1, s1).adjoint() +
                              0.3 * product(r2, s2) * product(r2, s2).adjoint();
  const DensityMatrix sep(mixed, b);
  const ComplexMatrix pt = partial_transpose_spin(sep);
  CHECK(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(pt).eigenvalues().minCoeff() >= -1e-12);
  CHECK(std::abs(negativity(sep)) <= 1e-10);
}

TEST_CASE("Schmidt symmetry and measure bounds on random pure states") {
  const auto b = build_body_basis(2);
  std::mt19937 rng(9);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector v = random_vector(static_cast<Eigen::Index>(b->dimension()), rng);
    const double s_spin = entanglement_entropy(reduce_to_spin(v, *b));
    const double s_rot = von_neumann_entropy(reduce_to_rotor(v, *b));
    CHECK(std::abs(s_spin - s_rot) <= 1e-10);
    CHECK(s_spin >= 0.0);
    CHECK(s_spin <= kLog3 + 1e-12);
    const auto forms = negativity_forms(DensityMatrix::pure(v, b));
    CHECK(std::abs(forms.negative_sum - forms.trace_norm) <= 1e-10);
    CHECK(forms.negative_sum >= 0.0);
    CHECK(forms.negative_sum <= 1.0 + 1e-12);
  }
}

TEST_CASE("negativity is invariant under local spin unitaries") {
  const auto b = build_body_basis(1);
  std::mt19937 rng(13);
  const auto nr = static_cast<Eigen::Index>(b->rotor_dimension());
  for (int t = 0; t < 10; ++t) {
    const ComplexVector v = random_vector(nr * 3, rng);
    const ComplexMatrix u = random_unitary(3, rng);
    ComplexVector w = v;
    for (Eigen::Index r = 0; r < nr; ++r) w.segment(3 * r, 3) = u * v.segment(3 * r, 3);
    CHECK(std::abs(negativity(DensityMatrix::pure(v, b)) - negativity(DensityMatrix::pure(w, b))) <=
          1e-10);
  }
}

TEST_CASE("fidelity examples") {
  const auto b = build_body_basis(1);
  std::mt19937 rng(21);
  const ComplexVector a = random_vector(static_cast<Eigen::Index>(b->dimension()), rng);
  const auto rho = DensityMatrix::pure(a, b);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  const auto n = static_cast<Eigen::Index>(b->dimension());
  ComplexVector e0 = ComplexVector::Zero(n), e1 = ComplexVector::Zero(n);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK(fidelity(e0, e1) == 0.0);
  CHECK(fidelity(DensityMatrix::pure(e0, b), DensityMatrix::pure(e1, b)) <= 1e-12);
  const ComplexVector c = 0.6 * e0 + 0.8 * e1;
  CHECK(fidelity(e0, c) == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(fidelity(DensityMatrix::pure(e0, b), DensityMatrix::pure(c, b)) ==
        doctest::Approx(0.36).epsilon(1e-10));
  const auto mixed = spin_matrix({0.5, 0.5, 0.0});
  CHECK(fidelity(mixed, spin_matrix({1, 0, 0})) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(fidelity(mixed, rho), std::invalid_argument);
}

TEST_CASE("thermal states") {
  const auto b = build_body_basis(2);
  const auto s = solve_hamiltonian(b, P, 0.5);
  CHECK_THROWS_AS(thermal_state(s, -1.0, P), std::invalid_argument);

  // Cold limit: gap / kB T far above 50.
  const double gap = to_kelvin(s.eigenvalue(1) - s.eigenvalue(0), P);
  const auto cold = thermal_state(s, gap / 200.0, P);
  const ComplexVector g = s.eigenvector(0);
  const ComplexMatrix proj = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> diff(cold.rho.matrix() - proj);
  CHECK(0.5 * diff.eigenvalues().cwiseAbs().sum() <= 1e-12);
  const auto zero = thermal_state(s, 0.0, P);
  CHECK((zero.rho.matrix() - proj).norm() <= 1e-14);
  CHECK_FALSE(zero.degenerate_ground);

  // Hot limit: kB T far above the spectral range.
  const double hot_t = to_kelvin(s.spectral_range(), P) * 1e8;
  const auto hot = thermal_state(s, hot_t, P);
  const double n = static_cast<double>(b->dimension());
  CHECK((hot.rho.matrix() - ComplexMatrix::Identity(b->dimension(), b->dimension()) / n)
            .cwiseAbs()
            .maxCoeff() <= 1e-6);
  CHECK(std::abs(negativity(hot.rho)) <= 1e-10);

  const double t = 0.003;
  const auto w = gibbs_weights(s, t, P);
  CHECK(w[0] == 1.0);
  for (std::size_t i : {std::size_t{1}, std::size_t{4}})
    for (std::size_t j : {std::size_t{2}, std::size_t{7}}) {
      const double want = std::exp(-P.hbar * (s.eigenvalue(j) - s.eigenvalue(i)) / (P.boltzmann * t));
      if (w[i] > 1e-300 && want > 1e-300)
        CHECK(w[j] / w[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("entanglement report") {
  const auto b = build_body_basis(4);
  const auto zero = entanglement_report(solve_hamiltonian(b, P, 0.0), 0.0, P);
  CHECK(zero.entropy_ground <= 1e-9);
  CHECK_FALSE(zero.ground_degenerate);
  const auto high = entanglement_report(solve_hamiltonian(b, P, 1.0), 0.001, P);
  CHECK(high.entropy_ground >= 1.4);
  CHECK(high.entropy_ground <= kLog3 + 1e-9);
  CHECK(high.negativity >= 0.8);
  CHECK(high.negativity <= 1.0);
}
