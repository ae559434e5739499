#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "nvrotor/angular_algebra.hpp"
#include "oracles/euler_quadrature.hpp"
#include "oracles/racah_rational.hpp"

using namespace nvrotor::angular;

namespace {

bool valid_projection(int j, int m) { return m >= -j && m <= j; }

int parity(int n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace

TEST_CASE("3j closed forms and selection rules") {
  CHECK(wigner_3j(1, 1, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(wigner_3j(1, 1, 1, 0, 0, 1) == 0.0);
  CHECK(wigner_3j(1, 1, 3, 0, 0, 0) == 0.0);  // triangle
  CHECK(wigner_3j(1, 1, 1, 0, 0, 0) == 0.0);  // odd sum with all m zero
  for (int j = 0; j <= 8; ++j)
    for (int m = -j; m <= j; ++m)
      CHECK(wigner_3j(j, j, 0, m, -m, 0) ==
            doctest::Approx(parity(j - m) / std::sqrt(2.0 * j + 1.0)).epsilon(1e-13));
}

TEST_CASE("3j value against the exact rational sum") {
  const auto exact = oracle::racah_3j(4, 1, 4, -2, 0, 2);
  CHECK(wigner_3j(4, 1, 4, -2, 0, 2) == doctest::Approx(exact.value()).epsilon(1e-13));
  // Closed form (j j 1; m -m 0) = (-1)^(j-m) m / sqrt(j(j+1)(2j+1)) after an odd column swap.
  CHECK(exact.square == oracle::cpp_rational(1, 45));
  CHECK(exact.sign == 1);
  CHECK(exact.value() == doctest::Approx(2.0 / std::sqrt(180.0)).epsilon(1e-15));
}

TEST_CASE("3j rejects invalid arguments") {
  CHECK_THROWS_AS(wigner_3j(1, 1, 1, 2, -2, 0), std::invalid_argument);
  CHECK_THROWS_AS(wigner_3j(-1, 1, 1, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(wigner_3j(kMaxAngularMomentum + 1, 1, kMaxAngularMomentum, 0, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("3j permutation and reflection symmetry for j <= 6") {
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= std::min(6, j1 + j2); ++j3)
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2) {
            const int m3 = -m1 - m2;
            if (!valid_projection(j3, m3)) continue;
            const double v = wigner_3j(j1, j2, j3, m1, m2, m3);
            const double s = parity(j1 + j2 + j3);
            CHECK(std::abs(wigner_3j(j2, j3, j1, m2, m3, m1) - v) <= 1e-13);
            CHECK(std::abs(wigner_3j(j3, j1, j2, m3, m1, m2) - v) <= 1e-13);
            CHECK(std::abs(wigner_3j(j2, j1, j3, m2, m1, m3) - s * v) <= 1e-13);
            CHECK(std::abs(wigner_3j(j1, j3, j2, m1, m3, m2) - s * v) <= 1e-13);
            CHECK(std::abs(wigner_3j(j1, j2, j3, -m1, -m2, -m3) - s * v) <= 1e-13);
          }
}

TEST_CASE("3j orthogonality for j <= 6") {
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= std::min(6, j1 + j2); ++j3)
        for (int j3p = std::abs(j1 - j2); j3p <= std::min(6, j1 + j2); ++j3p)
          for (int m3 = -std::min(j3, j3p); m3 <= std::min(j3, j3p); ++m3) {
            double sum = 0.0;
            for (int m1 = -j1; m1 <= j1; ++m1) {
              const int m2 = -m1 - m3;
              if (!valid_projection(j2, m2)) continue;
              sum += (2.0 * j3 + 1.0) * wigner_3j(j1, j2, j3, m1, m2, m3) *
                     wigner_3j(j1, j2, j3p, m1, m2, m3);
            }
            CHECK(std::abs(sum - (j3 == j3p ? 1.0 : 0.0)) <= 1e-10);
          }
}

TEST_CASE("3j agrees with the exact oracle on a random sample up to j = 10") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> jd(0, 10);
  int checked = 0;
  while (checked < 2000) {
    const int j1 = jd(rng), j2 = jd(rng), j3 = jd(rng);
    std::uniform_int_distribution<int> m1d(-j1, j1), m2d(-j2, j2);
    const int m1 = m1d(rng), m2 = m2d(rng), m3 = -m1 - m2;
    if (!valid_projection(j3, m3)) continue;
    const double ref = oracle::racah_3j(j1, j2, j3, m1, m2, m3).value();
    const double got = wigner_3j(j1, j2, j3, m1, m2, m3);
    if (ref == 0.0)
      CHECK(std::abs(got) <= 1e-13);
    else
      CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
    ++checked;
  }
}

TEST_CASE("ladder coefficients") {
  CHECK(ladder_coeff(1, 1, Ladder::Raise) == 0.0);
  CHECK(ladder_coeff(1, 0, Ladder::Raise) == doctest::Approx(std::sqrt(2.0)));
  CHECK(ladder_coeff(4, -3, Ladder::Lower) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(ladder_coeff(3, -3, Ladder::Lower) == 0.0);
  CHECK_THROWS_AS(ladder_coeff(1, 2, Ladder::Raise), std::invalid_argument);
  CHECK_THROWS_AS(ladder_coeff(2, -3, Ladder::Lower), std::invalid_argument);
}

TEST_CASE("rotor D1 element examples") {
  CHECK(d1_matrix_element({0, 0, 0}, 0, {1, 0, 0}) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(d1_matrix_element({1, 1, 0}, 0, {1, 0, 0}) == 0.0);

  const auto want = d1_matrix_element({2, 0, 1}, 1, {1, 0, 0});
  const auto quad = oracle::rotor_matrix_element(2, 0, 1, 1, 0, 0, [](double a, double b, double g) {
    static const oracle::SmallRotation r1(1);
    return oracle::wigner_d_function(r1.at(b), 1, 1, 0, a, g);
  });
  CHECK(want != 0.0);
  CHECK(std::abs(quad - oracle::cd(want, 0.0)) <= 1e-10);
}

TEST_CASE("rotor D1 selection rules") {
  for (int jb = 0; jb <= 4; ++jb)
    for (int j = 0; j <= 4; ++j)
      for (int mb = -jb; mb <= jb; ++mb)
        for (int m = -j; m <= j; ++m)
          for (int kb = -jb; kb <= jb; ++kb)
            for (int k = -j; k <= j; ++k)
              for (int mu = -1; mu <= 1; ++mu) {
                const double v = d1_matrix_element({jb, mb, kb}, mu, {j, m, k});
                const bool allowed = mb == m && kb == k + mu && std::abs(jb - j) <= 1 &&
                                     jb + j >= 1;
                if (!allowed) CHECK(v == 0.0);
              }
}

TEST_CASE("general D1 element reduces to the body-frame case") {
  for (int j = 0; j <= 3; ++j)
    for (int jb = std::max(0, j - 1); jb <= j + 1; ++jb)
      for (int m = -j; m <= j; ++m)
        for (int k = -j; k <= j; ++k)
          for (int mu = -1; mu <= 1; ++mu) {
            const int kb = k + mu;
            if (std::abs(kb) > jb || std::abs(m) > jb) continue;
            CHECK(d1_element({jb, m, kb}, mu, 0, {j, m, k}) ==
                  d1_matrix_element({jb, m, kb}, mu, {j, m, k}));
          }
}
