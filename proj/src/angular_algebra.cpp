#include "nvrotor/angular_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvrotor::angular {

namespace {

constexpr int kTableSize = 3 * kMaxAngularMomentum + 2;

// log(n!) for n < kTableSize, accumulated in extended precision.
const std::vector<long double>& log_factorials() {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kTableSize, 0.0L);
    for (int n = 1; n < kTableSize; ++n)
      t[n] = t[n - 1] + std::log(static_cast<long double>(n));
    return t;
  }();
  return table;
}

inline long double lf(int n) { return log_factorials()[static_cast<std::size_t>(n)]; }

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

void check_pair(int j, int m, const char* name) {
  if (j < 0 || j > kMaxAngularMomentum)
    throw std::invalid_argument(std::string("wigner_3j: ") + name + " out of range: " +
                                std::to_string(j));
  if (std::abs(m) > j)
    throw std::invalid_argument(std::string("wigner_3j: |m| > j for ") + name);
}

void check_ket(const RotorKet& s) {
  if (s.j < 0 || std::abs(s.m) > s.j || std::abs(s.k) > s.j)
    throw std::invalid_argument("d1_element: invalid rotor quantum numbers (" +
                                std::to_string(s.j) + ", " + std::to_string(s.m) + ", " +
                                std::to_string(s.k) + ")");
}

}  // namespace

double wigner_3j(const ThreeJArgs& a) {
  check_pair(a.j1, a.m1, "j1");
  check_pair(a.j2, a.m2, "j2");
  check_pair(a.j3, a.m3, "j3");

  if (a.m1 + a.m2 + a.m3 != 0) return 0.0;
  if (a.j3 < std::abs(a.j1 - a.j2) || a.j3 > a.j1 + a.j2) return 0.0;
  // (j1 j2 j3; 0 0 0) vanishes for odd j1+j2+j3 by symmetry.
  if (a.m1 == 0 && a.m2 == 0 && (a.j1 + a.j2 + a.j3) % 2 != 0) return 0.0;

  const int j1 = a.j1, j2 = a.j2, j3 = a.j3;
  const int m1 = a.m1, m2 = a.m2, m3 = a.m3;

  const long double log_prefactor =
      0.5L * (lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1) +
              lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3));

  const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});

  // Neumaier-compensated alternating sum.
  long double sum = 0.0L;
  long double carry = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double log_den = lf(k) + lf(j3 - j2 + k + m1) + lf(j3 - j1 + k - m2) +
                                lf(j1 + j2 - j3 - k) + lf(j1 - k - m1) + lf(j2 - k + m2);
    const long double term = parity_sign(k) * std::exp(log_prefactor - log_den);
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      carry += (sum - t) + term;
    else
      carry += (term - t) + sum;
    sum = t;
  }
  return static_cast<double>(parity_sign(j1 - j2 - m3) * (sum + carry));
}

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  return wigner_3j(ThreeJArgs{j1, j2, j3, m1, m2, m3});
}

double ladder_coeff(int j, int k, Ladder direction) {
  if (j < 0 || std::abs(k) > j)
    throw std::invalid_argument("ladder_coeff: |k| > j (j=" + std::to_string(j) +
                                ", k=" + std::to_string(k) + ")");
  const double jj = j, kk = k;
  return direction == Ladder::Raise ? std::sqrt((jj - kk) * (jj + kk + 1.0))
                                    : std::sqrt((jj + kk) * (jj - kk + 1.0));
}

double d1_element(const RotorKet& bra, int mu, int nu, const RotorKet& ket) {
  check_ket(bra);
  check_ket(ket);
  if (std::abs(mu) > 1 || std::abs(nu) > 1)
    throw std::invalid_argument("d1_element: spherical index outside {-1, 0, 1}");
  if (bra.k != ket.k + mu || bra.m != ket.m + nu) return 0.0;
  if (std::abs(bra.j - ket.j) > 1 || bra.j + ket.j < 1) return 0.0;
  const double body = wigner_3j(bra.j, 1, ket.j, -bra.k, mu, ket.k);
  if (body == 0.0) return 0.0;
  const double space = wigner_3j(bra.j, 1, ket.j, -bra.m, nu, ket.m);
  const double norm = std::sqrt(static_cast<double>((2 * bra.j + 1) * (2 * ket.j + 1)));
  return parity_sign(bra.k - bra.m) * norm * body * space;
}

double d1_matrix_element(const RotorKet& bra, int mu, const RotorKet& ket) {
  return d1_element(bra, mu, 0, ket);
}

}  // namespace nvrotor::angular
