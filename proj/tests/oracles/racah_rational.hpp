#pragma once

// Exact-rational Racah sum for integer 3j symbols. Test oracle only; it
// shares no code with the production log-factorial path.

#include <cstdlib>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

inline cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Square of the 3j symbol as an exact rational, together with its sign.
struct ExactThreeJ {
  cpp_rational square;
  int sign;  // -1, 0, +1

  double value() const {
    if (sign == 0) return 0.0;
    const Float50 num(boost::multiprecision::numerator(square));
    const Float50 den(boost::multiprecision::denominator(square));
    const Float50 v = sqrt(num / den);
    return sign * static_cast<double>(v);
  }
};

inline ExactThreeJ racah_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return {0, 0};
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return {0, 0};
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return {0, 0};

  const cpp_rational triangle(factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) *
                                  factorial(-j1 + j2 + j3),
                              factorial(j1 + j2 + j3 + 1));
  const cpp_int projections = factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) *
                              factorial(j2 - m2) * factorial(j3 + m3) * factorial(j3 - m3);

  cpp_rational sum = 0;
  for (int k = 0; k <= j1 + j2 + j3; ++k) {
    const int a = j3 - j2 + k + m1, b = j3 - j1 + k - m2, c = j1 + j2 - j3 - k,
              d = j1 - k - m1, e = j2 - k + m2;
    if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) continue;
    const cpp_rational term(1, factorial(k) * factorial(a) * factorial(b) * factorial(c) *
                                   factorial(d) * factorial(e));
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  if (sum == 0) return {0, 0};
  const int phase = ((j1 - j2 - m3) % 2 == 0) ? 1 : -1;
  const int sign = phase * (sum > 0 ? 1 : -1);
  return {triangle * cpp_rational(projections) * sum * sum, sign};
}

}  // namespace oracle
