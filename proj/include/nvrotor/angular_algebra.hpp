#pragma once

// Integer angular-momentum algebra for the rigid symmetric rotor.
//
// Conventions (shared by the body-frame and space-frame Hamiltonians):
//   * Rotor kets |J m k> have wavefunctions sqrt((2J+1)/8pi^2) D^(J)_{k m}(a,b,g)
//     where D^(J)_{k m} = <J k| exp(i g L3) exp(i b L2) exp(i a L3) |J m>.
//     Here m is the space-fixed projection (J3) and k the body-fixed one (J'3).
//   * Complex conjugation: D^(J)*_{nu mu} = (-1)^(nu-mu) D^(J)_{-nu,-mu}.
//   * Body-frame ladders J'+- = J'1 -+ i J'2 shift k by +-1 with the ordinary
//     coefficients sqrt((J -+ k)(J +- k + 1)).

#include <array>

namespace nvrotor::angular {

enum class Ladder { Raise, Lower };

struct ThreeJArgs {
  int j1, j2, j3;
  int m1, m2, m3;
};

/// Wigner 3j symbol for integer arguments. Zero when the projections do not
/// sum to zero or the triangle condition fails. Throws std::invalid_argument
/// for negative j or |m| > j.
double wigner_3j(const ThreeJArgs& args);
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// Matrix element of a ladder operator: raise gives sqrt((j-k)(j+k+1)),
/// lower gives sqrt((j+k)(j-k+1)).
double ladder_coeff(int j, int k, Ladder direction);

struct RotorKet {
  int j;  // J (or L)
  int m;  // space-fixed projection
  int k;  // body-fixed projection
};

/// <J' m' k'| D^(1)_{mu nu} |J m k> between rotor kets:
///   (-1)^(k'-m') sqrt((2J'+1)(2J+1)) (J' 1 J; -k' mu k) (J' 1 J; -m' nu m).
/// The first 3j carries the body index, the second the space index.
double d1_element(const RotorKet& bra, int mu, int nu, const RotorKet& ket);

/// Body-frame special case <J' m' k'| D^(1)_{mu 0} |J m k>, used for the
/// projections of the body axes onto the field axis e3.
double d1_matrix_element(const RotorKet& bra, int mu, const RotorKet& ket);

/// Largest integer angular momentum handled by the factorial tables.
inline constexpr int kMaxAngularMomentum = 200;

}  // namespace nvrotor::angular
