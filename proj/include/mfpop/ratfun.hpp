#pragma once

#include <cstddef>
#include <vector>

#include "mfpop/poly.hpp"

namespace mfpop {

/// num/den over Q with gcd(num, den) = 1 and den monic. Every constructor and
/// operator re-normalizes.
class RatFun {
 public:
  RatFun() : den_(1L) {}
  RatFun(Poly num);  // NOLINT(google-explicit-constructor)
  RatFun(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFun derivative() const;

  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  RatFun operator-() const;
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }

  friend bool operator==(const RatFun&, const RatFun&) = default;

 private:
  Poly num_;
  Poly den_;
};

struct HermiteIntegral {
  RatFun rational_part;
  Poly poly_part;
  Poly residual;  // N with deg N < deg y
};

/// One Hermite-reduction step for the integral of P / y^2 with y squarefree:
///   d/dx(poly_part + rational_part) + residual / y == P / y^2.
/// The antiderivative is rational iff residual == 0. Throws NotSquarefree.
HermiteIntegral hermite_integrate_sq(const Poly& p, const Poly& y);

/// Coefficient of 1/(x - z) in f. Throws HigherOrderPole when (x - z)^2 | den.
Rational residue_at(const RatFun& f, const Rational& z);

/// Expansion of f at infinity: poly_part holds the x^1 and higher terms,
/// coeffs[i] is the coefficient of x^-i for i = 0..order.
struct LaurentExpansion {
  Poly poly_part;
  std::vector<Rational> coeffs;
};

LaurentExpansion laurent_at_infinity(const RatFun& f, std::size_t order);

}  // namespace mfpop
