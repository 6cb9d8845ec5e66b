#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfpop/rational.hpp"

namespace mfpop {

/// Dense univariate polynomial over Q, coefficients in ascending degree with
/// no trailing zeros. The zero polynomial has degree kZeroDegree.
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  Poly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Poly(long constant) : Poly(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Rational> ascending);
  Poly(std::initializer_list<Rational> ascending);

  static Poly x();
  static Poly monomial(const Rational& c, std::size_t n);
  /// x - root
  static Poly linear(const Rational& root);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  /// Coefficient of x^i; zero beyond the degree.
  Rational coeff(std::size_t i) const;
  const Rational& leading() const;

  Poly derivative() const;
  /// Antiderivative with zero constant term.
  Poly antiderivative() const;
  Rational operator()(const Rational& x) const;
  /// Divides by the leading coefficient. Throws ZeroPolynomial on zero.
  Poly monic() const;
  Poly pow(unsigned n) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(Poly a, long s) { return a *= Rational(s); }
  friend Poly operator*(long s, Poly a) { return a *= Rational(s); }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Human-readable form, e.g. "x^2 - 1/2*x + 3".
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const Poly& p);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

/// Euclidean division; throws ZeroPolynomial on a zero divisor.
DivMod divmod(const Poly& a, const Poly& b);

/// Monic gcd via the subresultant PRS over Z[x] (content removed first).
/// gcd(0, 0) is 0.
Poly gcd(const Poly& a, const Poly& b);

struct ExtendedGcd {
  Poly g;  // monic
  Poly s;
  Poly t;  // s*a + t*b == g
};

/// Extended Euclid over Q. Requires a or b nonzero.
ExtendedGcd extended_gcd(const Poly& a, const Poly& b);

/// W(f, g) = f g' - f' g
Poly wronskian(const Poly& f, const Poly& g);

/// True iff gcd(f, f') is constant. Throws ZeroPolynomial on f == 0.
bool squarefree(const Poly& f);

/// True iff gcd(f, g) is constant. Throws ZeroPolynomial if either is zero.
bool coprime(const Poly& f, const Poly& g);

}  // namespace mfpop
