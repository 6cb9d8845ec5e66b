#include "mfpop/ratfun.hpp"

#include "mfpop/error.hpp"

namespace mfpop {

RatFun::RatFun(Poly num) : num_(std::move(num)), den_(1L) {}

RatFun::RatFun(Poly num, Poly den) {
  if (den.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "zero denominator");
  if (num.is_zero()) {
    den_ = Poly(1L);
    return;
  }
  const Poly g = gcd(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).quotient;
    den = divmod(den, g).quotient;
  }
  const Rational lc = den.leading();
  num_ = num * (1 / lc);
  den_ = den * (1 / lc);
}

RatFun RatFun::derivative() const {
  return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RatFun operator/(const RatFun& a, const RatFun& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

RatFun RatFun::operator-() const {
  RatFun out = *this;
  out.num_ = -num_;
  return out;
}

HermiteIntegral hermite_integrate_sq(const Poly& p, const Poly& y) {
  if (y.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "zero denominator base");
  if (!squarefree(y)) throw Error(ErrorCode::NotSquarefree, y.str());
  if (y.degree() == 0) {
    const Rational inv = 1 / (y.leading() * y.leading());
    return {RatFun{}, (p * inv).antiderivative(), Poly{}};
  }
  const Poly y2 = y * y;
  const DivMod split = divmod(p, y2);
  const Poly dy = y.derivative();
  // s*y + t*y' = 1 because y is squarefree.
  const ExtendedGcd bez = extended_gcd(y, dy);
  const Poly a = -divmod(split.remainder * bez.t, y).remainder;
  const DivMod b = divmod(split.remainder + a * dy, y);
  const Poly n = b.quotient - a.derivative();
  return {RatFun(a, y), split.quotient.antiderivative(), n};
}

Rational residue_at(const RatFun& f, const Rational& z) {
  const Poly lin = Poly::linear(z);
  const DivMod once = divmod(f.den(), lin);
  if (!once.remainder.is_zero()) return 0;
  if (divmod(once.quotient, lin).remainder.is_zero())
    throw Error(ErrorCode::HigherOrderPole, "at x = " + to_string(z));
  return f.num()(z) / once.quotient(z);
}

LaurentExpansion laurent_at_infinity(const RatFun& f, std::size_t order) {
  LaurentExpansion out;
  out.coeffs.assign(order + 1, Rational(0));
  const DivMod qr = divmod(f.num(), f.den());
  out.coeffs[0] = qr.quotient.coeff(0);
  std::vector<Rational> high = qr.quotient.coeffs();
  if (!high.empty()) high[0] = 0;
  out.poly_part = Poly(std::move(high));

  // den is monic of degree d and r = sum_{k>=1} c_k x^-k * den, so matching
  // the x^(d-k) coefficient gives c_k = r_{d-k} - sum_{i<k} e_{d-k+i} c_i.
  const Poly& den = f.den();
  const Poly& r = qr.remainder;
  const long d = den.degree();
  for (std::size_t k = 1; k <= order; ++k) {
    const long idx = d - static_cast<long>(k);
    Rational c = idx >= 0 ? r.coeff(static_cast<std::size_t>(idx)) : Rational(0);
    for (std::size_t i = 1; i < k; ++i) {
      const long e = d - static_cast<long>(k) + static_cast<long>(i);
      if (e >= 0) c -= den.coeff(static_cast<std::size_t>(e)) * out.coeffs[i];
    }
    out.coeffs[k] = c;
  }
  return out;
}

}  // namespace mfpop
