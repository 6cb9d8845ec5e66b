#include "mfpop/poly.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "mfpop/error.hpp"

namespace mfpop {

Poly::Poly(const Rational& constant) {
  if (constant != 0) c_.push_back(constant);
}

Poly::Poly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

Poly::Poly(std::initializer_list<Rational> ascending) : c_(ascending) { trim(); }

Poly Poly::x() { return Poly{Rational(0), Rational(1)}; }

Poly Poly::monomial(const Rational& c, std::size_t n) {
  std::vector<Rational> v(n + 1);
  v[n] = c;
  return Poly(std::move(v));
}

Poly Poly::linear(const Rational& root) { return Poly{Rational(-root), Rational(1)}; }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

const Rational& Poly::leading() const {
  if (c_.empty()) throw Error(ErrorCode::ZeroPolynomial, "leading coefficient of zero");
  return c_.back();
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<Rational> v(c_.size() + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i + 1] = c_[i] / static_cast<long>(i + 1);
  return Poly(std::move(v));
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::monic() const {
  if (c_.empty()) throw Error(ErrorCode::ZeroPolynomial, "cannot normalize zero");
  Poly out = *this;
  const Rational lc = c_.back();
  for (auto& v : out.c_) v /= lc;
  return out;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1L);
  Poly base = *this;
  while (n) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return result;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(v));
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& v : c_) v *= s;
  return *this;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

std::string Poly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << to_string(mag);
      continue;
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << "x";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by zero polynomial");
  if (a.degree() < b.degree()) return {Poly{}, a};
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<Rational> rem = a.coeffs();
  std::vector<Rational> quo(rem.size() - db);
  const Rational& lc = b.leading();
  for (std::size_t i = rem.size(); i-- > db;) {
    if (rem[i] == 0) continue;
    const Rational f = rem[i] / lc;
    quo[i - db] = f;
    for (std::size_t k = 0; k <= db; ++k) rem[i - db + k] -= f * b.coeffs()[k];
  }
  rem.resize(db);
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

namespace {

using ZPoly = std::vector<Integer>;  // ascending, trimmed

void ztrim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Integer zcontent(const ZPoly& p) {
  Integer g = 0;
  for (const auto& c : p) g = ::gcd(g, c);
  return g;
}

ZPoly primitive_integer(const Poly& p) {
  Integer l = 1;
  for (const auto& c : p.coeffs()) l = ::lcm(l, c.get_den());
  ZPoly z;
  for (const auto& c : p.coeffs()) z.push_back(c.get_num() * (l / c.get_den()));
  Integer g = zcontent(z);
  if (g != 0)
    for (auto& c : z) c /= g;
  if (!z.empty() && z.back() < 0)
    for (auto& c : z) c = -c;
  return z;
}

// lc(b)^(deg a - deg b + 1) * a mod b, computed without fractions.
ZPoly pseudo_remainder(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  const Integer& lc = b.back();
  if (a.size() < b.size()) return a;
  std::size_t steps = a.size() - b.size() + 1;
  while (a.size() >= b.size() && !a.empty()) {
    const Integer lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c *= lc;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= lead * b[k];
    ztrim(a);
    --steps;
  }
  // Account for iterations skipped by early degree drops.
  if (steps > 0) {
    Integer f;
    mpz_pow_ui(f.get_mpz_t(), lc.get_mpz_t(), steps);
    for (auto& c : a) c *= f;
  }
  return a;
}

Integer zpow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  ZPoly A = primitive_integer(a);
  ZPoly B = primitive_integer(b);
  if (A.size() < B.size()) std::swap(A, B);
  Integer g = 1;
  Integer h = 1;
  while (true) {
    if (B.size() == 1) return Poly(1L);
    const unsigned long delta = A.size() - B.size();
    ZPoly R = pseudo_remainder(A, B);
    if (R.empty()) break;
    A = std::move(B);
    const Integer divisor = g * zpow(h, delta);
    for (auto& c : R) c /= divisor;
    B = std::move(R);
    g = A.back();
    if (delta == 0) {
      // h unchanged
    } else {
      h = zpow(g, delta) / zpow(h, delta - 1);
    }
  }
  Integer cont = zcontent(B);
  std::vector<Rational> out;
  for (const auto& c : B) out.emplace_back(c / cont);
  return Poly(std::move(out)).monic();
}

ExtendedGcd extended_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero())
    throw Error(ErrorCode::ZeroPolynomial, "extended gcd of two zero polynomials");
  Poly r0 = a, r1 = b;
  Poly s0(1L), s1;
  Poly t0, t1(1L);
  while (!r1.is_zero()) {
    DivMod qr = divmod(r0, r1);
    Poly s2 = s0 - qr.quotient * s1;
    Poly t2 = t0 - qr.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(qr.remainder);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const Rational lc = r0.leading();
  const Rational inv = 1 / lc;
  return {r0 * inv, s0 * inv, t0 * inv};
}

Poly wronskian(const Poly& f, const Poly& g) { return f * g.derivative() - f.derivative() * g; }

bool squarefree(const Poly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "squarefree test of zero");
  return gcd(f, f.derivative()).degree() <= 0;
}

bool coprime(const Poly& f, const Poly& g) {
  if (f.is_zero() || g.is_zero())
    throw Error(ErrorCode::ZeroPolynomial, "coprimality test with zero");
  return gcd(f, g).degree() == 0;
}

}  // namespace mfpop
