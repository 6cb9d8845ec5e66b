#include "mfpop/tuplegen.hpp"

#include <stdexcept>

#include "mfpop/error.hpp"

namespace mfpop {

ProblemData build_problem(CartanData cartan, std::vector<Rational> z,
                          std::vector<WeightPairings> weights,
                          std::optional<RationalMatrix> gram) {
  const std::size_t n = z.size();
  if (weights.size() != n)
    throw Error(ErrorCode::ShapeMismatch, std::to_string(n) + " points but " +
                                              std::to_string(weights.size()) + " weights");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (z[a] == z[b])
        throw Error(ErrorCode::DuplicatePoints, "z_" + std::to_string(a + 1) + " = z_" +
                                                    std::to_string(b + 1) + " = " +
                                                    to_string(z[a]));
  for (std::size_t a = 0; a < n; ++a) {
    if (weights[a].size() != cartan.rank())
      throw Error(ErrorCode::ShapeMismatch, "weight " + std::to_string(a + 1) +
                                                " has wrong length");
    if (!is_dominant(weights[a]))
      throw Error(ErrorCode::NonDominantWeight, "weight " + std::to_string(a + 1));
  }
  if (gram) {
    if (gram->size() != n)
      throw Error(ErrorCode::GramShapeMismatch, "expected " + std::to_string(n) + " rows");
    for (const auto& row : *gram)
      if (row.size() != n)
        throw Error(ErrorCode::GramShapeMismatch, "expected " + std::to_string(n) + " columns");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if ((*gram)[a][b] != (*gram)[b][a])
          throw Error(ErrorCode::GramShapeMismatch, "Gram matrix is not symmetric");
  } else if (cartan.invertible()) {
    gram = gram_default(cartan, weights);
  }

  ProblemData p{std::move(cartan), std::move(z), std::move(weights), {}, {}, std::move(gram)};
  for (std::size_t j = 0; j < p.rank(); ++j) {
    Poly t(1L);
    long deg = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const long m = p.weights[a][j];
      t *= Poly::linear(p.z[a]).pow(static_cast<unsigned>(m));
      deg += m;
    }
    p.T.push_back(std::move(t));
    p.tau.push_back(deg);
  }
  return p;
}

WeightPairings infinity_weight(const ProblemData& p, const DegreeVector& k) {
  return infinity_weight(p.cartan, p.tau, k.values());
}

IntVector degree_transform(const ProblemData& p, std::span<const long> k, std::size_t j) {
  return degree_transform(p.cartan, p.tau, k, j);
}

Integer charge_form(const ProblemData& p, std::span<const long> k) {
  return charge_form(p.cartan, p.tau, k);
}

Tuple::Tuple(std::vector<Poly> components) : y_(std::move(components)) {
  IntVector k;
  for (auto& c : y_) {
    if (c.is_zero()) throw Error(ErrorCode::ZeroMember, "tuple component is zero");
    c = c.monic();
    k.push_back(c.degree());
  }
  k_ = DegreeVector(std::move(k));
}

Tuple Tuple::empty(std::size_t rank) { return Tuple(std::vector<Poly>(rank, Poly(1L))); }

Tuple Tuple::with_component(std::size_t j, const Poly& p) const {
  std::vector<Poly> y = y_;
  y.at(j) = p;
  return Tuple(std::move(y));
}

std::string Tuple::key() const {
  std::string out;
  for (std::size_t j = 0; j < y_.size(); ++j) {
    if (j) out += ';';
    const auto& c = y_[j].coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += to_string(c[i]);
    }
  }
  return out;
}

std::optional<Rational> GenerationFamily::degree_drop() const {
  if (base.degree() == direction.degree()) return -base.leading() / direction.leading();
  if (base.degree() < direction.degree()) return Rational(0);
  return std::nullopt;
}

GenericityReport is_generic(const Tuple& t, const ProblemData& p) {
  GenericityReport rep;
  auto flag = [&](int cond, std::vector<std::size_t> idx, Poly witness) {
    rep.ok = false;
    rep.violations.push_back({cond, std::move(idx), std::move(witness)});
  };
  for (std::size_t j = 0; j < t.rank(); ++j) {
    const Poly g = gcd(t[j], t[j].derivative());
    if (g.degree() > 0) flag(1, {j}, g);
  }
  for (std::size_t j = 0; j < t.rank(); ++j) {
    const Poly g = gcd(t[j], p.T[j]);
    if (g.degree() > 0) flag(2, {j}, g);
  }
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = i + 1; j < t.rank(); ++j) {
      if (p.cartan.a(i, j) == 0) continue;
      const Poly g = gcd(t[i], t[j]);
      if (g.degree() > 0) flag(3, {i, j}, g);
    }
  return rep;
}

Poly fertility_numerator(const Tuple& t, const ProblemData& p, std::size_t j) {
  Poly num = p.T.at(j);
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i == j || p.cartan.a(j, i) == 0) continue;
    num *= t[i].pow(static_cast<unsigned>(-p.cartan.a(j, i)));
  }
  return num;
}

FertilityResult fertility(const Tuple& t, const ProblemData& p, std::size_t j) {
  if (j >= t.rank())
    throw Error(ErrorCode::IndexOutOfRange, "direction " + std::to_string(j + 1));
  const Poly& y = t[j];
  if (!squarefree(y)) throw Error(ErrorCode::NotSquarefreeDirection, y.str());
  const Poly num = fertility_numerator(t, p, j);
  HermiteIntegral h = hermite_integrate_sq(num, y);
  if (!h.residual.is_zero()) return NotFertile{std::move(h.residual)};
  const RatFun scaled = RatFun(y) * h.rational_part;
  if (scaled.den().degree() != 0)
    throw std::logic_error("y_j times the rational part is not a polynomial");
  Poly base = y * h.poly_part + scaled.num();
  if (wronskian(y, base) != num)
    throw std::logic_error("Wronskian identity failed for a fertile family");
  return GenerationFamily{j, std::move(base), y, t};
}

bool is_fertile(const Tuple& t, const ProblemData& p) {
  for (std::size_t j = 0; j < t.rank(); ++j)
    if (std::holds_alternative<NotFertile>(fertility(t, p, j))) return false;
  return true;
}

Tuple generate(const GenerationFamily& f, const Rational& c) {
  const Poly m = f.member(c);
  if (m.is_zero())
    throw Error(ErrorCode::ZeroMember, "member vanishes at c = " + to_string(c));
  return f.parent.with_component(f.j, m);
}

RatFun critical_form(const Tuple& t, const ProblemData& p) {
  const auto& cd = p.cartan;
  const std::size_t r = t.rank();
  std::vector<RatFun> log_deriv;  // y_j'/y_j
  log_deriv.reserve(r);
  for (std::size_t j = 0; j < r; ++j) log_deriv.emplace_back(t[j].derivative(), t[j]);

  RatFun sum;
  for (std::size_t j = 0; j < r; ++j) {
    const Rational ajj = root_bilinear(cd, j, j);
    if (t[j].degree() == 0) continue;
    sum += RatFun(t[j].derivative().derivative() * ajj, t[j]);
    sum -= RatFun(p.T[j].derivative() * ajj, p.T[j]) * log_deriv[j];
    for (std::size_t i = 0; i < r; ++i) {
      if (i == j || cd.a(i, j) == 0 || t[i].degree() == 0) continue;
      sum += RatFun(Poly(Rational(root_bilinear(cd, i, j)))) * log_deriv[i] * log_deriv[j];
    }
  }
  return sum;
}

MuExtraction mu_extract(const Tuple& t, const ProblemData& p) {
  if (!p.gram) throw Error(ErrorCode::MissingGram, "mu extraction needs (Lambda_a, Lambda_b)");
  if (!is_generic(t, p).ok) throw Error(ErrorCode::NonGenericTuple, t.key());
  const RatFun r = critical_form(t, p);
  const auto& g = *p.gram;
  MuExtraction out;
  RatFun total = r;
  for (std::size_t a = 0; a < p.points(); ++a) {
    Rational s = 0;
    for (std::size_t b = 0; b < p.points(); ++b)
      if (b != a) s += g[a][b] / (p.z[a] - p.z[b]);
    const Rational res = residue_at(r, p.z[a]);
    out.mu.push_back(s - res);
    out.mu_sum += out.mu.back();
    total -= RatFun(Poly(res), Poly::linear(p.z[a]));
  }
  out.identity_ok = total.is_zero();
  return out;
}

Integer tuple_charge(const Tuple& t, const ProblemData& p) {
  return charge_form(p, t.degrees().values());
}

}  // namespace mfpop
