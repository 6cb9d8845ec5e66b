#include "support.hpp"

#include <algorithm>
#include <sstream>
#include <variant>

#include "mfpop/error.hpp"

namespace mfpop::testing {

ProblemData sl3_two_point() {
  return build_problem(validate_cartan({{2, -1}, {-1, 2}}, {1, 1}), {1, -1},
                       {WeightPairings{{1, 1}}, WeightPairings{{1, 1}}});
}

ProblemData sl2_problem(long m, const Rational& z) {
  return build_problem(validate_cartan({{2}}, {1}), {z}, {WeightPairings{{m}}});
}

ProblemData a2_single_point(long m1, long m2) {
  return build_problem(validate_cartan({{2, -1}, {-1, 2}}, {1, 1}), {0},
                       {WeightPairings{{m1, m2}}});
}

std::shared_ptr<const ProblemData> shared(ProblemData p) {
  return std::make_shared<const ProblemData>(std::move(p));
}

long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Rational random_rational(Rng& rng, long num_bound, long den_bound) {
  Rational q(uniform(rng, -num_bound, num_bound), uniform(rng, 1, den_bound));
  q.canonicalize();
  return q;
}

Poly random_poly(Rng& rng, int degree, long num_bound, long den_bound) {
  std::vector<Rational> c;
  for (int i = 0; i <= degree; ++i) c.push_back(random_rational(rng, num_bound, den_bound));
  if (c.back() == 0) c.back() = 1;
  return Poly(std::move(c));
}

Poly random_monic_squarefree(Rng& rng, int degree) {
  for (;;) {
    Poly p = random_poly(rng, degree).monic();
    if (squarefree(p)) return p;
  }
}

CartanData random_cartan(Rng& rng, std::size_t max_rank) {
  const auto r = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_rank)));
  IntVector b(r);
  for (auto& v : b) v = uniform(rng, 1, 3);
  IntMatrix a(r, IntVector(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    a[i][i] = 2;
    for (std::size_t j = i + 1; j < r; ++j) {
      const long t = std::max(0L, uniform(rng, -1, 2));
      a[i][j] = -b[j] * t;
      a[j][i] = -b[i] * t;
    }
  }
  return validate_cartan(std::move(a), std::move(b));
}

CartanData random_finite_cartan(Rng& rng) {
  static const std::vector<std::pair<IntMatrix, IntVector>> list = {
      {{{2}}, {1}},
      {{{2, 0}, {0, 2}}, {1, 1}},
      {{{2, -1}, {-1, 2}}, {1, 1}},
      {{{2, -2}, {-1, 2}}, {1, 2}},
      {{{2, -1}, {-2, 2}}, {2, 1}},
      {{{2, -3}, {-1, 2}}, {1, 3}},
      {{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}, {1, 1, 1}},
      {{{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}}, {1, 1, 2}},
      {{{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}}, {2, 2, 1}},
      {{{2, 0, 0}, {0, 2, -1}, {0, -1, 2}}, {1, 1, 1}},
      {{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, {1, 1, 1}},
  };
  const auto& e = list[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(list.size()) - 1))];
  return validate_cartan(e.first, e.second);
}

CartanData random_affine_cartan(Rng& rng) {
  static const std::vector<std::pair<IntMatrix, IntVector>> list = {
      {{{2, -2}, {-2, 2}}, {1, 1}},
      {{{2, -4}, {-1, 2}}, {1, 4}},
      {{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}, {1, 1, 1}},
      {{{2, -1, 0}, {-2, 2, -2}, {0, -1, 2}}, {2, 1, 2}},
  };
  const auto& e = list[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(list.size()) - 1))];
  return validate_cartan(e.first, e.second);
}

std::vector<WeightPairings> random_weights(Rng& rng, std::size_t rank, std::size_t n, long bound) {
  std::vector<WeightPairings> w(n);
  for (auto& m : w)
    for (std::size_t i = 0; i < rank; ++i) m.m.push_back(uniform(rng, 0, bound));
  return w;
}

ProblemData random_problem(Rng& rng, const CartanData& cd, std::size_t max_points, long bound) {
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_points)));
  std::vector<Rational> z;
  while (z.size() < n) {
    Rational q = random_rational(rng, 4, 2);
    if (std::find(z.begin(), z.end(), q) == z.end()) z.push_back(q);
  }
  std::optional<RationalMatrix> gram;
  if (!cd.invertible()) {
    gram = RationalMatrix(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) (*gram)[a][b] = (*gram)[b][a] = random_rational(rng);
  }
  return build_problem(cd, std::move(z), random_weights(rng, cd.rank(), n, bound), gram);
}

namespace {

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix r;
  for (const auto& row : m) {
    r.emplace_back();
    for (long v : row) r.back().emplace_back(v);
  }
  return r;
}

}  // namespace

std::size_t rank_by_rational_elimination(const IntMatrix& m) {
  RationalMatrix a = to_rational(m);
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

RationalMatrix inverse_by_gauss_jordan(const IntMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = to_rational(m);
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const Rational inv = 1 / a[c][c];
    for (auto& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  RationalMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(a[i].begin() + static_cast<long>(n), a[i].end());
  return out;
}

namespace {

std::string show(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

void fail(PropertyOutcome& out, const std::string& what) {
  if (out.failures++ == 0) out.first_failure = what;
}

IntVector tau_of(Rng& rng, std::size_t rank) {
  IntVector tau(rank, 0);
  for (const auto& w : random_weights(rng, rank, static_cast<std::size_t>(uniform(rng, 1, 3)), 3))
    for (std::size_t i = 0; i < rank; ++i) tau[i] += w[i];
  return tau;
}

CartanData any_cartan(Rng& rng, std::size_t max_rank) {
  switch (uniform(rng, 0, 2)) {
    case 0: return random_finite_cartan(rng);
    case 1: return random_affine_cartan(rng);
    default: return random_cartan(rng, max_rank);
  }
}

}  // namespace

PropertyOutcome property_charge_invariance(std::uint64_t seed, std::size_t cases) {
  PropertyOutcome out{"charge invariance under degree_transform"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const CartanData cd = any_cartan(rng, 4);
    const IntVector tau = tau_of(rng, cd.rank());
    IntVector k(cd.rank());
    for (auto& v : k) v = uniform(rng, 0, 20);
    const Integer b = charge_form(cd, tau, k);
    for (std::size_t j = 0; j < cd.rank(); ++j) {
      const IntVector kt = degree_transform(cd, tau, k, j);
      if (charge_form(cd, tau, kt) != b) fail(out, "k=" + show(k) + " j=" + std::to_string(j));
    }
    ++out.cases;
  }
  return out;
}

PropertyOutcome property_reflection_involution(std::uint64_t seed, std::size_t cases) {
  PropertyOutcome out{"shifted reflection is an involution"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const CartanData cd = any_cartan(rng, 4);
    WeightPairings m;
    for (std::size_t i = 0; i < cd.rank(); ++i) m.m.push_back(uniform(rng, -10, 10));
    for (std::size_t j = 0; j < cd.rank(); ++j)
      if (shifted_reflection(cd, j, shifted_reflection(cd, j, m)) != m)
        fail(out, "m=" + show(m.m) + " j=" + std::to_string(j));
    ++out.cases;
  }
  return out;
}

PropertyOutcome property_transform_compatibility(std::uint64_t seed, std::size_t cases) {
  PropertyOutcome out{"degree_transform matches shifted_reflection on the weight at infinity"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const CartanData cd = any_cartan(rng, 4);
    const IntVector tau = tau_of(rng, cd.rank());
    IntVector k(cd.rank());
    for (auto& v : k) v = uniform(rng, 0, 20);
    const WeightPairings w = infinity_weight(cd, tau, k);
    for (std::size_t j = 0; j < cd.rank(); ++j) {
      const IntVector kt = degree_transform(cd, tau, k, j);
      if (infinity_weight(cd, tau, kt) != shifted_reflection(cd, j, w))
        fail(out, "k=" + show(k) + " j=" + std::to_string(j));
    }
    ++out.cases;
  }
  return out;
}

PropertyOutcome property_norm_identity(std::uint64_t seed, std::size_t cases) {
  PropertyOutcome out{"charge equals |rho+sum Lambda-sum k alpha|^2 - |rho+sum Lambda|^2"};
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const CartanData cd = random_finite_cartan(rng);
    const std::size_t r = cd.rank();
    const IntVector tau = tau_of(rng, r);
    IntVector k(r);
    for (auto& v : k) v = uniform(rng, 0, 8);
    // Pairings of rho + sum Lambda_a, and of the same minus sum k_j alpha_j.
    WeightPairings w;
    WeightPairings v;
    for (std::size_t i = 0; i < r; ++i) {
      w.m.push_back(1 + tau[i]);
      long s = 1 + tau[i];
      for (std::size_t j = 0; j < r; ++j) s -= cd.a(i, j) * k[j];
      v.m.push_back(s);
    }
    const std::vector<WeightPairings> pair{v, w};
    const RationalMatrix g = gram_default(cd, pair);
    const Rational via_gram = g[0][0] - g[1][1];

    // Same norms from an independently computed inverse.
    const RationalMatrix inv = inverse_by_gauss_jordan(cd.matrix());
    auto norm = [&](const WeightPairings& x) {
      Rational acc = 0;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) acc += Rational(x[i] * x[j] * cd.b(i)) * inv[i][j];
      return acc;
    };
    const Rational via_inverse = norm(v) - norm(w);
    const Rational b(charge_form(cd, tau, k));
    if (b != via_gram || b != via_inverse) fail(out, "k=" + show(k) + " tau=" + show(tau));
    ++out.cases;
  }
  return out;
}

PropertyOutcome property_wronskian_identity(std::uint64_t seed, std::size_t cases) {
  PropertyOutcome out{"W(y_j, base) = T_j prod y_i^{-a_ji} for every generation"};
  Rng rng(seed);
  while (out.cases < cases) {
    const CartanData cd = uniform(rng, 0, 3) == 0 ? random_affine_cartan(rng)
                                                   : random_finite_cartan(rng);
    const ProblemData p = random_problem(rng, cd, 2, 2);
    Tuple t = Tuple::empty(p.rank());
    for (int step = 0; step < 4 && out.cases < cases; ++step) {
      const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(p.rank()) - 1));
      const FertilityResult fr = fertility(t, p, j);
      const auto* fam = std::get_if<GenerationFamily>(&fr);
      if (!fam) {
        fail(out, "population member not fertile: " + t.key());
        break;
      }
      ++out.cases;
      const Poly rhs = fertility_numerator(t, p, j);
      if (wronskian(fam->direction, fam->base) != rhs) fail(out, "base of " + t.key());
      const Rational c = random_rational(rng, 3, 2);
      const Poly member = fam->member(c);
      if (member.is_zero()) break;
      const Tuple next = generate(*fam, c);
      // The stored component is monic, so W scales by 1/lc(member).
      if (wronskian(t[j], next[j]) * member.leading() != rhs) fail(out, "member of " + t.key());
      if (next[j].degree() > 8 || !is_generic(next, p).ok) break;
      t = next;
    }
  }
  return out;
}

namespace {

// Direction-wise exact and numeric verdicts for one tuple.
void compare_fertility(const Tuple& t, const ProblemData& p, double tol, FertilityAgreement& acc) {
  ++acc.tuples;
  const NumericTuple nt = to_numeric_tuple(t);
  for (std::size_t j = 0; j < t.rank(); ++j) {
    ++acc.directions;
    const bool exact = std::holds_alternative<GenerationFamily>(fertility(t, p, j));
    bool numeric = !exact;
    try {
      numeric = numeric_fertility(nt, p, j, tol);
    } catch (const Error& e) {
      if (acc.disagreements == 0) acc.first_disagreement = std::string(e.what()) + " at " + t.key();
      ++acc.disagreements;
      continue;
    }
    if (exact) ++acc.fertile;
    if (exact != numeric) {
      if (acc.disagreements == 0)
        acc.first_disagreement = "j=" + std::to_string(j) + " exact=" + std::to_string(exact) +
                                 " tuple " + t.key();
      ++acc.disagreements;
    }
  }
}

bool small_generic(const Tuple& t, const ProblemData& p) {
  for (const auto& y : t.components())
    if (y.degree() > 4) return false;
  return is_generic(t, p).ok;
}

}  // namespace

FertilityAgreement fertility_agreement(std::uint64_t seed, std::size_t tuples, double tol) {
  FertilityAgreement acc;
  Rng rng(seed);
  while (acc.tuples < tuples) {
    const CartanData cd = uniform(rng, 0, 1) ? random_finite_cartan(rng) : random_cartan(rng, 3);
    const ProblemData p = random_problem(rng, cd, 2, 2);
    switch (uniform(rng, 0, 2)) {
      case 0: {
        // A population member: fertile in every direction.
        Tuple t = Tuple::empty(p.rank());
        const long steps = uniform(rng, 1, 3);
        for (long s = 0; s < steps; ++s) {
          const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(p.rank()) - 1));
          const auto fam = std::get<GenerationFamily>(fertility(t, p, j));
          const Poly member = fam.member(random_rational(rng, 3, 2));
          if (member.is_zero()) break;
          const Tuple next = t.with_component(j, member);
          if (!small_generic(next, p)) break;
          t = next;
        }
        compare_fertility(t, p, tol, acc);
        break;
      }
      case 1: {
        // Random components; constant ones keep some directions fertile.
        std::vector<Poly> ys;
        for (std::size_t j = 0; j < p.rank(); ++j) {
          const int d = static_cast<int>(uniform(rng, 0, 4));
          ys.push_back(d == 0 ? Poly(1L) : random_monic_squarefree(rng, d));
        }
        const Tuple t(std::move(ys));
        if (small_generic(t, p)) compare_fertility(t, p, tol, acc);
        break;
      }
      default: {
        // A population member with one coefficient nudged off the family.
        Tuple t = Tuple::empty(p.rank());
        const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(p.rank()) - 1));
        const auto fam = std::get<GenerationFamily>(fertility(t, p, j));
        Poly member = fam.member(random_rational(rng, 3, 2));
        if (member.degree() < 1) break;
        member += Poly::monomial(Rational(1, uniform(rng, 2, 9)),
                                 static_cast<std::size_t>(uniform(rng, 0, member.degree() - 1)));
        const Tuple nudged = t.with_component(j, member);
        if (squarefree(nudged[j]) && small_generic(nudged, p)) compare_fertility(nudged, p, tol, acc);
        break;
      }
    }
  }
  return acc;
}

}  // namespace mfpop::testing
