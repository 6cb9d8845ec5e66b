#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mfpop/bethe_oracle.hpp"
#include "mfpop/error.hpp"
#include "support.hpp"

using namespace mfpop;
using mfpop::testing::Rng;
using mfpop::testing::shared;

namespace {

const Poly X = Poly::x();
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

SolveOptions opts(std::size_t starts, std::uint64_t seed) {
  SolveOptions o;
  o.starts = starts;
  o.seed = seed;
  return o;
}

// Equations re-derived here: for each coordinate u of color j,
//   sum_a -b_j m_aj/(u - z_a) + sum_{other v} (alpha_j, alpha_color(v))/(u - v).
double residual_by_hand(const ProblemData& p, const std::vector<std::vector<Complex>>& u) {
  double worst = 0;
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t s = 0; s < u[j].size(); ++s) {
      Complex v = 0;
      for (std::size_t a = 0; a < p.points(); ++a)
        v -= static_cast<double>(p.cartan.b(j) * p.weights[a][j]) / (u[j][s] - p.z[a].get_d());
      for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t t = 0; t < u[i].size(); ++t)
          if (i != j || t != s)
            v += static_cast<double>(root_bilinear(p.cartan, j, i)) / (u[j][s] - u[i][t]);
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

NumericTuple sqrt5_tuple(double sign) {
  BethePoint pt = make_bethe_point(mfpop::testing::sl3_two_point(),
                                   {{Complex(sign * kInvSqrt5, 0)}, {Complex(-sign * kInvSqrt5, 0)}});
  return to_numeric_tuple(pt);
}

}  // namespace

TEST_SUITE("bethe_oracle") {

TEST_CASE("Two-point sl3 problem at (1,1): exactly the two points at +-1/sqrt5") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const SolveResult r = solve_bethe(p, DegreeVector({1, 1}), opts(200, 7));
  REQUIRE(r.points.size() == 2);
  for (const auto& pt : r.points) {
    CHECK(pt.residual < 1e-10);
    CHECK(residual_by_hand(p, pt.u) < 1e-10);
    CHECK(std::abs(std::abs(pt.u[0][0].real()) - kInvSqrt5) < 1e-10);
    CHECK(std::abs(pt.u[0][0] + pt.u[1][0]) < 1e-10);
    CHECK(std::abs(pt.u[0][0].imag()) < 1e-10);
  }
  CHECK(r.stats.starts == 200);
  CHECK(r.stats.converged + r.stats.failed == r.stats.starts);
}

TEST_CASE("k = 0 gives one empty point") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const SolveResult r = solve_bethe(p, DegreeVector({0, 0}), opts(10, 1));
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].residual == 0);
  CHECK(r.points[0].u[0].empty());
  const NumericTuple t = to_numeric_tuple(r.points[0]);
  CHECK(t.y[0] == CPoly{1.0});
  CHECK(t.y[1] == CPoly{1.0});
}

TEST_CASE("sl2 at k = 2 is a one-parameter family u1 = -u2") {
  const ProblemData p = mfpop::testing::sl2_problem(1);
  const SolveResult r = solve_bethe(p, DegreeVector({2}), opts(50, 3));
  CHECK(r.points.size() > 5);
  for (const auto& pt : r.points) {
    CHECK(std::abs(pt.u[0][0] + pt.u[0][1]) < 1e-8);
    CHECK(residual_by_hand(p, pt.u) < 1e-10);
  }
}

TEST_CASE("same seed, same output; permutations do not change the representative") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const SolveResult a = solve_bethe(p, DegreeVector({3, 0}), opts(40, 99));
  const SolveResult b = solve_bethe(p, DegreeVector({3, 0}), opts(40, 99));
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].u == b.points[i].u);

  Rng rng(41);
  for (const auto& pt : a.points) {
    auto g = pt.u;
    std::shuffle(g[0].begin(), g[0].end(), rng);
    CHECK(make_bethe_point(p, g).u == pt.u);
  }
}

TEST_CASE("to_numeric_tuple") {
  const NumericTuple t = sqrt5_tuple(1);
  CHECK(std::abs(t.y[0][0] + kInvSqrt5) < 1e-15);
  CHECK(std::abs(t.y[1][0] - kInvSqrt5) < 1e-15);
  const BethePoint pt = make_bethe_point(mfpop::testing::sl2_problem(1), {{Complex(1), Complex(-1)}});
  const NumericTuple s = to_numeric_tuple(pt);
  REQUIRE(s.y[0].size() == 3);
  CHECK(std::abs(s.y[0][0] + 1.0) < 1e-15);
  CHECK(std::abs(s.y[0][1]) < 1e-15);
  CHECK(std::abs(s.y[0][2] - 1.0) < 1e-15);
  const NumericTuple e = to_numeric_tuple(Tuple({X * X - 2, Poly(1L)}));
  CHECK(e.degrees() == IntVector{2, 0});
  const auto r = numeric_roots(e, 0);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(std::abs(r[0]) - std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("numeric mu, identity residual and charge for the sqrt5 tuples") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  for (double sign : {1.0, -1.0}) {
    const NumericTuple t = sqrt5_tuple(sign);
    const auto mu = numeric_mu(t, p);
    REQUIRE(mu.size() == 2);
    CHECK(std::abs(mu[0] - 6.0) < 1e-8);
    CHECK(std::abs(mu[1] + 6.0) < 1e-8);
    CHECK(numeric_nb_residual(t, p, mu) < 1e-8);
    CHECK(std::abs(numeric_charge(t, p) + 10.0) < 1e-8);
    CHECK(numeric_fertility(t, p, 0, 1e-9));
    CHECK(numeric_fertility(t, p, 1, 1e-9));
  }
}

TEST_CASE("numeric identity residual for the empty tuple") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const NumericTuple t = to_numeric_tuple(Tuple::empty(2));
  CHECK(numeric_nb_residual(t, p, {1.0, -1.0}) < 1e-12);
  CHECK(numeric_nb_residual(t, p, {0.0, 0.0}) > 1e-3);
  const auto mu = numeric_mu(t, p);
  CHECK(std::abs(mu[0] - 1.0) < 1e-10);
  CHECK(std::abs(numeric_charge(t, p)) < 1e-10);
}

TEST_CASE("numeric_fertility") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  CHECK_FALSE(numeric_fertility(to_numeric_tuple(Tuple({X - 2, Poly(1L)})), p, 0, 1e-9));
  CHECK(numeric_fertility(to_numeric_tuple(Tuple({X, Poly(1L)})), p, 0, 1e-9));
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(numeric_fertility(to_numeric_tuple(Tuple::empty(2)), p, j, 1e-9));
}

TEST_CASE("solver output satisfies the identity with numeric mu; random tuples do not") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const SolveResult r = solve_bethe(p, DegreeVector({3, 0}), opts(30, 5));
  REQUIRE_FALSE(r.points.empty());
  for (const auto& pt : r.points) {
    const NumericTuple t = to_numeric_tuple(pt);
    CHECK(numeric_nb_residual(t, p, numeric_mu(t, p)) < 1e-8);
  }
  Rng rng(42);
  for (int c = 0; c < 30; ++c) {
    const Tuple t({mfpop::testing::random_monic_squarefree(rng, 3),
                   mfpop::testing::random_monic_squarefree(rng, 2)});
    if (!is_generic(t, p).ok) continue;
    const NumericTuple nt = to_numeric_tuple(t);
    CHECK(numeric_nb_residual(nt, p, numeric_mu(nt, p)) > 1e-3);
  }
}

TEST_CASE("match_population") {
  const auto s = shared(mfpop::testing::sl2_problem(1));
  ExploreLimits lim;
  lim.max_depth = 1;
  const PopulationGraph g = explore(s, Tuple::empty(1), lim);
  // x^2 + beta for any beta lies on the family from the root.
  NumericTuple t;
  t.y = {CPoly{Complex(0.37, -1.2), 0.0, 1.0}};
  t.roots = {std::nullopt};
  const MatchResult m = match_population(g, t, 1e-8);
  CHECK(m.matched);
  CHECK(m.via == "family");
  CHECK(m.fit_residual < 1e-8);

  const MatchResult root = match_population(g, to_numeric_tuple(Tuple::empty(1)), 1e-8);
  CHECK(root.matched);
  CHECK(root.via == "node");
  CHECK(root.node == std::size_t{0});

  const auto p = shared(mfpop::testing::sl3_two_point());
  const PopulationGraph h = explore(p, Tuple::empty(2), lim);
  CHECK_FALSE(match_population(h, sqrt5_tuple(1), 1e-8).matched);
  CHECK_FALSE(match_population(h, sqrt5_tuple(-1), 1e-8).matched);
}

TEST_CASE("master function real part is finite at a critical point") {
  const ProblemData p = mfpop::testing::sl3_two_point();
  const double v = master_function_real(p, {{Complex(kInvSqrt5)}, {Complex(-kInvSqrt5)}});
  CHECK(std::isfinite(v));
  const CartanData aff = validate_cartan({{2, -2}, {-2, 2}}, {1, 1});
  const ProblemData q = build_problem(aff, {0}, {WeightPairings{{1, 0}}});
  CHECK_THROWS_AS(master_function_real(q, {{}, {}}), Error);
}

}  // TEST_SUITE
