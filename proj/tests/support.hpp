#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mfpop/bethe_oracle.hpp"
#include "mfpop/kacmoody.hpp"
#include "mfpop/population.hpp"
#include "mfpop/tuplegen.hpp"

namespace mfpop::testing {

using Rng = std::mt19937_64;

// Problem fixtures built in code.
ProblemData sl3_two_point();
ProblemData sl2_problem(long m, const Rational& z = 0);
ProblemData a2_single_point(long m1, long m2);
std::shared_ptr<const ProblemData> shared(ProblemData p);

// Random data. Every generator takes the caller's engine so a failing case can
// be replayed from the seed printed by the test.
long uniform(Rng& rng, long lo, long hi);
Rational random_rational(Rng& rng, long num_bound = 5, long den_bound = 4);
Poly random_poly(Rng& rng, int degree, long num_bound = 5, long den_bound = 3);
Poly random_monic_squarefree(Rng& rng, int degree);

// Symmetrizable GCM: off-diagonal a_ij = -b_j t_ij with t symmetric, so b_i a_ij
// is symmetric by construction. Covers finite, affine and indefinite types.
CartanData random_cartan(Rng& rng, std::size_t max_rank);
// A random element of a fixed list of finite-type matrices of rank <= 3.
CartanData random_finite_cartan(Rng& rng);
// Affine matrices of rank 2 and 3.
CartanData random_affine_cartan(Rng& rng);

std::vector<WeightPairings> random_weights(Rng& rng, std::size_t rank, std::size_t n, long bound);
ProblemData random_problem(Rng& rng, const CartanData& cd, std::size_t max_points, long bound);

// Exact oracles that avoid the library's own elimination code.
std::size_t rank_by_rational_elimination(const IntMatrix& m);
RationalMatrix inverse_by_gauss_jordan(const IntMatrix& m);

// Results of the exact property checks, shared by the unit and acceptance suites.
struct PropertyOutcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0 && cases > 0; }
};

PropertyOutcome property_charge_invariance(std::uint64_t seed, std::size_t cases);
PropertyOutcome property_reflection_involution(std::uint64_t seed, std::size_t cases);
PropertyOutcome property_transform_compatibility(std::uint64_t seed, std::size_t cases);
PropertyOutcome property_norm_identity(std::uint64_t seed, std::size_t cases);
// Random generations from explored nodes and from random fertile tuples;
// each one is checked against W(direction, base) = T_j prod y_i^{-a_ji}.
PropertyOutcome property_wronskian_identity(std::uint64_t seed, std::size_t cases);

// Fertility verdict agreement between the exact Hermite residual and numeric
// residues, over generic rational tuples of rank <= 3 and degrees <= 4.
struct FertilityAgreement {
  std::size_t tuples = 0;
  std::size_t directions = 0;
  std::size_t fertile = 0;
  std::size_t disagreements = 0;
  std::string first_disagreement;
};
FertilityAgreement fertility_agreement(std::uint64_t seed, std::size_t tuples, double tol);

}  // namespace mfpop::testing
