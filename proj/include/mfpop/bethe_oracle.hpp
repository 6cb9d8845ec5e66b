#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfpop/population.hpp"
#include "mfpop/tuplegen.hpp"

namespace mfpop {

using Complex = std::complex<double>;
using CPoly = std::vector<Complex>;  // ascending coefficients

/// A numeric critical point: coordinates grouped by color j, each group in
/// canonical order (real part, then imaginary part).
struct BethePoint {
  std::vector<std::vector<Complex>> u;
  double residual = 0.0;
  DegreeVector k;
};

/// Canonicalizes the groups and recomputes the residual.
BethePoint make_bethe_point(const ProblemData& p, std::vector<std::vector<Complex>> groups);

/// max |lhs| of the critical-point equations, evaluated term by term.
double bethe_residual(const ProblemData& p, const std::vector<std::vector<Complex>>& groups);

struct SolveOptions {
  std::size_t starts = 200;
  std::size_t max_iter = 100;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  double genericity_window = 1e-6;
  unsigned threads = 0;
};

struct SolveStats {
  std::size_t starts = 0;
  std::size_t converged = 0;
  std::size_t failed = 0;       // diverged or stalled
  std::size_t non_generic = 0;  // converged but inside the exclusion window
  std::size_t duplicates = 0;
};

struct SolveResult {
  std::vector<BethePoint> points;
  SolveStats stats;
};

/// Damped Newton from seeded random complex starts; deduplicated modulo the
/// permutation action inside each group.
SolveResult solve_bethe(const ProblemData& p, const DegreeVector& k, const SolveOptions& opts);

/// Monic polynomials with floating coefficients.
struct NumericTuple {
  std::vector<CPoly> y;
  std::vector<std::optional<std::vector<Complex>>> roots;  // known roots, if any

  std::size_t rank() const { return y.size(); }
  IntVector degrees() const;
};

NumericTuple to_numeric_tuple(const BethePoint& pt);
NumericTuple to_numeric_tuple(const Tuple& t);

/// Roots of y_j: stored ones when present, otherwise companion-matrix
/// eigenvalues refined by Newton.
std::vector<Complex> numeric_roots(const NumericTuple& t, std::size_t j);

/// Max modulus of the mu-identity left-hand side over 64 points on a circle
/// enclosing every pole. Throws MissingGram.
double numeric_nb_residual(const NumericTuple& t, const ProblemData& p,
                           const std::vector<Complex>& mu);

/// mu_a from contour-integral residues of the critical form at z_a.
std::vector<Complex> numeric_mu(const NumericTuple& t, const ProblemData& p);

/// x^-2 coefficient of the critical form at infinity (the charge), by a
/// trapezoidal contour integral on a large circle.
Complex numeric_charge(const NumericTuple& t, const ProblemData& p);

/// All residues of P / y_j^2 at the roots of y_j are below tol in modulus.
/// Throws ClusteredRoots when two roots are within tol.
bool numeric_fertility(const NumericTuple& t, const ProblemData& p, std::size_t j, double tol);

/// Real part of the master function at a point (diagnostic only; the
/// imaginary part depends on branches). Throws MissingGram.
double master_function_real(const ProblemData& p, const std::vector<std::vector<Complex>>& groups);

struct MatchResult {
  bool matched = false;
  std::string via;  // "node", "family", "descent"
  std::optional<std::size_t> node;
  std::optional<std::size_t> j;
  std::optional<Complex> c;
  double fit_residual = 0.0;
  std::size_t descent_steps = 0;
};

/// Looks for t in the explored sample: equal to a node, on a stored generation
/// family (least-squares fit of component j to base + c * direction), or, for
/// a non-minimal t, after descending to the lower-degree member of one of its
/// own families and matching that.
MatchResult match_population(const PopulationGraph& g, const NumericTuple& t, double tol);

}  // namespace mfpop
