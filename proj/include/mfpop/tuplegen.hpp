#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mfpop/kacmoody.hpp"
#include "mfpop/poly.hpp"
#include "mfpop/ratfun.hpp"

namespace mfpop {

/// Marked points, dominant weights and the polynomials
/// T_j = prod_a (x - z_a)^{<Lambda_a, alpha_j^vee>} derived from them.
struct ProblemData {
  CartanData cartan;
  std::vector<Rational> z;
  std::vector<WeightPairings> weights;
  std::vector<Poly> T;
  IntVector tau;
  std::optional<RationalMatrix> gram;

  std::size_t rank() const { return cartan.rank(); }
  std::size_t points() const { return z.size(); }
};

/// Throws DuplicatePoints, NonDominantWeight, GramShapeMismatch. When A is
/// invertible and no Gram matrix is given, it is filled by gram_default.
ProblemData build_problem(CartanData cartan, std::vector<Rational> z,
                          std::vector<WeightPairings> weights,
                          std::optional<RationalMatrix> gram = std::nullopt);

WeightPairings infinity_weight(const ProblemData& p, const DegreeVector& k);
IntVector degree_transform(const ProblemData& p, std::span<const long> k, std::size_t j);
Integer charge_form(const ProblemData& p, std::span<const long> k);

/// An r-tuple of polynomials taken up to scalars; stored monic.
class Tuple {
 public:
  /// Normalizes every component to monic. Throws ZeroMember on a zero entry.
  explicit Tuple(std::vector<Poly> components);
  /// (1, ..., 1)
  static Tuple empty(std::size_t rank);

  std::size_t rank() const { return y_.size(); }
  const std::vector<Poly>& components() const { return y_; }
  const Poly& operator[](std::size_t j) const { return y_[j]; }
  const DegreeVector& degrees() const { return k_; }
  Tuple with_component(std::size_t j, const Poly& p) const;

  /// Exact canonical key: components separated by ';', coefficients
  /// ascending and separated by ','.
  std::string key() const;

  friend bool operator==(const Tuple& a, const Tuple& b) { return a.y_ == b.y_; }

 private:
  std::vector<Poly> y_;
  DegreeVector k_;
};

/// Members base + c * direction solve W(direction, .) = T_j prod y_i^{-a_ji}.
struct GenerationFamily {
  std::size_t j = 0;
  Poly base;
  Poly direction;
  Tuple parent;

  Poly member(const Rational& c) const { return base + c * direction; }
  /// The parameter at which the member has the lower of the two possible
  /// degrees, when that degree is below deg(direction).
  std::optional<Rational> degree_drop() const;
};

struct GenericityViolation {
  int condition = 0;  // 1: multiple root, 2: root shared with T_j, 3: interacting pair
  std::vector<std::size_t> indices;
  Poly witness;  // the offending gcd
};

struct GenericityReport {
  bool ok = true;
  std::vector<GenericityViolation> violations;
};

GenericityReport is_generic(const Tuple& t, const ProblemData& p);

/// T_j * prod_{i != j} y_i^{-a_ji}
Poly fertility_numerator(const Tuple& t, const ProblemData& p, std::size_t j);

struct NotFertile {
  Poly residual;
};

using FertilityResult = std::variant<GenerationFamily, NotFertile>;

/// Decides rational integrability of P / y_j^2 by one Hermite step. Throws
/// NotSquarefreeDirection when y_j has a multiple root.
FertilityResult fertility(const Tuple& t, const ProblemData& p, std::size_t j);

bool is_fertile(const Tuple& t, const ProblemData& p);

/// Replaces component j by the monic form of base + c * direction. Throws
/// ZeroMember when the member vanishes.
Tuple generate(const GenerationFamily& f, const Rational& c);

/// R(x) = sum_j (a_j,a_j) y_j''/y_j + sum_{i != j} (a_i,a_j) y_i'y_j'/(y_i y_j)
///        - sum_j (a_j,a_j) T_j'y_j'/(T_j y_j)
RatFun critical_form(const Tuple& t, const ProblemData& p);

struct MuExtraction {
  std::vector<Rational> mu;
  Rational mu_sum;
  bool identity_ok = false;
};

/// mu_a = sum_{b != a} (Lambda_a, Lambda_b)/(z_a - z_b) - res_{z_a} R; the
/// identity holds iff R plus the simple-pole terms vanishes identically.
/// Throws MissingGram and NonGenericTuple.
MuExtraction mu_extract(const Tuple& t, const ProblemData& p);

Integer tuple_charge(const Tuple& t, const ProblemData& p);

}  // namespace mfpop
