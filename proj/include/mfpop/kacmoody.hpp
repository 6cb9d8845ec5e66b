#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mfpop/rational.hpp"

namespace mfpop {

/// Coroot pairings m_i = <lambda, alpha_i^vee> of an integral weight.
/// Input weights are dominant (m_i >= 0); derived ones such as the weight at
/// infinity may have any sign.
struct WeightPairings {
  IntVector m;

  std::size_t size() const { return m.size(); }
  long operator[](std::size_t i) const { return m[i]; }
  friend bool operator==(const WeightPairings&, const WeightPairings&) = default;
  friend auto operator<=>(const WeightPairings&, const WeightPairings&) = default;
};

/// Nonnegative degree vector of a tuple.
class DegreeVector {
 public:
  DegreeVector() = default;
  explicit DegreeVector(IntVector k);

  static DegreeVector zero(std::size_t rank) { return DegreeVector(IntVector(rank, 0)); }

  const IntVector& values() const { return k_; }
  std::size_t size() const { return k_.size(); }
  long operator[](std::size_t i) const { return k_[i]; }
  long total() const { return total_; }
  bool is_zero() const { return total_ == 0; }

  friend bool operator==(const DegreeVector& a, const DegreeVector& b) { return a.k_ == b.k_; }
  friend auto operator<=>(const DegreeVector& a, const DegreeVector& b) { return a.k_ <=> b.k_; }

 private:
  IntVector k_;
  long total_ = 0;
};

/// A validated symmetrizable generalized Cartan matrix together with its
/// symmetrizer. Immutable after construction.
class CartanData {
 public:
  const IntMatrix& matrix() const { return a_; }
  const IntVector& symmetrizer() const { return b_; }
  std::size_t rank() const { return a_.size(); }
  /// Dimension of ker A, computed exactly.
  std::size_t kernel_dim() const { return kernel_dim_; }
  bool invertible() const { return kernel_dim_ == 0; }
  /// True when the symmetrized form b_i a_ij is positive definite.
  bool finite_type() const { return finite_type_; }

  long a(std::size_t i, std::size_t j) const { return a_[i][j]; }
  long b(std::size_t i) const { return b_[i]; }

  /// Exact inverse of A. Throws SingularCartan when kernel_dim() > 0.
  RationalMatrix inverse() const;

  friend bool operator==(const CartanData&, const CartanData&) = default;

 private:
  friend CartanData validate_cartan(IntMatrix a, IntVector b);
  IntMatrix a_;
  IntVector b_;
  std::size_t kernel_dim_ = 0;
  bool finite_type_ = false;
};

CartanData validate_cartan(IntMatrix a, IntVector b);

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
std::size_t exact_rank(const IntMatrix& m);

/// (alpha_i, alpha_j) = b_i a_ij. Indices are zero-based.
long root_bilinear(const CartanData& cd, std::size_t i, std::size_t j);

/// Shifted simple reflection s_j . lambda on coroot pairings:
/// m'_i = m_i - (m_j + 1) a_ij.
WeightPairings shifted_reflection(const CartanData& cd, std::size_t j, const WeightPairings& m);

bool is_dominant(const WeightPairings& m);

/// Pairings of Lambda_inf = sum Lambda_a - sum k_j alpha_j given tau_i = deg T_i:
/// tau_i - sum_j a_ij k_j. Accepts vectors with negative entries.
WeightPairings infinity_weight(const CartanData& cd, std::span<const long> tau,
                               std::span<const long> k);

/// k with entry j replaced by tau_j + 1 - k_j - sum_{i != j} a_ji k_i.
IntVector degree_transform(const CartanData& cd, std::span<const long> tau,
                           std::span<const long> k, std::size_t j);

/// The quadratic form
///   B(k) = sum_j (a_j,a_j) k_j (k_j - 1 - tau_j) + sum_{i != j} (a_i,a_j) k_i k_j.
Integer charge_form(const CartanData& cd, std::span<const long> tau, std::span<const long> k);

/// Gram matrix (Lambda_a, Lambda_b) = sum_ij m_ai m_bj b_i (A^-1)_ij.
/// Throws SingularCartan when A is not invertible.
RationalMatrix gram_default(const CartanData& cd, std::span<const WeightPairings> weights);

/// Degree vectors reachable from `start` by closing the shifted Weyl action on
/// the weight at infinity. Each reflection s_j moves Lambda_inf by
/// -(m_j + 1) alpha_j, so k_j grows by m_j + 1. Entries are kept within
/// [-bound, bound]; elements outside are dropped and not expanded.
std::set<IntVector> shifted_orbit_degrees(const CartanData& cd, std::span<const long> tau,
                                          std::span<const long> start, long bound);

}  // namespace mfpop
