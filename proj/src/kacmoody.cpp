#include "mfpop/kacmoody.hpp"

#include <deque>
#include <numeric>
#include <string>

#include "mfpop/error.hpp"

namespace mfpop {

namespace {

void check_index(const CartanData& cd, std::size_t i) {
  if (i >= cd.rank())
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(i + 1) + " outside 1.." + std::to_string(cd.rank()));
}

void check_length(const CartanData& cd, std::size_t n, const char* what) {
  if (n != cd.rank())
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " has length " +
                                              std::to_string(n) + ", rank is " +
                                              std::to_string(cd.rank()));
}

// Sylvester's criterion on the symmetrized matrix, with exact minors.
bool positive_definite(const IntMatrix& sym) {
  const std::size_t n = sym.size();
  for (std::size_t size = 1; size <= n; ++size) {
    RationalMatrix m(size, std::vector<Rational>(size));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) m[i][j] = sym[i][j];
    Rational det = 1;
    for (std::size_t c = 0; c < size; ++c) {
      std::size_t p = c;
      while (p < size && m[p][c] == 0) ++p;
      if (p == size) return false;
      if (p != c) {
        std::swap(m[p], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (std::size_t r = c + 1; r < size; ++r) {
        if (m[r][c] == 0) continue;
        const Rational f = m[r][c] / m[c][c];
        for (std::size_t k = c; k < size; ++k) m[r][k] -= f * m[c][k];
      }
    }
    if (det <= 0) return false;
  }
  return true;
}

}  // namespace

DegreeVector::DegreeVector(IntVector k) : k_(std::move(k)) {
  for (long v : k_)
    if (v < 0) throw Error(ErrorCode::ShapeMismatch, "degree vector entries must be >= 0");
  total_ = std::accumulate(k_.begin(), k_.end(), 0L);
}

std::size_t exact_rank(const IntMatrix& input) {
  std::vector<std::vector<Integer>> m;
  for (const auto& row : input) {
    std::vector<Integer> r;
    for (long v : row) r.emplace_back(v);
    m.push_back(std::move(r));
  }
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  Integer prev_pivot = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        // Bareiss step: the division is exact.
        m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev_pivot;
      }
      m[r][c] = 0;
    }
    prev_pivot = m[rank][c];
    ++rank;
  }
  return rank;
}

CartanData validate_cartan(IntMatrix a, IntVector b) {
  const std::size_t r = a.size();
  for (const auto& row : a)
    if (row.size() != r) throw Error(ErrorCode::ShapeMismatch, "Cartan matrix is not square");
  if (b.size() != r)
    throw Error(ErrorCode::ShapeMismatch, "symmetrizer length differs from rank");
  for (std::size_t i = 0; i < r; ++i) {
    if (a[i][i] != 2)
      throw Error(ErrorCode::NotGCM, "a_" + std::to_string(i + 1) + std::to_string(i + 1) +
                                         " != 2");
    for (std::size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      if (a[i][j] > 0)
        throw Error(ErrorCode::NotGCM, "positive off-diagonal entry at (" +
                                           std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
      if ((a[i][j] == 0) != (a[j][i] == 0))
        throw Error(ErrorCode::NotGCM, "zero pattern is not symmetric at (" +
                                           std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
    }
  }
  for (std::size_t i = 0; i < r; ++i)
    if (b[i] <= 0)
      throw Error(ErrorCode::NonPositiveSymmetrizer, "b_" + std::to_string(i + 1) + " <= 0");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (b[i] * a[i][j] != b[j] * a[j][i])
        throw Error(ErrorCode::NotSymmetrizable,
                    "b_i a_ij != b_j a_ji for (i,j)=(" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ")");

  CartanData cd;
  IntMatrix sym(r, IntVector(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) sym[i][j] = b[i] * a[i][j];
  cd.kernel_dim_ = r - exact_rank(a);
  cd.finite_type_ = positive_definite(sym);
  cd.a_ = std::move(a);
  cd.b_ = std::move(b);
  return cd;
}

RationalMatrix CartanData::inverse() const {
  if (!invertible())
    throw Error(ErrorCode::SingularCartan,
                "kernel dimension " + std::to_string(kernel_dim_) + " > 0");
  const std::size_t n = rank();
  RationalMatrix m(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a_[i][j];
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    const Rational pivot = m[c][c];
    for (auto& v : m[c]) v /= pivot;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  RationalMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

long root_bilinear(const CartanData& cd, std::size_t i, std::size_t j) {
  check_index(cd, i);
  check_index(cd, j);
  return cd.b(i) * cd.a(i, j);
}

WeightPairings shifted_reflection(const CartanData& cd, std::size_t j, const WeightPairings& m) {
  check_index(cd, j);
  check_length(cd, m.size(), "weight");
  WeightPairings out = m;
  const long shift = m[j] + 1;
  for (std::size_t i = 0; i < cd.rank(); ++i) out.m[i] -= shift * cd.a(i, j);
  return out;
}

bool is_dominant(const WeightPairings& m) {
  for (long v : m.m)
    if (v < 0) return false;
  return true;
}

WeightPairings infinity_weight(const CartanData& cd, std::span<const long> tau,
                               std::span<const long> k) {
  check_length(cd, tau.size(), "tau");
  check_length(cd, k.size(), "degree vector");
  WeightPairings out{IntVector(tau.begin(), tau.end())};
  for (std::size_t i = 0; i < cd.rank(); ++i)
    for (std::size_t j = 0; j < cd.rank(); ++j) out.m[i] -= cd.a(i, j) * k[j];
  return out;
}

IntVector degree_transform(const CartanData& cd, std::span<const long> tau,
                           std::span<const long> k, std::size_t j) {
  check_index(cd, j);
  check_length(cd, tau.size(), "tau");
  check_length(cd, k.size(), "degree vector");
  IntVector out(k.begin(), k.end());
  long kt = tau[j] + 1 - k[j];
  for (std::size_t i = 0; i < cd.rank(); ++i)
    if (i != j) kt -= cd.a(j, i) * k[i];
  out[j] = kt;
  return out;
}

Integer charge_form(const CartanData& cd, std::span<const long> tau, std::span<const long> k) {
  check_length(cd, tau.size(), "tau");
  check_length(cd, k.size(), "degree vector");
  Integer total = 0;
  for (std::size_t j = 0; j < cd.rank(); ++j) {
    total += Integer(root_bilinear(cd, j, j)) * k[j] * (Integer(k[j]) - 1 - tau[j]);
    for (std::size_t i = 0; i < cd.rank(); ++i)
      if (i != j) total += Integer(root_bilinear(cd, i, j)) * k[i] * k[j];
  }
  return total;
}

RationalMatrix gram_default(const CartanData& cd, std::span<const WeightPairings> weights) {
  const RationalMatrix inv = cd.inverse();
  const std::size_t n = weights.size();
  for (const auto& w : weights) check_length(cd, w.size(), "weight");
  // Fundamental-weight Gram (omega_i, omega_j) = b_i (A^-1)_ij.
  RationalMatrix fw(cd.rank(), std::vector<Rational>(cd.rank()));
  for (std::size_t i = 0; i < cd.rank(); ++i)
    for (std::size_t j = 0; j < cd.rank(); ++j) fw[i][j] = cd.b(i) * inv[i][j];
  RationalMatrix g(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational s = 0;
      for (std::size_t i = 0; i < cd.rank(); ++i)
        for (std::size_t j = 0; j < cd.rank(); ++j)
          s += fw[i][j] * weights[a][i] * weights[b][j];
      g[a][b] = s;
    }
  return g;
}

std::set<IntVector> shifted_orbit_degrees(const CartanData& cd, std::span<const long> tau,
                                          std::span<const long> start, long bound) {
  check_length(cd, start.size(), "degree vector");
  std::set<IntVector> seen;
  std::deque<std::pair<IntVector, WeightPairings>> queue;
  IntVector k0(start.begin(), start.end());
  queue.emplace_back(k0, infinity_weight(cd, tau, start));
  seen.insert(k0);
  while (!queue.empty()) {
    auto [k, m] = std::move(queue.front());
    queue.pop_front();
    for (std::size_t j = 0; j < cd.rank(); ++j) {
      WeightPairings next = shifted_reflection(cd, j, m);
      IntVector kn = k;
      kn[j] += m[j] + 1;
      bool inside = true;
      for (long v : kn) inside = inside && v >= -bound && v <= bound;
      if (!inside || !seen.insert(kn).second) continue;
      queue.emplace_back(std::move(kn), std::move(next));
    }
  }
  return seen;
}

}  // namespace mfpop
