#include "mfpop/bethe_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mfpop/error.hpp"
#include "mfpop/parallel.hpp"

namespace mfpop {

namespace {

using Groups = std::vector<std::vector<Complex>>;

std::vector<Complex> points_z(const ProblemData& p) {
  std::vector<Complex> z;
  for (const auto& v : p.z) z.emplace_back(v.get_d(), 0.0);
  return z;
}

Complex eval(const CPoly& c, Complex x) {
  Complex acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

CPoly deriv(const CPoly& c) {
  if (c.size() <= 1) return {};
  CPoly d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

CPoly mul(const CPoly& a, const CPoly& b) {
  if (a.empty() || b.empty()) return {};
  CPoly out(a.size() + b.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

CPoly from_roots(const std::vector<Complex>& roots) {
  CPoly out{Complex(1)};
  for (const auto& r : roots) out = mul(out, CPoly{-r, Complex(1)});
  return out;
}

CPoly to_cpoly(const Poly& p) {
  CPoly out;
  for (const auto& c : p.coeffs()) out.emplace_back(c.get_d(), 0.0);
  return out;
}

double norm_inf(const CPoly& c) {
  double m = 0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

// Ordering used for canonical group order; real parts are compared on a
// 1e-8 grid so rounding noise on equal real parts does not flip the order.
bool canonical_less(Complex a, Complex b) {
  const double ra = std::round(a.real() * 1e8);
  const double rb = std::round(b.real() * 1e8);
  if (ra != rb) return ra < rb;
  return a.imag() < b.imag();
}

void canonicalize(Groups& g) {
  for (auto& grp : g) std::sort(grp.begin(), grp.end(), canonical_less);
}

// Critical-point equations and their Jacobian for the flattened unknowns.
template <class R>
class BetheSystem {
 public:
  using C = std::complex<R>;
  using Vec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

  BetheSystem(const ProblemData& p, const DegreeVector& k) : p_(p) {
    for (const auto& v : p.z) z_.emplace_back(static_cast<R>(v.get_d()), R(0));
    for (std::size_t j = 0; j < k.size(); ++j)
      for (long i = 0; i < k[j]; ++i) color_.push_back(j);
  }

  std::size_t size() const { return color_.size(); }

  double residual(const Vec& u) const {
    Vec f = values(u);
    return f.size() ? static_cast<double>(f.cwiseAbs().maxCoeff()) : 0.0;
  }

  Vec values(const Vec& u) const {
    const std::size_t n = size();
    Vec f(static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < n; ++s) f[idx(s)] = row_value(u, s);
    return f;
  }

  Mat jacobian(const Vec& u) const {
    const std::size_t n = size();
    const auto& cd = p_.cartan;
    Mat jac = Mat::Zero(idx(n), idx(n));
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t j = color_[s];
      const R bj = static_cast<R>(cd.b(j));
      C diag(0);
      for (std::size_t t = 0; t < n; ++t) {
        if (t == s) continue;
        const std::size_t jt = color_[t];
        const R coef = jt == j ? 2 * bj : bj * static_cast<R>(cd.a(j, jt));
        if (coef == 0) continue;
        const C d = u[idx(s)] - u[idx(t)];
        const C g = coef / (d * d);
        jac(idx(s), idx(t)) = g;
        diag -= g;
      }
      for (std::size_t a = 0; a < z_.size(); ++a) {
        const R m = static_cast<R>(p_.weights[a][j]);
        if (m == 0) continue;
        const C d = u[idx(s)] - z_[a];
        diag += bj * m / (d * d);
      }
      jac(idx(s), idx(s)) = diag;
    }
    return jac;
  }

 private:
  static Eigen::Index idx(std::size_t s) { return static_cast<Eigen::Index>(s); }

  C row_value(const Vec& u, std::size_t s) const {
    const auto& cd = p_.cartan;
    const std::size_t j = color_[s];
    const R bj = static_cast<R>(cd.b(j));
    C v(0);
    for (std::size_t t = 0; t < size(); ++t) {
      if (t == s) continue;
      const std::size_t jt = color_[t];
      const R coef = jt == j ? 2 * bj : bj * static_cast<R>(cd.a(j, jt));
      if (coef != 0) v += coef / (u[idx(s)] - u[idx(t)]);
    }
    for (std::size_t a = 0; a < z_.size(); ++a) {
      const R m = static_cast<R>(p_.weights[a][j]);
      if (m != 0) v -= bj * m / (u[idx(s)] - z_[a]);
    }
    return v;
  }

  const ProblemData& p_;
  std::vector<C> z_;
  std::vector<std::size_t> color_;
};

struct NewtonOutcome {
  Eigen::VectorXcd u;
  double residual = 0;
  bool converged = false;
};

// Newton runs on G_s = (u_s - center) F_s. The lhs F decays like 1/u, so a
// norm-decreasing line search on F alone drifts toward infinity; G keeps the
// same generic zeros without that sink.
struct Scaled {
  Eigen::VectorXcd g;
  double norm;
};

Scaled scaled_values(const BetheSystem<double>& sys, const Eigen::VectorXcd& u, Complex center) {
  Eigen::VectorXcd f = sys.values(u);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] *= (u[i] - center);
  const double n = f.norm();
  return {std::move(f), n};
}

NewtonOutcome newton(const BetheSystem<double>& sys, Eigen::VectorXcd u, const SolveOptions& opts,
                     double scale, Complex center) {
  NewtonOutcome out;
  Scaled cur = scaled_values(sys, u, center);
  std::size_t polish = 0;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    if (!std::isfinite(cur.norm)) break;
    const Eigen::VectorXcd f = sys.values(u);
    const bool small = f.cwiseAbs().maxCoeff() < opts.tol && cur.g.cwiseAbs().maxCoeff() < opts.tol;
    if (small && ++polish > 8) break;
    Eigen::MatrixXcd jac = sys.jacobian(u);
    for (Eigen::Index i = 0; i < jac.rows(); ++i) {
      jac.row(i) *= (u[i] - center);
      jac(i, i) += f[i];
    }
    const Eigen::VectorXcd step = jac.completeOrthogonalDecomposition().solve(-cur.g);
    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= 30; ++halving, lambda *= 0.5) {
      Eigen::VectorXcd trial = u + lambda * step;
      Scaled next = scaled_values(sys, trial, center);
      if (std::isfinite(next.norm) && next.norm < cur.norm) {
        u = std::move(trial);
        cur = std::move(next);
        improved = true;
        break;
      }
    }
    if (!improved) break;
    if (u.cwiseAbs().maxCoeff() > 1e8 * scale) break;
  }
  const Eigen::VectorXcd f = sys.values(u);
  out.residual = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  // F alone decays like 1/u, so a small F far out proves little; the scaled
  // residual must pass as well.
  const double gmax = cur.g.size() ? cur.g.cwiseAbs().maxCoeff() : 0.0;
  out.converged = std::isfinite(out.residual) && out.residual < opts.tol && gmax < opts.tol;
  out.u = std::move(u);
  return out;
}

// A few Newton steps in extended precision on the scaled equations. Points with
// roots far from the marked points are ill-conditioned and double precision
// alone leaves too few correct digits for the downstream fits.
Eigen::VectorXcd polish(const BetheSystem<long double>& sys, const Eigen::VectorXcd& u0,
                        Complex center) {
  using C = std::complex<long double>;
  using Vec = BetheSystem<long double>::Vec;
  const C cc(center.real(), center.imag());
  auto scaled = [&](const Vec& v) {
    Vec f = sys.values(v);
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] *= (v[i] - cc);
    return f;
  };
  Vec u = u0.cast<C>();
  Vec g = scaled(u);
  for (int it = 0; it < 6; ++it) {
    const Vec f = sys.values(u);
    auto jac = sys.jacobian(u);
    for (Eigen::Index i = 0; i < jac.rows(); ++i) {
      jac.row(i) *= (u[i] - cc);
      jac(i, i) += f[i];
    }
    // Solution sets may be positive dimensional, so the numerical rank of the
    // Jacobian is not known in advance; try several truncation levels.
    // The threshold has to be set before compute(): the Z factor is only
    // built for the rank found there.
    Vec best_u = u;
    long double best = g.norm();
    for (long double thr : {1e-15L, 1e-13L, 1e-11L, 1e-9L, 1e-7L}) {
      Eigen::CompleteOrthogonalDecomposition<BetheSystem<long double>::Mat> cod(jac.rows(),
                                                                             jac.cols());
      cod.setThreshold(thr);
      cod.compute(jac);
      const Vec step = cod.solve(g);
      long double lambda = 1;
      for (int halving = 0; halving <= 30; ++halving, lambda /= 2) {
        const Vec trial = u - lambda * step;
        const long double n = scaled(trial).norm();
        if (n < best) {
          best = n;
          best_u = trial;
          break;
        }
      }
    }
    if (!(best < g.norm())) break;
    u = best_u;
    g = scaled(u);
  }
  return u.cast<Complex>();
}

bool generic_point(const ProblemData& p, const Groups& g, double window) {
  const auto z = points_z(p);
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (std::size_t i = 0; i < g[j].size(); ++i) {
      for (std::size_t i2 = i + 1; i2 < g[j].size(); ++i2)
        if (std::abs(g[j][i] - g[j][i2]) < window) return false;
      for (std::size_t a = 0; a < z.size(); ++a)
        if (p.weights[a][j] > 0 && std::abs(g[j][i] - z[a]) < window) return false;
      for (std::size_t j2 = j + 1; j2 < g.size(); ++j2) {
        if (p.cartan.a(j, j2) == 0) continue;
        for (const auto& v : g[j2])
          if (std::abs(g[j][i] - v) < window) return false;
      }
    }
  }
  return true;
}

double tuple_distance(const NumericTuple& a, const NumericTuple& b) {
  double d = 0;
  for (std::size_t j = 0; j < a.rank(); ++j) {
    const double scale = std::max(1.0, norm_inf(a.y[j]));
    for (std::size_t i = 0; i < a.y[j].size(); ++i)
      d = std::max(d, std::abs(a.y[j][i] - b.y[j][i]) / scale);
  }
  return d;
}

bool groups_less(const Groups& a, const Groups& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < a[j].size(); ++i) {
      if (canonical_less(a[j][i], b[j][i])) return true;
      if (canonical_less(b[j][i], a[j][i])) return false;
    }
  return false;
}

}  // namespace

double bethe_residual(const ProblemData& p, const Groups& groups) {
  const auto& cd = p.cartan;
  const auto z = points_z(p);
  double worst = 0;
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const double ajj = static_cast<double>(root_bilinear(cd, j, j));
    for (std::size_t i = 0; i < groups[j].size(); ++i) {
      const Complex u = groups[j][i];
      Complex lhs = 0;
      for (std::size_t i2 = 0; i2 < groups[j].size(); ++i2)
        if (i2 != i) lhs += ajj / (u - groups[j][i2]);
      for (std::size_t j2 = 0; j2 < groups.size(); ++j2) {
        if (j2 == j) continue;
        const double ajk = static_cast<double>(root_bilinear(cd, j, j2));
        for (const auto& v : groups[j2]) lhs += ajk / (u - v);
      }
      for (std::size_t a = 0; a < z.size(); ++a) {
        // (alpha_j, Lambda_a) = b_j <Lambda_a, alpha_j^vee>
        const double c = static_cast<double>(cd.b(j) * p.weights[a][j]);
        lhs -= c / (u - z[a]);
      }
      worst = std::max(worst, std::abs(lhs));
    }
  }
  return worst;
}

BethePoint make_bethe_point(const ProblemData& p, Groups groups) {
  canonicalize(groups);
  IntVector k;
  for (const auto& g : groups) k.push_back(static_cast<long>(g.size()));
  BethePoint pt{std::move(groups), 0.0, DegreeVector(std::move(k))};
  pt.residual = bethe_residual(p, pt.u);
  return pt;
}

SolveResult solve_bethe(const ProblemData& p, const DegreeVector& k, const SolveOptions& opts) {
  SolveResult result;
  BetheSystem<double> sys(p, k);
  BetheSystem<long double> fine(p, k);
  const std::size_t n = sys.size();
  if (n == 0) {
    result.stats.starts = 1;
    result.stats.converged = 1;
    result.points.push_back(make_bethe_point(p, Groups(k.size())));
    return result;
  }
  double scale = 1.0;
  Complex center = 0;
  for (const auto& z : p.z) {
    scale = std::max(scale, std::abs(z.get_d()));
    center += z.get_d();
  }
  if (!p.z.empty()) center /= static_cast<double>(p.z.size());
  // Keep the scaling center off the marked points and the real axis.
  center += Complex(0.0, 0.5 * scale);
  scale *= 1.5;

  struct Attempt {
    bool converged = false;
    std::optional<BethePoint> point;
  };
  std::vector<Attempt> attempts(opts.starts);
  parallel_for(
      opts.starts,
      [&](std::size_t s) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                          static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(s)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> dist(-scale, scale);
        Eigen::VectorXcd u(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = Complex(dist(rng), dist(rng));
        NewtonOutcome res = newton(sys, std::move(u), opts, scale, center);
        if (!res.converged) return;
        attempts[s].converged = true;
        res.u = polish(fine, res.u, center);
        Groups g(k.size());
        Eigen::Index pos = 0;
        for (std::size_t j = 0; j < k.size(); ++j)
          for (long i = 0; i < k[j]; ++i) g[j].push_back(res.u[pos++]);
        if (!generic_point(p, g, opts.genericity_window)) return;
        BethePoint pt = make_bethe_point(p, std::move(g));
        // Independent recheck of the residual.
        if (pt.residual < opts.tol) attempts[s].point = std::move(pt);
      },
      opts.threads);

  result.stats.starts = opts.starts;
  std::vector<BethePoint> found;
  for (auto& a : attempts) {
    if (!a.converged) {
      ++result.stats.failed;
      continue;
    }
    ++result.stats.converged;
    if (!a.point) {
      ++result.stats.non_generic;
      continue;
    }
    found.push_back(std::move(*a.point));
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const BethePoint& a, const BethePoint& b) { return groups_less(a.u, b.u); });
  std::vector<NumericTuple> kept_tuples;
  for (auto& pt : found) {
    NumericTuple nt = to_numeric_tuple(pt);
    bool dup = false;
    for (const auto& other : kept_tuples)
      if (tuple_distance(nt, other) < 10 * opts.tol) {
        dup = true;
        break;
      }
    if (dup) {
      ++result.stats.duplicates;
      continue;
    }
    kept_tuples.push_back(std::move(nt));
    result.points.push_back(std::move(pt));
  }
  return result;
}

IntVector NumericTuple::degrees() const {
  IntVector k;
  for (const auto& c : y) k.push_back(static_cast<long>(c.size()) - 1);
  return k;
}

NumericTuple to_numeric_tuple(const BethePoint& pt) {
  NumericTuple t;
  for (const auto& g : pt.u) {
    t.y.push_back(from_roots(g));
    t.roots.emplace_back(g);
  }
  return t;
}

NumericTuple to_numeric_tuple(const Tuple& tuple) {
  NumericTuple t;
  for (const auto& c : tuple.components()) {
    t.y.push_back(to_cpoly(c));
    t.roots.emplace_back(std::nullopt);
  }
  return t;
}

std::vector<Complex> numeric_roots(const NumericTuple& t, std::size_t j) {
  if (t.roots.at(j)) return *t.roots[j];
  const CPoly& c = t.y.at(j);
  const Eigen::Index deg = static_cast<Eigen::Index>(c.size()) - 1;
  if (deg <= 0) return {};
  const Complex lc = c.back();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / lc;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  const CPoly d = deriv(c);
  for (auto& r : roots)
    for (int it = 0; it < 5; ++it) {
      const Complex dv = eval(d, r);
      if (std::abs(dv) == 0) break;
      r -= eval(c, r) / dv;
    }
  std::sort(roots.begin(), roots.end(), canonical_less);
  return roots;
}

namespace {

// Critical form R(x) evaluated at a point, with T_j'/T_j taken from the
// marked points directly.
Complex critical_form_at(const NumericTuple& t, const ProblemData& p, Complex x) {
  const auto& cd = p.cartan;
  const auto z = points_z(p);
  const std::size_t r = t.rank();
  std::vector<Complex> ld(r), ldd(r);
  for (std::size_t j = 0; j < r; ++j) {
    const Complex y = eval(t.y[j], x);
    const CPoly d1 = deriv(t.y[j]);
    ld[j] = eval(d1, x) / y;
    ldd[j] = eval(deriv(d1), x) / y;
  }
  Complex sum = 0;
  for (std::size_t j = 0; j < r; ++j) {
    const double ajj = static_cast<double>(root_bilinear(cd, j, j));
    Complex tlog = 0;
    for (std::size_t a = 0; a < z.size(); ++a)
      tlog += static_cast<double>(p.weights[a][j]) / (x - z[a]);
    sum += ajj * ldd[j] - ajj * tlog * ld[j];
    for (std::size_t i = 0; i < r; ++i)
      if (i != j) sum += static_cast<double>(root_bilinear(cd, i, j)) * ld[i] * ld[j];
  }
  return sum;
}

std::vector<Complex> all_poles(const NumericTuple& t, const ProblemData& p) {
  std::vector<Complex> poles = points_z(p);
  for (std::size_t j = 0; j < t.rank(); ++j)
    for (const auto& r : numeric_roots(t, j)) poles.push_back(r);
  return poles;
}

std::vector<Complex> pair_sums(const ProblemData& p) {
  const auto& g = *p.gram;
  std::vector<Complex> s(p.points(), Complex(0));
  for (std::size_t a = 0; a < p.points(); ++a)
    for (std::size_t b = 0; b < p.points(); ++b)
      if (b != a) s[a] += Rational(g[a][b] / (p.z[a] - p.z[b])).get_d();
  return s;
}

constexpr int kCirclePoints = 64;

}  // namespace

double numeric_nb_residual(const NumericTuple& t, const ProblemData& p,
                           const std::vector<Complex>& mu) {
  if (!p.gram) throw Error(ErrorCode::MissingGram, "mu identity needs (Lambda_a, Lambda_b)");
  const auto z = points_z(p);
  const auto s = pair_sums(p);
  double radius = 1.0;
  for (const auto& pole : all_poles(t, p)) radius = std::max(radius, std::abs(pole) + 1.0);
  double worst = 0;
  for (int k = 0; k < kCirclePoints; ++k) {
    const Complex x = std::polar(radius, 2 * std::numbers::pi * (k + 0.5) / kCirclePoints);
    Complex v = critical_form_at(t, p, x);
    for (std::size_t a = 0; a < z.size(); ++a) v += (mu.at(a) - s[a]) / (x - z[a]);
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

std::vector<Complex> numeric_mu(const NumericTuple& t, const ProblemData& p) {
  if (!p.gram) throw Error(ErrorCode::MissingGram, "mu extraction needs (Lambda_a, Lambda_b)");
  const auto z = points_z(p);
  const auto s = pair_sums(p);
  const auto poles = all_poles(t, p);
  std::vector<Complex> mu;
  for (std::size_t a = 0; a < z.size(); ++a) {
    double gap = 1.0;
    for (const auto& q : poles)
      if (std::abs(q - z[a]) > 0) gap = std::min(gap, std::abs(q - z[a]));
    const double eps = 0.3 * gap;
    Complex res = 0;
    for (int k = 0; k < kCirclePoints; ++k) {
      const Complex w = std::polar(eps, 2 * std::numbers::pi * k / kCirclePoints);
      res += critical_form_at(t, p, z[a] + w) * w;
    }
    res /= static_cast<double>(kCirclePoints);
    mu.push_back(s[a] - res);
  }
  return mu;
}

Complex numeric_charge(const NumericTuple& t, const ProblemData& p) {
  double radius = 1.0;
  for (const auto& pole : all_poles(t, p)) radius = std::max(radius, 4.0 * std::abs(pole));
  Complex acc = 0;
  for (int k = 0; k < kCirclePoints; ++k) {
    const Complex x = std::polar(radius, 2 * std::numbers::pi * k / kCirclePoints);
    acc += critical_form_at(t, p, x) * x * x;
  }
  return acc / static_cast<double>(kCirclePoints);
}

bool numeric_fertility(const NumericTuple& t, const ProblemData& p, std::size_t j, double tol) {
  const auto roots = numeric_roots(t, j);
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = a + 1; b < roots.size(); ++b)
      if (std::abs(roots[a] - roots[b]) <= tol)
        throw Error(ErrorCode::ClusteredRoots, "direction " + std::to_string(j + 1));
  CPoly num = to_cpoly(p.T.at(j));
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i == j) continue;
    for (long e = 0; e < -p.cartan.a(j, i); ++e) num = mul(num, t.y[i]);
  }
  const CPoly dnum = deriv(num);
  const CPoly dy = deriv(t.y[j]);
  const CPoly ddy = deriv(dy);
  for (const auto& u : roots) {
    // Residue of P / y^2 at a simple root u of y.
    const Complex y1 = eval(dy, u);
    const Complex res = (eval(dnum, u) * y1 - eval(num, u) * eval(ddy, u)) / (y1 * y1 * y1);
    if (std::abs(res) >= tol) return false;
  }
  return true;
}

double master_function_real(const ProblemData& p, const Groups& groups) {
  if (!p.gram) throw Error(ErrorCode::MissingGram, "master function needs (Lambda_a, Lambda_b)");
  const auto& cd = p.cartan;
  const auto z = points_z(p);
  double v = 0;
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      v += (*p.gram)[a][b].get_d() * std::log(std::abs(z[a] - z[b]));
  for (std::size_t j = 0; j < groups.size(); ++j)
    for (std::size_t i = 0; i < groups[j].size(); ++i) {
      const Complex u = groups[j][i];
      for (std::size_t a = 0; a < z.size(); ++a)
        v -= static_cast<double>(cd.b(j) * p.weights[a][j]) * std::log(std::abs(u - z[a]));
      for (std::size_t i2 = i + 1; i2 < groups[j].size(); ++i2)
        v += static_cast<double>(root_bilinear(cd, j, j)) *
             std::log(std::abs(u - groups[j][i2]));
      for (std::size_t j2 = j + 1; j2 < groups.size(); ++j2)
        for (const auto& w : groups[j2])
          v += static_cast<double>(root_bilinear(cd, j, j2)) * std::log(std::abs(u - w));
    }
  return v;
}

namespace {

double relative_distance(const CPoly& a, const CPoly& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0;
  const double scale = std::max(1.0, norm_inf(a));
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / scale);
  return d;
}

Eigen::VectorXcd as_vector(const CPoly& c, std::size_t len) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(len));
  for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<Eigen::Index>(i)] = c[i];
  return v;
}

struct Fit {
  Complex alpha, beta;
  double residual;
};

// Least squares target ~ alpha * base + beta * direction.
Fit fit_pencil(const CPoly& target, const CPoly& base, const CPoly& direction) {
  const std::size_t len = std::max({target.size(), base.size(), direction.size()});
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(len), 2);
  m.col(0) = as_vector(base, len);
  m.col(1) = as_vector(direction, len);
  const Eigen::VectorXcd rhs = as_vector(target, len);
  const Eigen::VectorXcd sol = m.completeOrthogonalDecomposition().solve(rhs);
  const double res = (m * sol - rhs).norm() / std::max(1.0, rhs.norm());
  return {sol[0], sol[1], res};
}

struct Descent {
  NumericTuple tuple;
  double residual;
};

// Coefficients of c(s x) / s^shift.
CPoly rescale(const CPoly& c, double s, long shift) {
  CPoly out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    out[i] = c[i] * std::pow(s, static_cast<double>(static_cast<long>(i) - shift));
  return out;
}

double root_scale(const NumericTuple& t, const ProblemData& p) {
  double s = 1.0;
  for (std::size_t j = 0; j < t.rank(); ++j)
    for (const auto& r : numeric_roots(t, j)) s = std::max(s, std::abs(r));
  for (const auto& z : p.z) s = std::max(s, std::abs(z.get_d()));
  return s;
}

// Lower-degree member of t's family in direction j: the polynomial u of degree
// kt with W(y_j, u) = T_j prod y_i^{-a_ji}, by least squares. Solved in the
// variable x/s so that far-out roots do not swamp the monomial basis.
std::optional<Descent> descend(const NumericTuple& t, const ProblemData& p, std::size_t j,
                               long kt) {
  CPoly num = to_cpoly(p.T[j]);
  for (std::size_t i = 0; i < t.rank(); ++i) {
    if (i == j) continue;
    for (long e = 0; e < -p.cartan.a(j, i); ++e) num = mul(num, t.y[i]);
  }
  const double s = root_scale(t, p);
  const long ky = static_cast<long>(t.y[j].size()) - 1;
  // W_xi(y(s xi)/s^ky, u(s xi)/s^kt) = s^(1-ky-kt) W_x(y, u)(s xi)
  const CPoly y = rescale(t.y[j], s, ky);
  num = rescale(num, s, ky + kt - 1);
  const CPoly dy = deriv(y);
  const std::size_t cols = static_cast<std::size_t>(kt) + 1;
  const std::size_t rows = std::max(num.size(), y.size() + cols);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                               static_cast<Eigen::Index>(cols));
  for (std::size_t c = 0; c < cols; ++c) {
    // W(y, x^c) = c y x^(c-1) - y' x^c
    for (std::size_t i = 0; i < y.size(); ++i)
      if (c > 0) m(static_cast<Eigen::Index>(i + c - 1), static_cast<Eigen::Index>(c)) +=
          static_cast<double>(c) * y[i];
    for (std::size_t i = 0; i < dy.size(); ++i)
      m(static_cast<Eigen::Index>(i + c), static_cast<Eigen::Index>(c)) -= dy[i];
  }
  const Eigen::VectorXcd rhs = as_vector(num, rows);
  const Eigen::VectorXcd sol = m.completeOrthogonalDecomposition().solve(rhs);
  const double res = (m * sol - rhs).norm() / std::max(1e-300, rhs.norm());
  const Complex lc = sol[static_cast<Eigen::Index>(cols - 1)];
  if (std::abs(lc) == 0) return std::nullopt;
  CPoly u(cols);
  for (std::size_t i = 0; i < cols; ++i) u[i] = sol[static_cast<Eigen::Index>(i)] / lc;
  NumericTuple out = t;
  out.y[j] = rescale(u, 1.0 / s, 0);
  out.roots[j] = std::nullopt;
  return Descent{std::move(out), res};
}

MatchResult match_direct(const PopulationGraph& g, const NumericTuple& t, double tol) {
  const IntVector k = t.degrees();
  MatchResult best;
  best.fit_residual = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < g.nodes().size(); ++id) {
    const Tuple& node = g.nodes()[id].tuple;
    if (node.degrees().values() != k) continue;
    const NumericTuple nt = to_numeric_tuple(node);
    double d = 0;
    for (std::size_t j = 0; j < t.rank(); ++j) d = std::max(d, relative_distance(nt.y[j], t.y[j]));
    if (d < tol && d < best.fit_residual) {
      best = MatchResult{true, "node", id, std::nullopt, std::nullopt, d, 0};
    }
  }
  if (best.matched) return best;
  for (const auto& [key, fam] : g.families()) {
    const auto [id, j] = key;
    const Tuple& parent = fam.parent;
    bool same = true;
    for (std::size_t i = 0; i < t.rank() && same; ++i) {
      if (i == j) continue;
      same = parent[i].degree() == k[i] &&
             relative_distance(to_cpoly(parent[i]), t.y[i]) < tol;
    }
    if (!same) continue;
    if (k[j] != fam.base.degree() && k[j] != fam.direction.degree()) continue;
    const Fit fit = fit_pencil(t.y[j], to_cpoly(fam.base), to_cpoly(fam.direction));
    if (fit.residual < tol && std::abs(fit.alpha) > tol && fit.residual < best.fit_residual)
      best = MatchResult{true, "family", id, j, fit.beta / fit.alpha, fit.residual, 0};
  }
  if (!best.matched) best.fit_residual = 0;
  return best;
}

MatchResult match_rec(const PopulationGraph& g, const NumericTuple& t, double tol,
                      std::size_t budget) {
  MatchResult m = match_direct(g, t, tol);
  if (m.matched || budget == 0) return m;
  const ProblemData& p = g.problem();
  const IntVector k = t.degrees();
  for (std::size_t j = 0; j < t.rank(); ++j) {
    const long kt = degree_transform(p, k, j)[j];
    if (kt < 0 || kt >= k[j]) continue;
    auto down = descend(t, p, j, kt);
    if (!down || down->residual >= tol) continue;
    MatchResult sub = match_rec(g, down->tuple, tol, budget - 1);
    if (!sub.matched) continue;
    sub.via = "descent";
    sub.j = j;
    sub.c = std::nullopt;
    sub.fit_residual = std::max(sub.fit_residual, down->residual);
    ++sub.descent_steps;
    return sub;
  }
  return m;
}

}  // namespace

MatchResult match_population(const PopulationGraph& g, const NumericTuple& t, double tol) {
  long total = 0;
  for (long v : t.degrees()) total += v;
  return match_rec(g, t, tol, static_cast<std::size_t>(total));
}

}  // namespace mfpop
