#include "mfpop/population.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mfpop/error.hpp"
#include "mfpop/parallel.hpp"

namespace mfpop {

PopulationGraph::PopulationGraph(std::shared_ptr<const ProblemData> problem, Tuple root)
    : problem_(std::move(problem)) {
  charge_ = tuple_charge(root, *problem_);
  const bool generic = is_generic(root, *problem_).ok;
  add_node(std::move(root), generic, 0);
}

std::optional<std::size_t> PopulationGraph::find(const Tuple& t) const {
  auto it = index_.find(t.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, bool> PopulationGraph::add_node(Tuple t, bool generic, std::size_t depth) {
  auto [it, inserted] = index_.emplace(t.key(), nodes_.size());
  if (inserted) nodes_.push_back({std::move(t), generic, depth});
  return {it->second, inserted};
}

void PopulationGraph::add_edge(std::size_t from, std::size_t to, std::size_t j, Rational c) {
  edges_.push_back({from, to, j, std::move(c)});
}

void PopulationGraph::add_family(std::size_t node, GenerationFamily f) {
  const std::size_t j = f.j;
  families_.insert_or_assign({node, j}, std::move(f));
}

std::vector<std::size_t> PopulationGraph::canonical_order() const {
  std::vector<std::size_t> ids;
  ids.reserve(index_.size());
  for (const auto& [key, id] : index_) ids.push_back(id);
  return ids;
}

namespace {

struct Candidate {
  std::size_t j;
  Rational c;
  Tuple tuple;
  bool generic;
};

struct Expansion {
  std::vector<GenerationFamily> families;
  std::vector<Candidate> members;
};

Expansion expand_node(const Tuple& t, const ProblemData& p, const ExploreLimits& lim) {
  Expansion out;
  for (std::size_t j = 0; j < t.rank(); ++j) {
    FertilityResult fr = fertility(t, p, j);
    // Generic members of a population are fertile; a failure here is a bug.
    auto* fam = std::get_if<GenerationFamily>(&fr);
    if (!fam) throw std::logic_error("population member is not fertile in direction " +
                                     std::to_string(j + 1) + ": " + t.key());
    std::vector<Rational> cs = lim.c_samples;
    if (auto drop = fam->degree_drop();
        drop && std::find(cs.begin(), cs.end(), *drop) == cs.end())
      cs.push_back(*drop);
    for (const Rational& c : cs) {
      const Poly m = fam->member(c);
      if (m.is_zero() || m.degree() > lim.max_component_degree) continue;
      Tuple child = generate(*fam, c);
      const bool generic = is_generic(child, p).ok;
      out.members.push_back({j, c, std::move(child), generic});
    }
    out.families.push_back(std::move(*fam));
  }
  return out;
}

}  // namespace

PopulationGraph explore(std::shared_ptr<const ProblemData> problem, const Tuple& start,
                        const ExploreLimits& limits) {
  const ProblemData& p = *problem;
  if (start.rank() != p.rank())
    throw Error(ErrorCode::ShapeMismatch, "start tuple rank differs from problem rank");
  if (limits.c_samples.empty())
    throw Error(ErrorCode::ShapeMismatch, "c_samples must be nonempty");
  for (std::size_t j = 0; j < start.rank(); ++j) {
    bool ok = false;
    try {
      ok = std::holds_alternative<GenerationFamily>(fertility(start, p, j));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotSquarefreeDirection) throw;
    }
    if (!ok)
      throw Error(ErrorCode::StartNotFertile, "direction " + std::to_string(j + 1));
  }

  PopulationGraph g(std::move(problem), start);
  std::vector<std::size_t> frontier;
  if (g.root().generic) frontier.push_back(0);
  for (std::size_t depth = 0; depth < limits.max_depth && !frontier.empty(); ++depth) {
    std::vector<Expansion> results(frontier.size());
    parallel_for(
        frontier.size(),
        [&](std::size_t i) { results[i] = expand_node(g.nodes()[frontier[i]].tuple, p, limits); },
        limits.threads);
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::size_t from = frontier[i];
      for (auto& fam : results[i].families) g.add_family(from, std::move(fam));
      for (auto& cand : results[i].members) {
        const bool generic = cand.generic;
        auto [id, inserted] = g.add_node(std::move(cand.tuple), generic, depth + 1);
        g.add_edge(from, id, cand.j, cand.c);
        if (inserted && generic) next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  return g;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::string degrees_str(const IntVector& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

// Rank of a rational matrix by Gaussian elimination (destructive copy).
std::size_t rational_rank(RationalMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool fertile_by_linear_system(const Tuple& t, const ProblemData& p, std::size_t j) {
  const Poly& y = t[j];
  const Poly num = fertility_numerator(t, p, j);
  const long k = y.degree();
  const long dmax = std::max(k, num.degree() + 1 - k);
  const std::size_t cols = static_cast<std::size_t>(dmax) + 1;
  const std::size_t rows = static_cast<std::size_t>(std::max<long>(k + dmax, num.degree() + 1));
  RationalMatrix aug(rows, std::vector<Rational>(cols + 1));
  for (std::size_t m = 0; m < cols; ++m) {
    const Poly w = wronskian(y, Poly::monomial(1, m));
    for (std::size_t i = 0; i < w.coeffs().size(); ++i) aug[i][m] = w.coeffs()[i];
  }
  for (std::size_t i = 0; i < num.coeffs().size(); ++i) aug[i][cols] = num.coeffs()[i];
  RationalMatrix coef = aug;
  for (auto& row : coef) row.pop_back();
  return rational_rank(coef) == rational_rank(aug);
}

VerificationReport verify_population(const PopulationGraph& g, const VerifyOptions& opts) {
  const ProblemData& p = g.problem();
  const auto& nodes = g.nodes();
  VerificationReport rep;
  rep.charge = g.charge();

  {  // Weyl orbit of the weight at infinity
    long bound = 0;
    for (const auto& n : nodes)
      for (long v : n.tuple.degrees().values()) bound = std::max(bound, v);
    long tau_sum = 0;
    for (long t : p.tau) tau_sum += t;
    bound = 2 * bound + tau_sum + 2;
    const auto orbit =
        shifted_orbit_degrees(p.cartan, p.tau, g.root().tuple.degrees().values(), bound);
    CheckResult c{"weyl_orbit", true, ""};
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const IntVector& k = nodes[id].tuple.degrees().values();
      if (!orbit.count(k)) {
        c.passed = false;
        c.detail = "node " + std::to_string(id) + " has degree vector " + degrees_str(k) +
                   " outside the shifted orbit of the root";
        break;
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {  // charge constancy
    CheckResult c{"charge_constant", true, "c(P) = " + g.charge().get_str()};
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const Integer b = tuple_charge(nodes[id].tuple, p);
      if (b != g.charge()) {
        c.passed = false;
        c.detail = "node " + std::to_string(id) + " has B(k) = " + b.get_str() +
                   " but c(P) = " + g.charge().get_str();
        break;
      }
    }
    rep.checks.push_back(std::move(c));
  }

  if (p.gram) {  // mu constancy and criticality of generic nodes
    CheckResult c{"mu_constant", true, ""};
    for (std::size_t id = 0; id < nodes.size() && c.passed; ++id) {
      if (!nodes[id].generic) continue;
      const MuExtraction mu = mu_extract(nodes[id].tuple, p);
      if (!mu.identity_ok || mu.mu_sum != 0) {
        c.passed = false;
        c.detail = "node " + std::to_string(id) + " fails the mu identity";
      } else if (!rep.mu) {
        rep.mu = mu.mu;
      } else if (*rep.mu != mu.mu) {
        c.passed = false;
        c.detail = "node " + std::to_string(id) + " has different mu";
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {  // every edge satisfies the Wronskian equation of its direction
    CheckResult c{"edge_wronskian", true, std::to_string(g.edges().size()) + " edges"};
    for (const auto& e : g.edges()) {
      const Tuple& from = nodes[e.from].tuple;
      const Tuple& to = nodes[e.to].tuple;
      bool ok = true;
      for (std::size_t i = 0; i < from.rank(); ++i)
        if (i != e.j && from[i] != to[i]) ok = false;
      const Poly w = wronskian(from[e.j], to[e.j]);
      const Poly num = fertility_numerator(from, p, e.j);
      ok = ok && !w.is_zero() && w * num.leading() == num * w.leading();
      if (!ok) {
        c.passed = false;
        c.detail = "edge " + std::to_string(e.from) + " -> " + std::to_string(e.to);
        break;
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {  // generated members are fertile in every direction, including non-generic ones
    CheckResult c{"member_fertility", true, ""};
    const std::size_t sample = std::min(opts.fertility_sample, nodes.size());
    const std::size_t stride = sample ? std::max<std::size_t>(1, nodes.size() / sample) : 1;
    std::size_t tested = 0;
    for (std::size_t id = 0; id < nodes.size() && tested < sample && c.passed; id += stride) {
      ++tested;
      for (std::size_t j = 0; j < p.rank(); ++j) {
        if (!fertile_by_linear_system(nodes[id].tuple, p, j)) {
          c.passed = false;
          c.detail = "node " + std::to_string(id) + " not fertile in direction " +
                     std::to_string(j + 1);
          break;
        }
      }
    }
    if (c.passed) c.detail = std::to_string(tested) + " nodes sampled";
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

std::vector<std::size_t> find_minimal(const PopulationGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < g.nodes().size(); ++id)
    if (is_dominant(infinity_weight(g.problem(), g.nodes()[id].tuple.degrees())))
      out.push_back(id);
  return out;
}

bool ChargeTheoremReport::ok() const {
  return branch != Branch::Violated &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string branch_name(ChargeTheoremReport::Branch b) {
  switch (b) {
    case ChargeTheoremReport::Branch::ZeroDegree: return "k=0,c=0";
    case ChargeTheoremReport::Branch::NegativeCharge: return "k!=0,c<0";
    case ChargeTheoremReport::Branch::Inconclusive: return "inconclusive";
    case ChargeTheoremReport::Branch::Violated: return "violated";
  }
  return "unknown";
}

ChargeTheoremReport check_charge_theorems(const PopulationGraph& g) {
  const ProblemData& p = g.problem();
  ChargeTheoremReport rep;
  const auto minimal = find_minimal(g);
  if (minimal.empty()) {
    rep.checks.push_back({"minimal_tuple", true, "no minimal node within the explored sample"});
    return rep;
  }
  const Integer& charge = g.charge();
  bool any_zero = false;
  bool any_nonzero = false;
  for (std::size_t id : minimal) {
    const DegreeVector& k = g.nodes()[id].tuple.degrees();
    CheckResult c{"dichotomy@" + std::to_string(id), true, ""};
    if (k.is_zero()) {
      any_zero = true;
      c.passed = charge == 0;
      c.detail = "k=0 requires c(P)=0, got " + charge.get_str();
    } else {
      any_nonzero = true;
      Integer bound = charge;
      for (std::size_t j = 0; j < p.rank(); ++j)
        bound += Integer(p.cartan.b(j)) * (p.tau[j] + 1) * k[j];
      c.passed = charge < 0 && bound < 0;
      c.detail = "c(P) = " + charge.get_str() + ", c(P) + sum b_j (tau_j+1) k_j = " +
                 bound.get_str();
    }
    rep.checks.push_back(std::move(c));
  }
  if (charge == 0) {
    // Only the population of (1,...,1) has charge zero.
    CheckResult c{"charge_zero_population", true, ""};
    const bool has_empty = g.find(Tuple::empty(p.rank())).has_value();
    c.passed = has_empty && !any_nonzero;
    c.detail = has_empty ? "contains (1,...,1)" : "charge 0 but (1,...,1) not reached";
    rep.checks.push_back(std::move(c));
  }
  const bool all_ok =
      std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  if (!all_ok)
    rep.branch = ChargeTheoremReport::Branch::Violated;
  else if (any_zero)
    rep.branch = ChargeTheoremReport::Branch::ZeroDegree;
  else
    rep.branch = ChargeTheoremReport::Branch::NegativeCharge;
  return rep;
}

std::string to_dot(const PopulationGraph& g) {
  std::ostringstream os;
  os << "digraph population {\n";
  for (std::size_t id = 0; id < g.nodes().size(); ++id) {
    const auto& n = g.nodes()[id];
    os << "  n" << id << " [label=\"" << degrees_str(n.tuple.degrees().values()) << "\"";
    if (!n.generic) os << ", style=dashed";
    if (id == 0) os << ", shape=box";
    os << "];\n";
  }
  for (const auto& e : g.edges())
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.j + 1 << ", "
       << to_string(e.c) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace mfpop
