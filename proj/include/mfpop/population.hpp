#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfpop/tuplegen.hpp"

namespace mfpop {

struct ExploreLimits {
  std::size_t max_depth = 2;
  std::vector<Rational> c_samples = {0, 1, -1, 2, -2};
  long max_component_degree = 12;
  unsigned threads = 0;  // 0: worker_count()
};

struct PopulationNode {
  Tuple tuple;
  bool generic = true;
  std::size_t depth = 0;
};

struct PopulationEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t j = 0;
  Rational c;
};

/// Finite sample of a population: deduplicated tuples joined by generation
/// edges. Node 0 is the root.
class PopulationGraph {
 public:
  PopulationGraph(std::shared_ptr<const ProblemData> problem, Tuple root);

  const ProblemData& problem() const { return *problem_; }
  std::shared_ptr<const ProblemData> problem_ptr() const { return problem_; }
  const std::vector<PopulationNode>& nodes() const { return nodes_; }
  const std::vector<PopulationEdge>& edges() const { return edges_; }
  const PopulationNode& root() const { return nodes_.front(); }

  /// c(P): B evaluated at the root's degree vector. Settable for hand-built
  /// graphs only.
  const Integer& charge() const { return charge_; }
  void set_charge(Integer c) { charge_ = std::move(c); }

  std::optional<std::size_t> find(const Tuple& t) const;
  /// Returns the id of t, inserting it when new.
  std::pair<std::size_t, bool> add_node(Tuple t, bool generic, std::size_t depth);
  void add_edge(std::size_t from, std::size_t to, std::size_t j, Rational c);

  /// Families computed at expanded nodes, keyed by (node, direction).
  const std::map<std::pair<std::size_t, std::size_t>, GenerationFamily>& families() const {
    return families_;
  }
  void add_family(std::size_t node, GenerationFamily f);

  /// Node ids sorted by canonical key.
  std::vector<std::size_t> canonical_order() const;

 private:
  std::shared_ptr<const ProblemData> problem_;
  std::vector<PopulationNode> nodes_;
  std::vector<PopulationEdge> edges_;
  std::map<std::string, std::size_t> index_;
  std::map<std::pair<std::size_t, std::size_t>, GenerationFamily> families_;
  Integer charge_;
};

/// Breadth-first generation from `start`. Throws StartNotFertile.
PopulationGraph explore(std::shared_ptr<const ProblemData> problem, const Tuple& start,
                        const ExploreLimits& limits);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyOptions {
  std::size_t fertility_sample = 16;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  Integer charge;
  std::optional<std::vector<Rational>> mu;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

VerificationReport verify_population(const PopulationGraph& g, const VerifyOptions& opts = {});

/// Ids of nodes whose degree vector satisfies tau_j + 1 - sum_i a_ji k_i > 0
/// for every j.
std::vector<std::size_t> find_minimal(const PopulationGraph& g);

struct ChargeTheoremReport {
  enum class Branch { ZeroDegree, NegativeCharge, Inconclusive, Violated };
  Branch branch = Branch::Inconclusive;
  std::vector<CheckResult> checks;
  bool ok() const;
};

std::string branch_name(ChargeTheoremReport::Branch b);

ChargeTheoremReport check_charge_theorems(const PopulationGraph& g);

/// Exact fertility test for any nonzero y_j (squarefree or not): solves
/// W(y_j, u) = T_j prod y_i^{-a_ji} for a polynomial u by linear algebra over Q.
bool fertile_by_linear_system(const Tuple& t, const ProblemData& p, std::size_t j);

/// Graphviz rendering: nodes labeled with degree vectors, edges with "j, c".
std::string to_dot(const PopulationGraph& g);

}  // namespace mfpop
