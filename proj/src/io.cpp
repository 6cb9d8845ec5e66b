#include "mfpop/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mfpop/error.hpp"

namespace mfpop {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing \"") + key + "\"");
  return j.at(key);
}

IntVector int_vector(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  IntVector out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) bad(std::string(what) + " entries must be integers");
    out.push_back(v.get<long>());
  }
  return out;
}

Rational rational_value(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  bad("rationals must be strings \"p/q\" or integers");
}

}  // namespace

ProblemData problem_from_json(const json& in) {
  const json& j = in.is_object() && in.contains("problem") ? in.at("problem") : in;
  const json& cart = member(j, "cartan");
  if (!cart.is_array()) bad("\"cartan\" must be an array of rows");
  IntMatrix a;
  for (const auto& row : cart) a.push_back(int_vector(row, "cartan row"));
  IntVector b = int_vector(member(j, "symmetrizer"), "symmetrizer");

  const json& pts = member(j, "points");
  if (!pts.is_array()) bad("\"points\" must be an array");
  std::vector<Rational> z;
  for (const auto& v : pts) z.push_back(rational_value(v));

  const json& ws = member(j, "weights");
  if (!ws.is_array()) bad("\"weights\" must be an array");
  std::vector<WeightPairings> weights;
  for (const auto& w : ws) weights.push_back({int_vector(w, "weight")});

  std::optional<RationalMatrix> gram;
  if (j.contains("gram") && !j.at("gram").is_null()) {
    const json& g = j.at("gram");
    if (!g.is_array()) bad("\"gram\" must be an array of rows");
    RationalMatrix m;
    for (const auto& row : g) {
      if (!row.is_array()) bad("\"gram\" rows must be arrays");
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(rational_value(v));
      m.push_back(std::move(r));
    }
    gram = std::move(m);
  }
  CartanData cd = validate_cartan(std::move(a), std::move(b));
  return build_problem(std::move(cd), std::move(z), std::move(weights), std::move(gram));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) bad("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) bad("cannot write " + path.string());
  f << text;
  if (!f) bad("write failed for " + path.string());
}

ProblemData load_problem(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return problem_from_json(j);
}

json rational_list(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

json problem_to_json(const ProblemData& p) {
  json j;
  j["cartan"] = p.cartan.matrix();
  j["symmetrizer"] = p.cartan.symmetrizer();
  j["points"] = rational_list(p.z);
  json ws = json::array();
  for (const auto& w : p.weights) ws.push_back(w.m);
  j["weights"] = ws;
  if (p.gram) {
    json g = json::array();
    for (const auto& row : *p.gram) g.push_back(rational_list(row));
    j["gram"] = g;
  }
  return j;
}

json tuple_to_json(const Tuple& t) {
  json out = json::array();
  for (const auto& y : t.components()) out.push_back(rational_list(y.coeffs()));
  return out;
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json graph_to_json(const PopulationGraph& g) {
  json j;
  json nodes = json::array();
  std::set<IntVector> degree_set;
  for (std::size_t id = 0; id < g.nodes().size(); ++id) {
    const auto& n = g.nodes()[id];
    degree_set.insert(n.tuple.degrees().values());
    nodes.push_back({{"id", id},
                     {"degrees", n.tuple.degrees().values()},
                     {"tuple", tuple_to_json(n.tuple)},
                     {"generic", n.generic},
                     {"depth", n.depth}});
  }
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"from", e.from}, {"to", e.to}, {"j", e.j + 1}, {"c", to_string(e.c)}});
  j["nodes"] = nodes;
  j["edges"] = edges;
  j["node_count"] = g.nodes().size();
  j["edge_count"] = g.edges().size();
  j["degree_vectors"] = degree_set;
  j["charge"] = g.charge().get_str();
  j["root"] = tuple_to_json(g.root().tuple);
  return j;
}

json verification_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json j{{"checks", checks}, {"all_passed", r.all_passed()}, {"charge", r.charge.get_str()}};
  j["mu"] = r.mu ? rational_list(*r.mu) : json(nullptr);
  return j;
}

json charge_theorems_to_json(const ChargeTheoremReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"branch", branch_name(r.branch)}, {"ok", r.ok()}, {"checks", checks}};
}

json solve_to_json(const SolveResult& r, const ProblemData& p, const SolveOptions& opts) {
  json pts = json::array();
  for (const auto& pt : r.points) {
    json groups = json::array();
    for (const auto& g : pt.u) {
      json grp = json::array();
      for (const auto& u : g) grp.push_back(complex_to_json(u));
      groups.push_back(grp);
    }
    json entry{{"u", groups}, {"residual", pt.residual}, {"degrees", pt.k.values()}};
    entry["charge"] = charge_form(p, pt.k.values()).get_str();
    pts.push_back(entry);
  }
  return {{"tol", opts.tol},
          {"starts", opts.starts},
          {"max_iter", opts.max_iter},
          {"seed", opts.seed},
          {"points", pts},
          {"point_count", r.points.size()},
          {"stats",
           {{"starts", r.stats.starts},
            {"converged", r.stats.converged},
            {"failed", r.stats.failed},
            {"non_generic_discarded", r.stats.non_generic},
            {"duplicates", r.stats.duplicates}}}};
}

}  // namespace mfpop
