#include "mfpop/commands.hpp"

#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "mfpop/error.hpp"
#include "mfpop/io.hpp"

namespace mfpop {

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Parse ? kExitIo : kExitDomain;
  } catch (const json::exception& e) {
    err << "error: Parse: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitDomain;
  }
}

void emit(const json& report, const std::optional<std::filesystem::path>& path,
          std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path)
    write_text(*path, text);
  else
    out << text;
}

json header(const char* command, const ProblemData& p) {
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"problem", problem_to_json(p)}};
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ExploreLimits limits_for(const ProblemData& p, const ExploreArgs& args) {
  ExploreLimits lim;
  lim.max_depth = args.depth;
  if (args.c_samples) lim.c_samples = *args.c_samples;
  if (args.max_degree) {
    lim.max_component_degree = *args.max_degree;
  } else if (!p.cartan.finite_type()) {
    throw Error(ErrorCode::DegreeCapRequired,
                p.cartan.kernel_dim() > 0 ? "degree cap required for affine type"
                                          : "degree cap required for indefinite type");
  }
  return lim;
}

json limits_to_json(const ExploreLimits& lim) {
  return {{"max_depth", lim.max_depth},
          {"c_samples", rational_list(lim.c_samples)},
          {"max_component_degree", lim.max_component_degree}};
}

struct Exploration {
  PopulationGraph graph;
  VerificationReport verification;
  ChargeTheoremReport charges;
  json exact;
};

Exploration run_exploration(std::shared_ptr<const ProblemData> p, const ExploreLimits& lim) {
  PopulationGraph g = explore(p, Tuple::empty(p->rank()), lim);
  VerificationReport ver = verify_population(g);
  ChargeTheoremReport ch = check_charge_theorems(g);
  json exact;
  exact["limits"] = limits_to_json(lim);
  exact["population"] = graph_to_json(g);
  exact["minimal"] = find_minimal(g);
  exact["mu"] = ver.mu ? rational_list(*ver.mu) : json(nullptr);
  exact["verification"] = verification_to_json(ver);
  exact["charge_theorems"] = charge_theorems_to_json(ch);
  return {std::move(g), std::move(ver), std::move(ch), std::move(exact)};
}

}  // namespace

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(ErrorCode::Parse, "empty list");
  return out;
}

IntVector parse_int_list(const std::string& text) {
  IntVector out;
  for (const auto& q : parse_rational_list(text)) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
      throw Error(ErrorCode::Parse, "expected integers in \"" + text + "\"");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

int cmd_validate(const std::filesystem::path& file, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemData p = load_problem(file);
    out << "ok: rank " << p.rank() << ", " << p.points() << " points, kernel dimension "
        << p.cartan.kernel_dim() << ", tau = (";
    for (std::size_t j = 0; j < p.tau.size(); ++j) out << (j ? "," : "") << p.tau[j];
    out << ")\n";
    return kExitOk;
  });
}

int cmd_explore(const ExploreArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto p = std::make_shared<const ProblemData>(load_problem(args.file));
    const ExploreLimits lim = limits_for(*p, args);
    Exploration ex = run_exploration(p, lim);
    json report = header("explore", *p);
    report["exact"] = ex.exact;
    emit(report, args.out, out);
    if (args.dot) write_text(*args.dot, to_dot(ex.graph));
    if (!ex.verification.all_passed() || !ex.charges.ok()) {
      err << "error: population verification failed\n";
      return kExitDomain;
    }
    return kExitOk;
  });
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemData p = load_problem(args.file);
    if (args.k.size() != p.rank())
      throw Error(ErrorCode::ShapeMismatch, "--k needs " + std::to_string(p.rank()) + " entries");
    SolveOptions opts;
    opts.starts = args.starts;
    opts.max_iter = args.max_iter;
    opts.tol = args.tol;
    opts.seed = resolve_seed(args.seed);
    const DegreeVector k(args.k);
    const SolveResult res = solve_bethe(p, k, opts);
    json report = header("solve", p);
    report["seed"] = opts.seed;
    report["exact"] = {{"degrees", k.values()}, {"charge", charge_form(p, k.values()).get_str()}};
    report["numeric"] = solve_to_json(res, p, opts);
    emit(report, args.out, out);
    return kExitOk;
  });
}

int cmd_crosscheck(const CrosscheckArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto p = std::make_shared<const ProblemData>(load_problem(args.explore.file));
    const ExploreLimits lim = limits_for(*p, args.explore);
    Exploration ex = run_exploration(p, lim);
    json report = header("crosscheck", *p);
    report["exact"] = ex.exact;

    std::vector<IntVector> ks = args.ks;
    if (args.orbit) {
      const IntVector zero(p->rank(), 0);
      for (const auto& k : shifted_orbit_degrees(p->cartan, p->tau, zero,
                                                 lim.max_component_degree)) {
        bool ok = true;
        for (long v : k) ok = ok && v >= 0;
        if (ok && std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
      }
    }
    if (ks.empty()) {
      emit(report, args.explore.out, out);
      return kExitOk;
    }

    SolveOptions opts;
    opts.starts = args.starts;
    opts.max_iter = args.max_iter;
    opts.tol = args.tol;
    opts.seed = resolve_seed(args.seed);
    report["seed"] = opts.seed;

    json solves = json::array();
    std::size_t total = 0, matched = 0, unmatched_zero = 0, matched_nonzero = 0;
    for (const auto& kv : ks) {
      if (kv.size() != p->rank())
        throw Error(ErrorCode::ShapeMismatch, "--k needs " + std::to_string(p->rank()) + " entries");
      const DegreeVector k(kv);
      const Integer charge = charge_form(*p, kv);
      const SolveResult res = solve_bethe(*p, k, opts);
      json sj = solve_to_json(res, *p, opts);
      json& pts = sj["points"];
      for (std::size_t i = 0; i < res.points.size(); ++i) {
        const MatchResult m = match_population(ex.graph, to_numeric_tuple(res.points[i]),
                                               args.match_tol);
        ++total;
        if (m.matched) ++matched;
        if (!m.matched && charge == 0) ++unmatched_zero;
        if (m.matched && charge != 0) ++matched_nonzero;
        json mj{{"matched", m.matched}, {"via", m.via}, {"fit_residual", m.fit_residual},
                {"descent_steps", m.descent_steps}};
        mj["node"] = m.node ? json(*m.node) : json(nullptr);
        mj["j"] = m.j ? json(*m.j + 1) : json(nullptr);
        mj["c"] = m.c ? complex_to_json(*m.c) : json(nullptr);
        pts[i]["match"] = mj;
      }
      sj["degrees"] = kv;
      sj["charge"] = charge.get_str();
      solves.push_back(sj);
    }
    report["numeric"] = {{"tol", args.tol},
                         {"match_tol", args.match_tol},
                         {"solves", solves},
                         {"summary",
                          {{"points", total},
                           {"matched", matched},
                           {"unmatched", total - matched},
                           {"unmatched_charge_zero", unmatched_zero},
                           {"matched_charge_nonzero", matched_nonzero},
                           {"charge_zero_points_reachable", unmatched_zero == 0}}}};
    emit(report, args.explore.out, out);
    return kExitOk;
  });
}

}  // namespace mfpop
