#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfpop/commands.hpp"
#include "mfpop/error.hpp"

namespace {

void add_explore_flags(CLI::App* cmd, mfpop::ExploreArgs& a, std::string& c_samples,
                       long& max_degree, std::string& out, std::string& dot) {
  cmd->add_option("file", a.file, "problem file (JSON)")->required();
  cmd->add_option("--depth", a.depth, "generation depth")->capture_default_str();
  cmd->add_option("--c-samples", c_samples, "comma-separated rational parameters");
  cmd->add_option("--max-degree", max_degree, "component degree cap");
  cmd->add_option("--out", out, "report path (default: stdout)");
  cmd->add_option("--dot", dot, "write the population graph in DOT format");
}

void finish_explore(CLI::App* cmd, mfpop::ExploreArgs& a, const std::string& c_samples,
                    long max_degree, const std::string& out, const std::string& dot) {
  if (cmd->count("--c-samples")) a.c_samples = mfpop::parse_rational_list(c_samples);
  if (cmd->count("--max-degree")) a.max_degree = max_degree;
  if (!out.empty()) a.out = out;
  if (!dot.empty()) a.dot = dot;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Populations of critical points of master functions"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check a problem file");
  validate->add_option("file", validate_file)->required();

  mfpop::ExploreArgs ex;
  std::string ex_c, ex_out, ex_dot;
  long ex_deg = 0;
  auto* explore = app.add_subcommand("explore", "explore the population of (1,...,1)");
  add_explore_flags(explore, ex, ex_c, ex_deg, ex_out, ex_dot);

  mfpop::SolveArgs sv;
  std::string sv_k, sv_out;
  std::uint64_t sv_seed = 0;
  auto* solve = app.add_subcommand("solve", "solve the critical-point equations numerically");
  solve->add_option("file", sv.file)->required();
  solve->add_option("--k", sv_k, "degree vector, e.g. 1,1")->required();
  solve->add_option("--starts", sv.starts)->capture_default_str();
  solve->add_option("--max-iter", sv.max_iter)->capture_default_str();
  solve->add_option("--tol", sv.tol)->capture_default_str();
  solve->add_option("--seed", sv_seed);
  solve->add_option("--out", sv_out);

  mfpop::CrosscheckArgs cc;
  std::string cc_c, cc_out, cc_dot;
  long cc_deg = 0;
  std::vector<std::string> cc_k;
  std::uint64_t cc_seed = 0;
  auto* cross = app.add_subcommand("crosscheck", "match numeric critical points to the population");
  add_explore_flags(cross, cc.explore, cc_c, cc_deg, cc_out, cc_dot);
  cross->add_option("--k", cc_k, "degree vector (repeatable)");
  cross->add_flag("--orbit", cc.orbit, "solve every orbit degree vector within the cap");
  cross->add_option("--starts", cc.starts)->capture_default_str();
  cross->add_option("--max-iter", cc.max_iter)->capture_default_str();
  cross->add_option("--tol", cc.tol)->capture_default_str();
  cross->add_option("--match-tol", cc.match_tol)->capture_default_str();
  cross->add_option("--seed", cc_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mfpop::kExitIo;
  }

  try {
    if (*validate) return mfpop::cmd_validate(validate_file, std::cout, std::cerr);
    if (*explore) {
      finish_explore(explore, ex, ex_c, ex_deg, ex_out, ex_dot);
      return mfpop::cmd_explore(ex, std::cout, std::cerr);
    }
    if (*solve) {
      sv.k = mfpop::parse_int_list(sv_k);
      if (solve->count("--seed")) sv.seed = sv_seed;
      if (!sv_out.empty()) sv.out = sv_out;
      return mfpop::cmd_solve(sv, std::cout, std::cerr);
    }
    if (*cross) {
      finish_explore(cross, cc.explore, cc_c, cc_deg, cc_out, cc_dot);
      for (const auto& k : cc_k) cc.ks.push_back(mfpop::parse_int_list(k));
      if (cross->count("--seed")) cc.seed = cc_seed;
      return mfpop::cmd_crosscheck(cc, std::cout, std::cerr);
    }
  } catch (const mfpop::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mfpop::ErrorCode::Parse ? mfpop::kExitIo : mfpop::kExitDomain;
  }
  return mfpop::kExitOk;
}
