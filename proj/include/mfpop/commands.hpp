#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mfpop/rational.hpp"

namespace mfpop {

/// Exit codes shared by every verb.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

struct ExploreArgs {
  std::filesystem::path file;
  std::size_t depth = 2;
  std::optional<std::vector<Rational>> c_samples;
  std::optional<long> max_degree;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> dot;
};

struct SolveArgs {
  std::filesystem::path file;
  IntVector k;
  std::size_t starts = 200;
  std::size_t max_iter = 100;
  double tol = 1e-10;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct CrosscheckArgs {
  ExploreArgs explore;
  std::vector<IntVector> ks;
  bool orbit = false;  // solve every orbit degree vector within the degree cap
  std::size_t starts = 200;
  std::size_t max_iter = 100;
  double tol = 1e-10;
  double match_tol = 1e-8;
  std::optional<std::uint64_t> seed;
};

/// Each verb writes its report to the --out file or to `out`, diagnostics to
/// `err`, and returns an exit code.
int cmd_validate(const std::filesystem::path& file, std::ostream& out, std::ostream& err);
int cmd_explore(const ExploreArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_crosscheck(const CrosscheckArgs& args, std::ostream& out, std::ostream& err);

/// "1,-1/2,3" -> rationals; "1,1" -> integers. Throw Error{Parse}.
std::vector<Rational> parse_rational_list(const std::string& text);
IntVector parse_int_list(const std::string& text);

}  // namespace mfpop
