#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mfpop/bethe_oracle.hpp"
#include "mfpop/population.hpp"
#include "mfpop/tuplegen.hpp"

namespace mfpop {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "mfpop.report/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Problem file:
///   {"cartan": [[2,-1],[-1,2]], "symmetrizer": [1,1],
///    "points": ["1","-1"], "weights": [[1,1],[1,1]],
///    "gram": [["2","2"],["2","2"]]}            (gram optional)
/// A report file is accepted too; its "problem" member is used.
/// Shape and syntax problems throw Error{Parse}; domain problems throw the
/// domain error from validation.
ProblemData problem_from_json(const json& j);
ProblemData load_problem(const std::filesystem::path& path);

/// Echo in problem-file form; the Gram matrix is written out explicitly.
json problem_to_json(const ProblemData& p);

json rational_list(const std::vector<Rational>& v);
json tuple_to_json(const Tuple& t);
json complex_to_json(Complex c);

json graph_to_json(const PopulationGraph& g);
json verification_to_json(const VerificationReport& r);
json charge_theorems_to_json(const ChargeTheoremReport& r);
json solve_to_json(const SolveResult& r, const ProblemData& p, const SolveOptions& opts);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mfpop
