#pragma once

#include <string>

#include "gnesolve/gnep.hpp"
#include "gnesolve/homotopy.hpp"
#include "gnesolve/selector.hpp"

namespace gnesolve {

// Problem files are JSON documents
//   {"players": [{"dim": n_i,
//                 "objective": [TERM...],
//                 "constraints": [{"kind": "eq"|"ineq", "poly": [TERM...]}...]}...]}
// with TERM = {"coeff": real, "exps": [int x n]} over the full variable
// vector in player-block order. parse(print(p)) == p exactly.
GnepProblem parse_problem(const std::string& text);
GnepProblem load_problem(const std::string& path);
std::string print_problem(const GnepProblem& prob);
void save_problem(const GnepProblem& prob, const std::string& path);

// Endpoint dump: array of {x: [[re,im]...], lambda: [[re,im]...], residual,
// status: "complex"|"real"|"kkt", singular}.
std::string tuples_to_json(const GnepProblem& prob, const ClassifiedTuples& cls);

std::string report_to_json(const GneReport& report);
std::string report_to_text(const GneReport& report);

}  // namespace gnesolve
