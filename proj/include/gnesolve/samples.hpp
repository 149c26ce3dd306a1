#pragma once

#include <string>
#include <vector>

#include "gnesolve/gnep.hpp"

namespace gnesolve::samples {

// Benchmark instances shipped with the repository (problems/*.json mirrors
// these builders; see test_io_cli for the consistency check).
GnepProblem ex22();    // 2-player unconstrained NEP with cubic couplings
GnepProblem ex51i();   // 3-dim NEP, sphere + bilinear constraints
GnepProblem ex51ii();  // variant of ex51i with no equilibrium
GnepProblem ex52();    // GNEP variant of ex51i with shared constraints
GnepProblem ex53();    // small convex GNEP
GnepProblem ex54();    // nonconvex GNEP with a unique equilibrium
GnepProblem ex55();    // nonconvex GNEP with no equilibrium
GnepProblem ex56i();   // 3-player convex quadratic game with box constraints
GnepProblem ex56ii();  // nonconvex variant of ex56i

std::vector<std::string> names();
GnepProblem by_name(const std::string& name);
bool is_convex(const std::string& name);

}  // namespace gnesolve::samples
