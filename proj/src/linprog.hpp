#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gnesolve::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
    std::vector<int> basis;  // basic column indices at termination
};

// Solves min c'x subject to A x = b, x >= 0 with a two-phase revised simplex.
// The basis matrix is refactorized every iteration; problems here are tiny
// (tens of rows), so stability wins over speed.
Result solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace gnesolve::lp
