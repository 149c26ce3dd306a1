#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gnesolve {

// Linear matrix inequality program over decision vector y:
//   minimize c'y  s.t.  F0_b + sum_a y_a Fa_b  psd for every block b,
//                       E y = e.
// Pencil terms are stored sparsely as upper-triangle entries.
struct LmiProgram {
    struct Entry {
        int var;  // index into y
        int row, col;
        double value;
    };
    struct Block {
        int size = 0;
        Eigen::MatrixXd constant;   // F0, size x size (may be zero)
        std::vector<Entry> terms;   // row <= col; symmetric completion implied
    };

    Eigen::VectorXd objective;
    std::vector<Block> blocks;
    Eigen::MatrixXd eq_lhs;  // q x p (may have zero rows)
    Eigen::VectorXd eq_rhs;

    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class SdpStatus { Optimal, Unbounded, Infeasible, Stalled };

struct SdpOutcome {
    SdpStatus status = SdpStatus::Stalled;
    Eigen::VectorXd y;
    double objective = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;
    int iterations = 0;
};

struct SdpOptions {
    double gap_tol = 1e-9;
    double feas_tol = 1e-8;
    int max_iters = 200;
    double unbounded_threshold = 1e10;
};

// Primal-dual interior-point solver with Nesterov-Todd scaling, dense
// blocks, infeasible start. Built for the small moment relaxations this
// project produces (total pencil dimension in the hundreds).
SdpOutcome solve(const LmiProgram& prog, const SdpOptions& opts = {});

}  // namespace gnesolve
