#include "linprog.hpp"

#include <cmath>
#include <limits>

namespace gnesolve::lp {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kZeroTol = 1e-11;

struct Simplex {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<int> basis;
    int m, n;

    Simplex(Eigen::MatrixXd A_, Eigen::VectorXd b_) : A(std::move(A_)), b(std::move(b_)) {
        m = static_cast<int>(A.rows());
        n = static_cast<int>(A.cols());
    }

    // Runs simplex minimizing `cost` over the current basis. `allowed` masks
    // columns that may enter. Returns false on unboundedness.
    bool run(const Eigen::VectorXd& cost, const std::vector<char>& allowed,
             Eigen::VectorXd& xB, int max_iters) {
        int stall = 0;
        double last_obj = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < max_iters; ++iter) {
            Eigen::MatrixXd B(m, m);
            for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
            xB = lu.solve(b);

            Eigen::VectorXd cB(m);
            for (int i = 0; i < m; ++i) cB[i] = cost[basis[i]];
            Eigen::VectorXd y = lu.transpose().solve(cB);

            const double obj = cB.dot(xB);
            if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
                last_obj = obj;
                stall = 0;
            } else {
                ++stall;
            }
            const bool bland = stall > 2 * (m + n);

            // Pricing: Dantzig rule, Bland's rule when stalling.
            int enter = -1;
            double best = -kPivotTol;
            for (int j = 0; j < n; ++j) {
                if (!allowed[j]) continue;
                bool basic = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) { basic = true; break; }
                if (basic) continue;
                const double rc = cost[j] - y.dot(A.col(j));
                if (bland) {
                    if (rc < -kPivotTol) { enter = j; break; }
                } else if (rc < best) {
                    best = rc;
                    enter = j;
                }
            }
            if (enter < 0) return true;  // optimal

            Eigen::VectorXd d = lu.solve(A.col(enter));
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (d[i] > kPivotTol) {
                    const double ratio = std::max(xB[i], 0.0) / d[i];
                    if (ratio < best_ratio - kZeroTol ||
                        (ratio < best_ratio + kZeroTol && (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            basis[leave] = enter;
        }
        return true;  // iteration cap; treat current point as answer
    }
};

}  // namespace

Result solve(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in, const Eigen::VectorXd& c) {
    const int m = static_cast<int>(A_in.rows());
    const int n = static_cast<int>(A_in.cols());
    Result res;
    if (m == 0) {
        res.status = Status::Optimal;
        res.objective = 0.0;
        res.x = Eigen::VectorXd::Zero(n);
        return res;
    }

    // Make b nonnegative, then append artificial columns for phase 1.
    Eigen::MatrixXd A(m, n + m);
    Eigen::VectorXd b = b_in;
    A.leftCols(n) = A_in;
    A.rightCols(m).setZero();
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0) {
            A.row(i).head(n) *= -1.0;
            b[i] = -b[i];
        }
        A(i, n + i) = 1.0;
    }

    Simplex sx(A, b);
    sx.basis.resize(m);
    for (int i = 0; i < m; ++i) sx.basis[i] = n + i;

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    std::vector<char> all_allowed(n + m, 1);
    Eigen::VectorXd xB;
    const int max_iters = 200 * (m + n) + 200;
    sx.run(phase1_cost, all_allowed, xB, max_iters);

    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        if (sx.basis[i] >= n) infeas += std::max(xB[i], 0.0);
    const double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (infeas > 1e-8 * scale) {
        res.status = Status::Infeasible;
        return res;
    }

    // Pivot residual artificials out of the basis; redundant rows keep their
    // artificial pinned at zero and are barred from re-entering.
    for (int i = 0; i < m; ++i) {
        if (sx.basis[i] < n) continue;
        Eigen::MatrixXd B(m, m);
        for (int k = 0; k < m; ++k) B.col(k) = sx.A.col(sx.basis[k]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        for (int j = 0; j < n; ++j) {
            bool basic = false;
            for (int k = 0; k < m; ++k)
                if (sx.basis[k] == j) { basic = true; break; }
            if (basic) continue;
            Eigen::VectorXd d = lu.solve(sx.A.col(j));
            if (std::abs(d[i]) > 1e-7) {
                sx.basis[i] = j;
                break;
            }
        }
    }

    std::vector<char> allowed(n + m, 0);
    for (int j = 0; j < n; ++j) allowed[j] = 1;
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
    cost.head(n) = c;
    const bool bounded = sx.run(cost, allowed, xB, max_iters);
    if (!bounded) {
        res.status = Status::Unbounded;
        return res;
    }

    res.status = Status::Optimal;
    res.x = Eigen::VectorXd::Zero(n);
    res.objective = 0.0;
    for (int i = 0; i < m; ++i) {
        if (sx.basis[i] < n) {
            res.x[sx.basis[i]] = xB[i];
            res.objective += c[sx.basis[i]] * xB[i];
        }
    }
    res.basis = sx.basis;
    return res;
}

}  // namespace gnesolve::lp
