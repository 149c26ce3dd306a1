#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gnesolve/gnep.hpp"
#include "gnesolve/homotopy.hpp"
#include "gnesolve/sdp.hpp"

namespace gnesolve {

class ExtractionFailed : public std::runtime_error {
public:
    ExtractionFailed() : std::runtime_error("minimizer extraction failed re-verification") {}
};

class NoFeasibleKktPoint : public std::runtime_error {
public:
    NoFeasibleKktPoint() : std::runtime_error("oracle found no real feasible KKT point") {}
};

// Truncated moment sequence of degree 2d in `nvars` variables; values are
// indexed by monomials_up_to(nvars, degree) in graded lex order.
struct Tms {
    int nvars = 0;
    int degree = 0;
    Eigen::VectorXd values;
};

double tms_pairing(const SparsePolynomial& p, const Tms& y);  // <p, y>
Eigen::MatrixXd moment_matrix(const Tms& y, int t);
Eigen::MatrixXd localizing_matrix(const SparsePolynomial& q, const Tms& y, int t);

// Player i's deviation problem at the anchor point u:
//   minimize theta(x_i) = f_i(x_i, u_{-i}) - f_i(u_i, u_{-i})
//   over the constraints restricted the same way. theta vanishes at u_i by
//   construction; the anchor is a global minimizer iff the optimum is >= 0.
struct CheckingProblem {
    int player = 0;
    int ni = 0;
    Eigen::VectorXd anchor;  // u_i
    SparsePolynomial theta{1};
    std::vector<SparsePolynomial> equalities;
    std::vector<SparsePolynomial> inequalities;
    int base_order = 1;  // d_i: max ceil(deg/2) over theta and constraints
};

CheckingProblem make_checking_problem(const GnepProblem& prob, int player,
                                      const Eigen::VectorXd& u);

// Order-d moment relaxation: variables y over monomials of degree <= 2d;
// objective <theta, y>; moment matrix and inequality localizers psd,
// equality localizers pinned to zero entrywise, y_0 = 1.
LmiProgram moment_relaxation(const CheckingProblem& cp, int order);

Tms tms_from_vector(int nvars, int order, const Eigen::VectorXd& y);

// rank M_t[y] == rank M_{t-d_i}[y], ranks by singular-value ratio.
std::pair<bool, int> flat_truncation(const Tms& y, int di, int t, double rank_tol = 1e-6);

struct CheckOptions {
    int max_order_offset = 4;    // explore orders d_i .. d_i + offset
    int order_cap = 5;           // absolute ceiling (SDP size guard)
    double certify_tol = 1e-8;   // vartheta >= -tol certifies delta_i = 0
    double rank_tol = 1e-6;
    double feas_tol = 1e-6;
    double value_tol = 1e-5;     // |theta(v) - vartheta| consistency
    SdpOptions sdp{.gap_tol = 1e-9, .feas_tol = 1e-8, .max_iters = 400};
};

// Column-echelon extraction of r minimizers from a flat tms (multiplication
// operators + ordered real Schur). Points failing feasibility or value
// consistency raise ExtractionFailed.
std::vector<Eigen::VectorXd> extract_minimizers(const CheckingProblem& cp, const Tms& y, int t,
                                                int rank, double vartheta,
                                                const CheckOptions& opts = {});

enum class CheckStatus { NonnegativeCertified, Negative, Inconclusive };

struct VerificationOutcome {
    CheckStatus status = CheckStatus::Inconclusive;
    double value = 0.0;  // delta_i: 0 when certified, the relaxation bound when negative
    std::vector<Eigen::VectorXd> minimizers;
    std::vector<double> trace;  // vartheta^{(d)} per solved order
    int final_order = 0;
};

// Moment-SOS hierarchy: solve orders d_i, d_i+1, ... until the bound
// certifies nonnegativity, flat truncation delivers minimizers, or the order
// budget runs out. An unbounded relaxation counts as Negative with no
// minimizers.
VerificationOutcome solve_checking(const CheckingProblem& cp, const CheckOptions& opts = {});

// Independent cross-check: solve the checking problem's own KKT system with
// the homotopy solver and minimize theta over the real feasible KKT points.
// Valid as an oracle only when a minimizer exists and satisfies KKT.
std::pair<double, std::vector<Eigen::VectorXd>> kkt_oracle(const CheckingProblem& cp,
                                                           std::uint64_t seed = 17,
                                                           const TrackOptions& topts = {});

}  // namespace gnesolve
