#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gnesolve/polysys.hpp"

namespace gnesolve {

enum class ConstraintKind { Equality, Inequality };

// One constraint g(x) = 0 or g(x) >= 0, with g over the full strategy vector.
struct Constraint {
    SparsePolynomial g;
    ConstraintKind kind;
};

struct PlayerProblem {
    int dim = 0;  // n_i
    SparsePolynomial objective{1};
    std::vector<Constraint> constraints;
};

struct Tolerances {
    double real_tol = 1e-8;   // relative imaginary-part threshold for realness
    double sign_tol = 1e-6;   // lambda / inequality sign slack
    double feas_tol = 1e-6;   // feasibility slack
    double dedup_tol = 1e-6;  // relative distance for point deduplication
};

// An N-player problem over x = (x_1,...,x_N). All objectives and constraints
// are polynomials in the full n = sum n_i variables with real coefficients.
// The KKT variable layout is x blocks first, then lambda blocks in player
// order; lambda_{i,j} sits at n + lambda_offset(i) + j.
class GnepProblem {
public:
    explicit GnepProblem(std::vector<PlayerProblem> players);

    int num_players() const { return static_cast<int>(players_.size()); }
    const PlayerProblem& player(int i) const { return players_.at(i); }
    const std::vector<PlayerProblem>& players() const { return players_; }

    int total_dim() const { return n_; }           // n
    int total_constraints() const { return m_; }   // m
    int kkt_dim() const { return n_ + m_; }

    int x_offset(int i) const { return x_offset_.at(i); }
    int x_dim(int i) const { return players_.at(i).dim; }
    int lambda_offset(int i) const { return lambda_offset_.at(i); }  // relative to n
    int num_constraints(int i) const { return static_cast<int>(players_.at(i).constraints.size()); }

    // Global variable indices of player i's strategy block.
    std::vector<int> x_indices(int i) const;

private:
    std::vector<PlayerProblem> players_;
    int n_ = 0, m_ = 0;
    std::vector<int> x_offset_, lambda_offset_;
};

// A solution candidate of the complex KKT system: point = (x, lambda) in
// C^{n+m}, with classification flags filled by classify_tuples. Singular
// tuples (rank-deficient Jacobian) never enter K: their numerics cannot be
// trusted for sign tests and they are reported separately.
struct KktTuple {
    Eigen::VectorXcd point;
    double residual = 0.0;
    bool is_real = false;
    bool is_singular = false;
    bool is_kkt = false;
    bool is_gne = false;
};

// The square complex KKT system F(x, lambda) in n + m variables:
// per player, n_i stationarity rows, then one row per constraint
// (lambda_{i,j} * g_{i,j} for inequalities, g_{i,j} for equalities).
PolynomialSystem build_complex_kkt(const GnepProblem& prob);

// x_i in X_i(x_{-i}): every equality within feas_tol, every inequality
// above -feas_tol.
bool feasible(const GnepProblem& prob, int i, const Eigen::VectorXd& x, double feas_tol = 1e-6);

// Accuracy parameter: min over players of inequality slacks, -|equality|
// residuals and the supplied per-player checking values delta_i. A point is
// declared a GNE when this is >= -1e-6.
double accuracy_delta(const GnepProblem& prob, const Eigen::VectorXd& x,
                      const std::vector<double>& player_deltas);

// Random instance: each player gets one convex quadratic inequality
// -x_i'A_i x_i + x_{-i}'B_i x_i + c'x >= d with A_i = R'R, and either a
// convex quadratic objective (convex=true) or a dense degree-d objective with
// uniform coefficients. All entries are uniform on [-1,1], drawn from `seed`
// in a fixed order, so instances are reproducible bit-for-bit.
GnepProblem random_gnep(int players, int dim_per_player, int degree, bool convex,
                        std::uint64_t seed);

}  // namespace gnesolve
