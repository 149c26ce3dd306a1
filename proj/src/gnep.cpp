#include "gnesolve/gnep.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gnesolve {

GnepProblem::GnepProblem(std::vector<PlayerProblem> players) : players_(std::move(players)) {
    if (players_.empty()) throw std::invalid_argument("a GNEP needs at least one player");
    for (const auto& p : players_) {
        if (p.dim < 1) throw std::invalid_argument("player dimension must be >= 1");
        n_ += p.dim;
        m_ += static_cast<int>(p.constraints.size());
    }
    int xo = 0, lo = 0;
    for (const auto& p : players_) {
        x_offset_.push_back(xo);
        lambda_offset_.push_back(lo);
        xo += p.dim;
        lo += static_cast<int>(p.constraints.size());
    }
    for (const auto& p : players_) {
        if (p.objective.ambient_dim() != n_)
            throw std::invalid_argument("objective must live in the full strategy space");
        if (!p.objective.has_real_coefficients())
            throw std::invalid_argument("objective coefficients must be real");
        for (const auto& c : p.constraints) {
            if (c.g.ambient_dim() != n_)
                throw std::invalid_argument("constraint must live in the full strategy space");
            if (!c.g.has_real_coefficients())
                throw std::invalid_argument("constraint coefficients must be real");
        }
    }
}

std::vector<int> GnepProblem::x_indices(int i) const {
    std::vector<int> idx(players_.at(i).dim);
    for (int k = 0; k < players_.at(i).dim; ++k) idx[k] = x_offset_.at(i) + k;
    return idx;
}

PolynomialSystem build_complex_kkt(const GnepProblem& prob) {
    const int n = prob.total_dim();
    const int m = prob.total_constraints();
    const int dim = n + m;
    PolynomialSystem sys(dim);

    for (int i = 0; i < prob.num_players(); ++i) {
        const PlayerProblem& pl = prob.player(i);
        const int mi = prob.num_constraints(i);

        // Stationarity rows: d f_i / d x_{i,k} - sum_j lambda_{i,j} d g_{i,j} / d x_{i,k}.
        for (int k = 0; k < pl.dim; ++k) {
            const int var = prob.x_offset(i) + k;
            SparsePolynomial row = embed(differentiate(pl.objective, var), dim);
            for (int j = 0; j < mi; ++j) {
                const int lam = n + prob.lambda_offset(i) + j;
                SparsePolynomial dg = embed(differentiate(pl.constraints[j].g, var), dim);
                row -= SparsePolynomial::variable(dim, lam) * dg;
            }
            sys.push(std::move(row));
        }
        // Complementarity / equality rows in constraint order.
        for (int j = 0; j < mi; ++j) {
            const int lam = n + prob.lambda_offset(i) + j;
            SparsePolynomial g = embed(pl.constraints[j].g, dim);
            if (pl.constraints[j].kind == ConstraintKind::Inequality) {
                sys.push(SparsePolynomial::variable(dim, lam) * g);
            } else {
                sys.push(std::move(g));
            }
        }
    }
    return sys;
}

bool feasible(const GnepProblem& prob, int i, const Eigen::VectorXd& x, double feas_tol) {
    if (x.size() != prob.total_dim()) throw std::invalid_argument("point dimension mismatch");
    std::vector<double> xv(x.data(), x.data() + x.size());
    for (const auto& c : prob.player(i).constraints) {
        const double v = evaluate_real(c.g, xv);
        if (c.kind == ConstraintKind::Equality) {
            if (std::abs(v) > feas_tol) return false;
        } else {
            if (v < -feas_tol) return false;
        }
    }
    return true;
}

double accuracy_delta(const GnepProblem& prob, const Eigen::VectorXd& x,
                      const std::vector<double>& player_deltas) {
    if (static_cast<int>(player_deltas.size()) != prob.num_players())
        throw std::invalid_argument("one delta_i per player expected");
    std::vector<double> xv(x.data(), x.data() + x.size());
    double delta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < prob.num_players(); ++i) {
        for (const auto& c : prob.player(i).constraints) {
            const double v = evaluate_real(c.g, xv);
            delta = std::min(delta, c.kind == ConstraintKind::Inequality ? v : -std::abs(v));
        }
        delta = std::min(delta, player_deltas[i]);
    }
    return delta;
}

namespace {

// Uniform draws on [-1,1] built directly from mt19937_64 output, so the
// stream does not depend on the standard library's distribution internals.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : rng_(seed) {}
    double next() {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0,1)
        return 2.0 * u - 1.0;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

GnepProblem random_gnep(int players, int dim_per_player, int degree, bool convex,
                        std::uint64_t seed) {
    if (players < 2 || dim_per_player < 1 || degree < 2)
        throw std::invalid_argument("random_gnep requires N >= 2, n_i >= 1, degree >= 2");
    const int N = players;
    const int ni = dim_per_player;
    const int n = N * ni;
    UniformSource u(seed);

    std::vector<PlayerProblem> ps;
    for (int i = 0; i < N; ++i) {
        PlayerProblem pl;
        pl.dim = ni;
        const int off = i * ni;
        std::vector<int> own(ni), other;
        for (int k = 0; k < ni; ++k) own[k] = off + k;
        for (int v = 0; v < n; ++v)
            if (v < off || v >= off + ni) other.push_back(v);

        // Constraint -x_i'A x_i + x_{-i}'B x_i + c'x - d >= 0, A = R'R.
        Eigen::MatrixXd R(ni, ni);
        for (int r = 0; r < ni; ++r)
            for (int s = 0; s < ni; ++s) R(r, s) = u.next();
        Eigen::MatrixXd A = R.transpose() * R;
        Eigen::MatrixXd B(n - ni, ni);
        for (int r = 0; r < n - ni; ++r)
            for (int s = 0; s < ni; ++s) B(r, s) = u.next();
        std::vector<double> cvec(n);
        for (int v = 0; v < n; ++v) cvec[v] = u.next();
        const double d = u.next();

        SparsePolynomial g(n);
        for (int r = 0; r < ni; ++r)
            for (int s = 0; s < ni; ++s) {
                Monomial mono(n, 0);
                mono[own[r]] += 1;
                mono[own[s]] += 1;
                g.add_term(mono, -A(r, s));
            }
        for (int r = 0; r < n - ni; ++r)
            for (int s = 0; s < ni; ++s) {
                Monomial mono(n, 0);
                mono[other[r]] += 1;
                mono[own[s]] += 1;
                g.add_term(mono, B(r, s));
            }
        for (int v = 0; v < n; ++v) {
            Monomial mono(n, 0);
            mono[v] = 1;
            g.add_term(mono, cvec[v]);
        }
        g.add_term(Monomial(n, 0), -d);
        pl.constraints.push_back({std::move(g), ConstraintKind::Inequality});

        if (convex) {
            // f_i = x_i' Sigma x_i + x_{-i}' Lambda x_i + c'x, Sigma = T'T.
            Eigen::MatrixXd T(ni, ni);
            for (int r = 0; r < ni; ++r)
                for (int s = 0; s < ni; ++s) T(r, s) = u.next();
            Eigen::MatrixXd Sigma = T.transpose() * T;
            Eigen::MatrixXd L(n - ni, ni);
            for (int r = 0; r < n - ni; ++r)
                for (int s = 0; s < ni; ++s) L(r, s) = u.next();
            std::vector<double> cobj(n);
            for (int v = 0; v < n; ++v) cobj[v] = u.next();

            SparsePolynomial f(n);
            for (int r = 0; r < ni; ++r)
                for (int s = 0; s < ni; ++s) {
                    Monomial mono(n, 0);
                    mono[own[r]] += 1;
                    mono[own[s]] += 1;
                    f.add_term(mono, Sigma(r, s));
                }
            for (int r = 0; r < n - ni; ++r)
                for (int s = 0; s < ni; ++s) {
                    Monomial mono(n, 0);
                    mono[other[r]] += 1;
                    mono[own[s]] += 1;
                    f.add_term(mono, L(r, s));
                }
            for (int v = 0; v < n; ++v) {
                Monomial mono(n, 0);
                mono[v] = 1;
                f.add_term(mono, cobj[v]);
            }
            pl.objective = std::move(f);
        } else {
            // Dense degree-d objective with uniform coefficients.
            SparsePolynomial f(n);
            for (const Monomial& mono : monomials_up_to(n, degree)) f.add_term(mono, u.next());
            pl.objective = std::move(f);
        }
        ps.push_back(std::move(pl));
    }
    return GnepProblem(std::move(ps));
}

}  // namespace gnesolve
