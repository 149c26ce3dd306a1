#include "gnesolve/momentsos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace gnesolve {
namespace {

// index lookup for monomials_up_to(nvars, deg)
struct MonomialIndex {
    std::vector<Monomial> list;
    std::map<Monomial, int, GradedLexLess> pos;

    MonomialIndex(int nvars, int deg) : list(monomials_up_to(nvars, deg)) {
        for (int i = 0; i < static_cast<int>(list.size()); ++i) pos[list[i]] = i;
    }
    int operator()(const Monomial& a) const {
        auto it = pos.find(a);
        if (it == pos.end()) throw std::out_of_range("monomial outside the tms degree");
        return it->second;
    }
};

Monomial mono_sum(const Monomial& a, const Monomial& b) {
    Monomial c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

int rank_by_svd(const Eigen::MatrixXd& M, double rank_tol) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * sv(0)) ++r;
    return r;
}

}  // namespace

double tms_pairing(const SparsePolynomial& p, const Tms& y) {
    MonomialIndex idx(y.nvars, y.degree);
    double s = 0.0;
    for (const auto& [a, c] : p.terms()) s += c.real() * y.values[idx(a)];
    return s;
}

Eigen::MatrixXd moment_matrix(const Tms& y, int t) {
    MonomialIndex idx(y.nvars, y.degree);
    const auto basis = monomials_up_to(y.nvars, t);
    const int b = static_cast<int>(basis.size());
    Eigen::MatrixXd M(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = i; j < b; ++j) M(i, j) = M(j, i) = y.values[idx(mono_sum(basis[i], basis[j]))];
    return M;
}

Eigen::MatrixXd localizing_matrix(const SparsePolynomial& q, const Tms& y, int t) {
    MonomialIndex idx(y.nvars, y.degree);
    const auto basis = monomials_up_to(y.nvars, t);
    const int b = static_cast<int>(basis.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = i; j < b; ++j) {
            double s = 0.0;
            for (const auto& [a, c] : q.terms())
                s += c.real() * y.values[idx(mono_sum(a, mono_sum(basis[i], basis[j])))];
            M(i, j) = M(j, i) = s;
        }
    return M;
}

CheckingProblem make_checking_problem(const GnepProblem& prob, int player,
                                      const Eigen::VectorXd& u) {
    if (u.size() != prob.total_dim()) throw std::invalid_argument("anchor dimension mismatch");
    CheckingProblem cp;
    cp.player = player;
    cp.ni = prob.x_dim(player);
    cp.anchor = u.segment(prob.x_offset(player), cp.ni);

    // fix everyone else's strategy at u_{-i}
    std::vector<int> fixed;
    std::vector<double> values;
    for (int v = 0; v < prob.total_dim(); ++v) {
        if (v < prob.x_offset(player) || v >= prob.x_offset(player) + cp.ni) {
            fixed.push_back(v);
            values.push_back(u[v]);
        }
    }
    auto restrict_poly = [&](const SparsePolynomial& p) {
        if (fixed.empty()) return p;
        return restrict_variables(p, fixed, values);
    };

    SparsePolynomial f = restrict_poly(prob.player(player).objective);
    std::vector<double> ui(cp.anchor.data(), cp.anchor.data() + cp.ni);
    cp.theta = f - SparsePolynomial::constant(cp.ni, evaluate_real(f, ui));

    int max_half_deg = std::max(1, (cp.theta.degree() + 1) / 2);
    for (const auto& c : prob.player(player).constraints) {
        SparsePolynomial g = restrict_poly(c.g);
        if (g.is_zero()) {
            if (c.kind == ConstraintKind::Equality) continue;  // trivially active, no content
            continue;
        }
        max_half_deg = std::max(max_half_deg, (g.degree() + 1) / 2);
        if (c.kind == ConstraintKind::Equality)
            cp.equalities.push_back(std::move(g));
        else
            cp.inequalities.push_back(std::move(g));
    }
    cp.base_order = max_half_deg;
    return cp;
}

LmiProgram moment_relaxation(const CheckingProblem& cp, int order) {
    if (order < cp.base_order) throw std::invalid_argument("order below the base order");
    const int n = cp.ni;
    MonomialIndex idx(n, 2 * order);
    const int p = static_cast<int>(idx.list.size());

    LmiProgram prog;
    prog.objective = Eigen::VectorXd::Zero(p);
    for (const auto& [a, c] : cp.theta.terms()) prog.objective[idx(a)] += c.real();

    // moment matrix M_order[y]
    {
        const auto basis = monomials_up_to(n, order);
        LmiProgram::Block blk;
        blk.size = static_cast<int>(basis.size());
        blk.constant = Eigen::MatrixXd::Zero(blk.size, blk.size);
        for (int i = 0; i < blk.size; ++i)
            for (int j = i; j < blk.size; ++j)
                blk.terms.push_back({idx(mono_sum(basis[i], basis[j])), i, j, 1.0});
        prog.blocks.push_back(std::move(blk));
    }
    // localizing matrices for inequalities
    for (const auto& g : cp.inequalities) {
        const int t = order - (g.degree() + 1) / 2;
        const auto basis = monomials_up_to(n, t);
        LmiProgram::Block blk;
        blk.size = static_cast<int>(basis.size());
        blk.constant = Eigen::MatrixXd::Zero(blk.size, blk.size);
        for (int i = 0; i < blk.size; ++i)
            for (int j = i; j < blk.size; ++j)
                for (const auto& [a, c] : g.terms())
                    blk.terms.push_back(
                        {idx(mono_sum(a, mono_sum(basis[i], basis[j]))), i, j, c.real()});
        prog.blocks.push_back(std::move(blk));
    }
    // equality localizers pinned to zero, entrywise, plus y_0 = 1
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (const auto& g : cp.equalities) {
        const int t = order - (g.degree() + 1) / 2;
        const auto basis = monomials_up_to(n, t);
        for (int i = 0; i < static_cast<int>(basis.size()); ++i)
            for (int j = i; j < static_cast<int>(basis.size()); ++j) {
                Eigen::VectorXd row = Eigen::VectorXd::Zero(p);
                for (const auto& [a, c] : g.terms())
                    row[idx(mono_sum(a, mono_sum(basis[i], basis[j])))] += c.real();
                rows.push_back(std::move(row));
                rhs.push_back(0.0);
            }
    }
    {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(p);
        row[0] = 1.0;
        rows.push_back(std::move(row));
        rhs.push_back(1.0);
    }
    prog.eq_lhs.resize(static_cast<int>(rows.size()), p);
    prog.eq_rhs.resize(static_cast<int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        prog.eq_lhs.row(static_cast<int>(r)) = rows[r];
        prog.eq_rhs[static_cast<int>(r)] = rhs[r];
    }
    return prog;
}

Tms tms_from_vector(int nvars, int order, const Eigen::VectorXd& y) {
    Tms t;
    t.nvars = nvars;
    t.degree = 2 * order;
    t.values = y;
    return t;
}

std::pair<bool, int> flat_truncation(const Tms& y, int di, int t, double rank_tol) {
    if (t < di || 2 * t > y.degree) throw std::invalid_argument("flat truncation order out of range");
    const int r_hi = rank_by_svd(moment_matrix(y, t), rank_tol);
    const int r_lo = rank_by_svd(moment_matrix(y, t - di), rank_tol);
    return {r_hi == r_lo, r_hi};
}

std::vector<Eigen::VectorXd> extract_minimizers(const CheckingProblem& cp, const Tms& y, int t,
                                                int rank, double vartheta,
                                                const CheckOptions& opts) {
    const int n = y.nvars;
    const auto basis = monomials_up_to(n, t);
    const int b = static_cast<int>(basis.size());
    MonomialIndex idx_t(n, t);
    Eigen::MatrixXd M = moment_matrix(y, t);

    // V V^T ~ M with V of rank many columns
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    Eigen::MatrixXd V(b, rank);
    for (int r = 0; r < rank; ++r) {
        const int src = b - 1 - r;  // eigenvalues ascend
        const double lam = std::max(eig.eigenvalues()(src), 0.0);
        V.col(r) = eig.eigenvectors().col(src) * std::sqrt(lam);
    }

    // column echelon of V^T visiting monomial columns in graded lex order
    Eigen::MatrixXd W = V.transpose();  // rank x b
    std::vector<int> pivots;
    const double scale = std::max(W.cwiseAbs().maxCoeff(), 1e-300);
    int row = 0;
    for (int col = 0; col < b && row < rank; ++col) {
        int best = -1;
        double best_abs = 1e-7 * scale;
        for (int r = row; r < rank; ++r)
            if (std::abs(W(r, col)) > best_abs) {
                best_abs = std::abs(W(r, col));
                best = r;
            }
        if (best < 0) continue;
        W.row(best).swap(W.row(row));
        W.row(row) /= W(row, col);
        for (int r = 0; r < rank; ++r)
            if (r != row) W.row(r) -= W(r, col) * W.row(row);
        pivots.push_back(col);
        ++row;
    }
    if (row < rank) throw ExtractionFailed();

    // multiplication operators: column j of N_v is the representation of
    // x_v * basis[pivots[j]] in the pivot basis
    std::vector<Eigen::MatrixXd> N(n, Eigen::MatrixXd(rank, rank));
    for (int v = 0; v < n; ++v) {
        for (int j = 0; j < rank; ++j) {
            Monomial m = basis[pivots[j]];
            m[v] += 1;
            if (total_degree(m) > t) throw ExtractionFailed();
            N[v].col(j) = W.col(idx_t(m));
        }
    }

    std::mt19937 rng(987);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    Eigen::MatrixXd Nmix = Eigen::MatrixXd::Zero(rank, rank);
    double wsum = 0.0;
    for (int v = 0; v < n; ++v) {
        const double w = dist(rng);
        Nmix += w * N[v];
        wsum += w;
    }
    Nmix /= wsum;

    Eigen::RealSchur<Eigen::MatrixXd> schur(Nmix);
    const Eigen::MatrixXd& Q = schur.matrixU();

    std::vector<Eigen::VectorXd> points;
    for (int j = 0; j < rank; ++j) {
        Eigen::VectorXd pt(n);
        for (int v = 0; v < n; ++v) pt[v] = Q.col(j).dot(N[v] * Q.col(j));
        points.push_back(std::move(pt));
    }

    // re-verify: feasibility and value consistency
    for (const auto& pt : points) {
        std::vector<double> xv(pt.data(), pt.data() + n);
        for (const auto& g : cp.equalities)
            if (std::abs(evaluate_real(g, xv)) > opts.feas_tol) throw ExtractionFailed();
        for (const auto& g : cp.inequalities)
            if (evaluate_real(g, xv) < -opts.feas_tol) throw ExtractionFailed();
        const double th = evaluate_real(cp.theta, xv);
        if (std::abs(th - vartheta) > opts.value_tol * (1.0 + std::abs(vartheta)))
            throw ExtractionFailed();
    }
    return points;
}

VerificationOutcome solve_checking(const CheckingProblem& cp, const CheckOptions& opts) {
    VerificationOutcome out;
    const int top =
        std::max(cp.base_order, std::min(cp.base_order + opts.max_order_offset, opts.order_cap));
    for (int order = cp.base_order; order <= top; ++order) {
        out.final_order = order;
        SdpOutcome sdp_out;
        try {
            sdp_out = solve(moment_relaxation(cp, order), opts.sdp);
        } catch (const std::exception&) {
            continue;  // malformed relaxation at this order; try the next
        }
        if (sdp_out.status == SdpStatus::Unbounded) {
            out.status = CheckStatus::Negative;
            out.value = -std::numeric_limits<double>::infinity();
            return out;
        }
        if (sdp_out.status != SdpStatus::Optimal) continue;

        const double vartheta = sdp_out.objective;
        out.trace.push_back(vartheta);
        if (vartheta >= -opts.certify_tol) {
            out.status = CheckStatus::NonnegativeCertified;
            out.value = 0.0;
            return out;
        }
        Tms y = tms_from_vector(cp.ni, order, sdp_out.y);
        for (int t = cp.base_order; t <= order; ++t) {
            auto [flat, rank] = flat_truncation(y, cp.base_order, t, opts.rank_tol);
            if (!flat) continue;
            try {
                out.minimizers = extract_minimizers(cp, y, t, rank, vartheta, opts);
                out.status = CheckStatus::Negative;
                out.value = vartheta;
                return out;
            } catch (const ExtractionFailed&) {
                continue;
            }
        }
    }
    out.status = CheckStatus::Inconclusive;
    return out;
}

std::pair<double, std::vector<Eigen::VectorXd>> kkt_oracle(const CheckingProblem& cp,
                                                           std::uint64_t seed,
                                                           const TrackOptions& topts) {
    PlayerProblem pl;
    pl.dim = cp.ni;
    pl.objective = cp.theta;
    for (const auto& g : cp.equalities) pl.constraints.push_back({g, ConstraintKind::Equality});
    for (const auto& g : cp.inequalities)
        pl.constraints.push_back({g, ConstraintKind::Inequality});
    GnepProblem single({pl});

    auto sol = solve_all(build_complex_kkt(single), seed, topts);
    Tolerances tols;
    auto cls = classify_tuples(single, sol.solutions, tols);

    double best = std::numeric_limits<double>::infinity();
    std::vector<Eigen::VectorXd> argmins;
    for (const auto& tup : cls.tuples) {
        if (!tup.is_real) continue;
        Eigen::VectorXd x(cp.ni);
        for (int i = 0; i < cp.ni; ++i) x[i] = tup.point[i].real();
        std::vector<double> xv(x.data(), x.data() + cp.ni);
        bool feas = true;
        for (const auto& g : cp.equalities)
            if (std::abs(evaluate_real(g, xv)) > tols.feas_tol) feas = false;
        for (const auto& g : cp.inequalities)
            if (evaluate_real(g, xv) < -tols.feas_tol) feas = false;
        if (!feas) continue;
        const double th = evaluate_real(cp.theta, xv);
        if (th < best - 1e-8) {
            best = th;
            argmins.clear();
            argmins.push_back(std::move(x));
        } else if (std::abs(th - best) <= 1e-8) {
            argmins.push_back(std::move(x));
        }
    }
    if (!std::isfinite(best)) throw NoFeasibleKktPoint();
    return {best, argmins};
}

}  // namespace gnesolve
