#include <cstdlib>
#include <cstdio>
#include "gnesolve/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace gnesolve {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Blocks {
    std::vector<MatrixXd> m;

    double dot(const Blocks& o) const {
        double s = 0.0;
        for (std::size_t b = 0; b < m.size(); ++b) s += (m[b].array() * o.m[b].array()).sum();
        return s;
    }
    double max_abs() const {
        double s = 0.0;
        for (const auto& x : m) if (x.size()) s = std::max(s, x.cwiseAbs().maxCoeff());
        return s;
    }
};

void validate(const LmiProgram& prog) {
    const int p = prog.num_vars();
    for (const auto& b : prog.blocks) {
        if (b.size < 1) throw std::invalid_argument("sdp: block size must be >= 1");
        if (b.constant.size() && (b.constant.rows() != b.size || b.constant.cols() != b.size))
            throw std::invalid_argument("sdp: constant term dimension mismatch");
        if (b.constant.size() && !b.constant.isApprox(b.constant.transpose(), 1e-12))
            throw std::invalid_argument("sdp: constant term not symmetric");
        for (const auto& t : b.terms) {
            if (t.var < 0 || t.var >= p) throw std::invalid_argument("sdp: bad variable index");
            if (t.row < 0 || t.col < t.row || t.col >= b.size)
                throw std::invalid_argument("sdp: bad entry position");
        }
    }
    if (prog.eq_lhs.rows() != prog.eq_rhs.size() ||
        (prog.eq_lhs.rows() > 0 && prog.eq_lhs.cols() != p))
        throw std::invalid_argument("sdp: equality dimension mismatch");
}

// F(y) per block.
Blocks pencil_value(const LmiProgram& prog, const VectorXd& y) {
    Blocks X;
    for (const auto& b : prog.blocks) {
        MatrixXd M = b.constant.size() ? b.constant : MatrixXd::Zero(b.size, b.size);
        for (const auto& t : b.terms) {
            M(t.row, t.col) += y[t.var] * t.value;
            if (t.row != t.col) M(t.col, t.row) += y[t.var] * t.value;
        }
        X.m.push_back(std::move(M));
    }
    return X;
}

// adjoint: out_a = sum_b <Fa_b, Z_b>
VectorXd pencil_adjoint(const LmiProgram& prog, const Blocks& Z) {
    VectorXd out = VectorXd::Zero(prog.num_vars());
    for (std::size_t b = 0; b < prog.blocks.size(); ++b) {
        for (const auto& t : prog.blocks[b].terms) {
            out[t.var] += t.value * Z.m[b](t.row, t.col);
            if (t.row != t.col) out[t.var] += t.value * Z.m[b](t.col, t.row);
        }
    }
    return out;
}

// largest alpha in (0, 1] with X + alpha D psd (via Cholesky of X)
double max_step(const MatrixXd& X, const MatrixXd& D) {
    Eigen::LLT<MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const MatrixXd L = llt.matrixL();
    const MatrixXd S =
        L.triangularView<Eigen::Lower>().solve(
            L.triangularView<Eigen::Lower>().solve(D).transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (S + S.transpose()));
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return 1.0;
    return std::min(1.0, -1.0 / lmin);
}

}  // namespace

SdpOutcome solve(const LmiProgram& prog, const SdpOptions& opts) {
    validate(prog);
    const int p = prog.num_vars();
    const int nb = static_cast<int>(prog.blocks.size());

    // Drop numerically dependent equality rows once, up front.
    MatrixXd E;
    VectorXd e;
    {
        const MatrixXd& E0 = prog.eq_lhs;
        if (E0.rows() > 0) {
            Eigen::ColPivHouseholderQR<MatrixXd> qr(E0.transpose());
            const int rank = static_cast<int>(qr.rank());
            // rows of E spanning the row space: use the QR permutation
            std::vector<int> keep;
            for (int i = 0; i < rank; ++i) keep.push_back(static_cast<int>(qr.colsPermutation().indices()[i]));
            E.resize(rank, p);
            e.resize(rank);
            for (int i = 0; i < rank; ++i) {
                E.row(i) = E0.row(keep[i]);
                e[i] = prog.eq_rhs[keep[i]];
            }
        } else {
            E.resize(0, p);
            e.resize(0);
        }
    }
    const int q = static_cast<int>(E.rows());

    int K = 0;
    for (const auto& b : prog.blocks) K += b.size;

    // start: y solving Ey=e in least squares, X = sI, Z = I, mu = 0
    VectorXd y = VectorXd::Zero(p);
    if (q > 0) y = E.colPivHouseholderQr().solve(e);
    VectorXd mu = VectorXd::Zero(q);
    Blocks X = pencil_value(prog, y);
    double x0 = 1.0;
    for (const auto& m : X.m) x0 = std::max(x0, m.cwiseAbs().maxCoeff());
    Blocks Z;
    for (int b = 0; b < nb; ++b) {
        X.m[b] = x0 * MatrixXd::Identity(prog.blocks[b].size, prog.blocks[b].size);
        Z.m.push_back(MatrixXd::Identity(prog.blocks[b].size, prog.blocks[b].size));
    }

    SdpOutcome out;
    const double cnorm = 1.0 + prog.objective.cwiseAbs().maxCoeff();
    // latest residuals, for classifying a stalled exit
    double last_relgap = 1e300, last_rx = 1e300, last_rd = 1e300, last_re = 1e300;
    // A stall with near-feasible iterates and a closed gap is convergence in
    // all but name (interior-point steps collapse at the boundary).
    auto stalled_outcome = [&]() -> SdpOutcome {
        if (std::getenv("GNESOLVE_SDP_DEBUG"))
            std::fprintf(stderr, "sdp stall: relgap=%.2e rx=%.2e re=%.2e rd=%.2e\n", last_relgap,
                         last_rx, last_re, last_rd);
        // The objective comes from the primal side, so it stays trustworthy
        // when X and the equalities are tight and the gap is closed, even if
        // the dual residual trails by a few orders.
        if (last_relgap <= 100.0 * opts.gap_tol && last_rx <= 100.0 * opts.feas_tol * (1.0 + x0) &&
            last_re <= 100.0 * opts.feas_tol && last_rd <= 1e-3 * cnorm)
            out.status = SdpStatus::Optimal;
        else
            out.status = SdpStatus::Stalled;
        return out;
    };

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        out.iterations = iter;
        const Blocks Fy = pencil_value(prog, y);
        Blocks RX;  // F(y) - X
        for (int b = 0; b < nb; ++b) RX.m.push_back(Fy.m[b] - X.m[b]);
        const VectorXd rd = prog.objective - pencil_adjoint(prog, Z) -
                            (q > 0 ? VectorXd(E.transpose() * mu) : VectorXd::Zero(p));
        const VectorXd re = q > 0 ? VectorXd(e - E * y) : VectorXd();
        const double nu = X.dot(Z) / K;

        const double pobj = prog.objective.dot(y);
        double dobj = (q > 0 ? e.dot(mu) : 0.0);
        for (int b = 0; b < nb; ++b)
            if (prog.blocks[b].constant.size())
                dobj -= (prog.blocks[b].constant.array() * Z.m[b].array()).sum();

        const double rx_norm = RX.max_abs();
        const double rd_norm = rd.cwiseAbs().maxCoeff();
        const double re_norm = q > 0 ? re.cwiseAbs().maxCoeff() : 0.0;
        const double gap = X.dot(Z);
        const double relgap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));

        out.y = y;
        out.objective = pobj;
        out.dual_value = dobj;
        out.gap = gap;
        last_relgap = relgap;
        last_rx = rx_norm;
        last_rd = rd_norm;
        last_re = re_norm;

        const bool feas = rx_norm <= opts.feas_tol * (1.0 + x0) && re_norm <= opts.feas_tol &&
                          rd_norm <= opts.feas_tol * cnorm;
        if (feas && relgap <= opts.gap_tol) {
            out.status = SdpStatus::Optimal;
            return out;
        }
        if (pobj < -opts.unbounded_threshold && rx_norm <= 1e-6 * (1.0 + x0) &&
            re_norm <= 1e-6) {
            out.status = SdpStatus::Unbounded;
            return out;
        }
        if (dobj > opts.unbounded_threshold && rd_norm <= 1e-6 * cnorm) {
            out.status = SdpStatus::Infeasible;
            return out;
        }

        // NT scaling per block: W Z W = X, plus W^{-1}.
        std::vector<MatrixXd> Winv(nb), Xinv(nb);
        bool scale_ok = true;
        for (int b = 0; b < nb; ++b) {
            Eigen::LLT<MatrixXd> llt(X.m[b]);
            if (llt.info() != Eigen::Success) { scale_ok = false; break; }
            const MatrixXd L = llt.matrixL();
            const MatrixXd M = L.transpose() * Z.m[b] * L;
            Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (M + M.transpose()));
            if (eig.eigenvalues().minCoeff() <= 0.0) { scale_ok = false; break; }
            const VectorXd lam_q = eig.eigenvalues().array().sqrt().matrix();
            const MatrixXd Q = eig.eigenvectors();
            // W^{-1} = L^{-T} Q diag(sqrt(lam)) Q^T L^{-1}
            const MatrixXd A = L.transpose()
                                   .triangularView<Eigen::Upper>()
                                   .solve(Q * lam_q.asDiagonal() * Q.transpose());
            Winv[b] = A * L.triangularView<Eigen::Lower>().solve(
                              MatrixXd::Identity(prog.blocks[b].size, prog.blocks[b].size));
            Winv[b] = 0.5 * (Winv[b] + Winv[b].transpose());
            Xinv[b] = llt.solve(MatrixXd::Identity(prog.blocks[b].size, prog.blocks[b].size));
        }
        if (!scale_ok) return stalled_outcome();

        // Schur complement H_{ab} = sum_b <Fa, W^{-1} Fb W^{-1}>
        // via T_b = W^{-1} Fb W^{-1} built from outer products of W^{-1} columns.
        MatrixXd H = MatrixXd::Zero(p, p);
        std::vector<std::vector<int>> touch(nb);  // vars per block
        for (int b = 0; b < nb; ++b) {
            std::vector<char> seen(p, 0);
            for (const auto& t : prog.blocks[b].terms)
                if (!seen[t.var]) {
                    seen[t.var] = 1;
                    touch[b].push_back(t.var);
                }
        }
        std::vector<std::vector<const LmiProgram::Entry*>> by_var(p);
        for (int b = 0; b < nb; ++b) {
            for (auto& v : by_var) v.clear();
            for (const auto& t : prog.blocks[b].terms) by_var[t.var].push_back(&t);
            const int d = prog.blocks[b].size;
            MatrixXd T(d, d);
            for (int beta : touch[b]) {
                T.setZero();
                for (const auto* t : by_var[beta]) {
                    T += t->value * (Winv[b].col(t->row) * Winv[b].row(t->col));
                    if (t->row != t->col)
                        T += t->value * (Winv[b].col(t->col) * Winv[b].row(t->row));
                }
                for (int alpha : touch[b]) {
                    if (alpha > beta) continue;
                    double s = 0.0;
                    for (const auto* t : by_var[alpha]) {
                        s += t->value * T(t->row, t->col);
                        if (t->row != t->col) s += t->value * T(t->col, t->row);
                    }
                    H(alpha, beta) += s;
                }
            }
        }
        H = H.selfadjointView<Eigen::Upper>();

        // KKT matrix [[H, E'], [E, 0]] shared by predictor and corrector.
        MatrixXd Kmat = MatrixXd::Zero(p + q, p + q);
        Kmat.topLeftCorner(p, p) = H;
        if (q > 0) {
            Kmat.topRightCorner(p, q) = E.transpose();
            Kmat.bottomLeftCorner(q, p) = E;
        }
        Eigen::PartialPivLU<MatrixXd> Klu(Kmat);

        auto solve_direction = [&](double sigma, Blocks& dX, Blocks& dZ, VectorXd& dy,
                                   VectorXd& dmu) {
            Blocks Rc;  // sigma nu X^{-1} - Z  (+ W^{-1} RX W^{-1} folded below)
            for (int b = 0; b < nb; ++b)
                Rc.m.push_back(sigma * nu * Xinv[b] - Z.m[b] - Winv[b] * RX.m[b] * Winv[b]);
            VectorXd rhs(p + q);
            rhs.head(p) = pencil_adjoint(prog, Rc) - rd;
            if (q > 0) rhs.tail(q) = re;
            VectorXd sol = Klu.solve(rhs);
            sol += Klu.solve(rhs - Kmat * sol);  // one round of iterative refinement
            dy = sol.head(p);
            dmu = -sol.tail(q);
            dX.m.clear();
            dZ.m.clear();
            const Blocks Fdy = [&] {
                Blocks f;
                for (int b = 0; b < nb; ++b) {
                    MatrixXd M = MatrixXd::Zero(prog.blocks[b].size, prog.blocks[b].size);
                    for (const auto& t : prog.blocks[b].terms) {
                        M(t.row, t.col) += dy[t.var] * t.value;
                        if (t.row != t.col) M(t.col, t.row) += dy[t.var] * t.value;
                    }
                    f.m.push_back(std::move(M));
                }
                return f;
            }();
            for (int b = 0; b < nb; ++b) {
                MatrixXd dx = RX.m[b] + Fdy.m[b];
                MatrixXd dz = sigma * nu * Xinv[b] - Z.m[b] - Winv[b] * dx * Winv[b];
                dX.m.push_back(0.5 * (dx + dx.transpose()));
                dZ.m.push_back(0.5 * (dz + dz.transpose()));
            }
        };

        Blocks dX, dZ;
        VectorXd dy, dmu;
        solve_direction(0.0, dX, dZ, dy, dmu);

        // Ray certificate: a normalized direction with c'dy < 0, E dy ~ 0 and
        // a psd pencil movement proves the primal improves forever.
        if (iter >= 3) {
            const double dn = dy.norm();
            if (dn > 1e-12 && prog.objective.dot(dy) < -1e-7 * dn * cnorm &&
                (q == 0 || (E * dy).norm() <= 1e-7 * dn)) {
                bool psd_ray = true;
                for (int b = 0; b < nb && psd_ray; ++b) {
                    MatrixXd Fdy = MatrixXd::Zero(prog.blocks[b].size, prog.blocks[b].size);
                    for (const auto& t : prog.blocks[b].terms) {
                        Fdy(t.row, t.col) += dy[t.var] * t.value;
                        if (t.row != t.col) Fdy(t.col, t.row) += dy[t.var] * t.value;
                    }
                    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Fdy / dn);
                    if (eig.eigenvalues().minCoeff() < -1e-9) psd_ray = false;
                }
                if (psd_ray) {
                    out.status = SdpStatus::Unbounded;
                    return out;
                }
            }
        }

        double ap = 1.0, ad = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(X.m[b], dX.m[b]));
            ad = std::min(ad, max_step(Z.m[b], dZ.m[b]));
        }
        double nu_aff = 0.0;
        for (int b = 0; b < nb; ++b)
            nu_aff += ((X.m[b] + ap * dX.m[b]).array() * (Z.m[b] + ad * dZ.m[b]).array()).sum();
        nu_aff = std::max(nu_aff / K, 0.0);
        double sigma = std::pow(nu_aff / nu, 3);
        if (std::min(ap, ad) < 0.1) sigma = std::max(sigma, 0.8);  // recenter when blocked
        sigma = std::min(std::max(sigma, 1e-8), 0.95);

        solve_direction(sigma, dX, dZ, dy, dmu);
        ap = 1.0;
        ad = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(X.m[b], dX.m[b]));
            ad = std::min(ad, max_step(Z.m[b], dZ.m[b]));
        }
        ap = std::min(1.0, 0.98 * ap);
        ad = std::min(1.0, 0.98 * ad);
        if (ap < 1e-10 && ad < 1e-10) return stalled_outcome();

        y += ap * dy;
        for (int b = 0; b < nb; ++b) {
            X.m[b] += ap * dX.m[b];
            X.m[b] = 0.5 * (X.m[b] + X.m[b].transpose());
            Z.m[b] += ad * dZ.m[b];
            Z.m[b] = 0.5 * (Z.m[b] + Z.m[b].transpose());
        }
        if (q > 0) mu += ad * dmu;
    }
    return stalled_outcome();
}

}  // namespace gnesolve
