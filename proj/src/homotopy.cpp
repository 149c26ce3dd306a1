#include "gnesolve/homotopy.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

namespace gnesolve {
namespace {

constexpr double kPi = 3.14159265358979323846;

// log-polar complex number: exp(logmag + i*arg)
struct Polar {
    double logmag = 0.0;
    double arg = 0.0;

    Polar& operator-=(const Polar& o) {
        logmag -= o.logmag;
        arg -= o.arg;
        return *this;
    }
    Polar scaled(long long q) const {
        return {logmag * static_cast<double>(q), arg * static_cast<double>(q)};
    }
    Complex value() const {
        if (std::abs(logmag) > 200.0) throw StartSystemOverflow();
        return std::polar(std::exp(logmag), arg);
    }
};

Polar to_polar(Complex z) { return {std::log(std::abs(z)), std::arg(z)}; }

// Evaluates H at (y, sigma) with t = exp(sigma), and optionally dH/dy and
// dH/dsigma. t^s = exp(s*sigma) stays well defined along complex arcs in
// sigma. Partials reuse the term value through division by y_i, with a
// direct product fallback for tiny y_i.
void eval_homotopy(const CellHomotopy& H, const Eigen::VectorXcd& y, Complex sigma,
                   Eigen::VectorXcd* val, Eigen::MatrixXcd* jac, Eigen::VectorXcd* dsigma) {
    const int k = H.dim;
    if (val) val->setZero(k);
    if (jac) jac->setZero(k, k);
    if (dsigma) dsigma->setZero(k);
    for (int j = 0; j < k; ++j) {
        for (const auto& term : H.eqs[j]) {
            const Complex ts =
                term.s == 0.0 ? Complex(1.0) : std::exp(term.s * sigma);
            Complex v = term.c;
            for (int i = 0; i < k; ++i)
                for (int e = 0; e < term.a[i]; ++e) v *= y[i];
            const Complex vt = v * ts;
            if (dsigma && term.s != 0.0) (*dsigma)[j] += vt * term.s;
            if (vt == Complex(0.0)) continue;
            if (val) (*val)[j] += vt;
            if (jac) {
                for (int i = 0; i < k; ++i) {
                    if (term.a[i] == 0) continue;
                    if (std::abs(y[i]) > 1e-100) {
                        (*jac)(j, i) += vt * static_cast<double>(term.a[i]) / y[i];
                    } else {
                        Complex w = term.c * ts * static_cast<double>(term.a[i]);
                        for (int l = 0; l < k; ++l) {
                            const int e = l == i ? term.a[l] - 1 : term.a[l];
                            for (int p = 0; p < e; ++p) w *= y[l];
                        }
                        (*jac)(j, i) += w;
                    }
                }
            }
        }
    }
}

void eval_system(const PolynomialSystem& sys, const Eigen::VectorXcd& y, Eigen::VectorXcd* val,
                 Eigen::MatrixXcd* jac) {
    const int k = sys.ambient_dim;
    if (val) val->setZero(k);
    if (jac) jac->setZero(k, k);
    for (int j = 0; j < static_cast<int>(sys.polys.size()); ++j) {
        for (const auto& [a, c] : sys.polys[j].terms()) {
            Complex v = c;
            for (int i = 0; i < k; ++i)
                for (int e = 0; e < a[i]; ++e) v *= y[i];
            if (val) (*val)[j] += v;
            if (jac) {
                for (int i = 0; i < k; ++i) {
                    if (a[i] == 0) continue;
                    if (std::abs(y[i]) > 1e-100) {
                        (*jac)(j, i) += v * static_cast<double>(a[i]) / y[i];
                    } else {
                        Complex w = c * static_cast<double>(a[i]);
                        for (int l = 0; l < k; ++l) {
                            const int e = l == i ? a[l] - 1 : a[l];
                            for (int p = 0; p < e; ++p) w *= y[l];
                        }
                        (*jac)(j, i) += w;
                    }
                }
            }
        }
    }
}

double max_norm(const Eigen::VectorXcd& v) {
    double m = 0.0;
    for (int i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

bool relative_close(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
    const double d = (a - b).norm();
    return d <= tol * (1.0 + std::min(a.norm(), b.norm()));
}

}  // namespace

CellHomotopy build_cell_homotopy(const PolynomialSystem& target,
                                 const std::vector<std::vector<Monomial>>& supports,
                                 const Lifting& lifting, const MixedCell& cell,
                                 double exponent_cap) {
    const int k = target.ambient_dim;
    CellHomotopy H;
    H.dim = k;
    H.eqs.resize(k);

    double min_pos = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
        const auto [p, q] = cell.edges[j];
        double base = lifting.values[j][p];
        for (int v = 0; v < k; ++v) base += cell.gamma[v] * supports[j][p][v];
        for (int r = 0; r < static_cast<int>(supports[j].size()); ++r) {
            const Complex c = target.polys[j].coeff(supports[j][r]);
            if (c == Complex(0.0)) continue;  // augmented origin without a perturbation
            double s = lifting.values[j][r] - base;
            for (int v = 0; v < k; ++v) s += cell.gamma[v] * supports[j][r][v];
            if (r == p || r == q) s = 0.0;
            if (s < 0.0) s = 0.0;  // numerically tied to the edge level
            H.eqs[j].push_back({c, supports[j][r], s});
            if (s > 0.0) min_pos = std::min(min_pos, s);
        }
    }
    if (std::isfinite(min_pos)) {
        for (auto& eq : H.eqs)
            for (auto& t : eq)
                if (t.s > 0.0) t.s = std::min(t.s / min_pos, exponent_cap);
    }
    return H;
}

std::vector<StartSolution> solve_start_system(const MixedCell& cell,
                                              const PolynomialSystem& target,
                                              const std::vector<std::vector<Monomial>>& supports,
                                              int cell_id) {
    const int k = target.ambient_dim;
    // Binomial system: c_p y^p + c_q y^q = 0  =>  y^(q-p) = -c_p / c_q.
    std::vector<std::vector<long long>> E(k, std::vector<long long>(k));
    std::vector<Polar> beta(k);
    for (int j = 0; j < k; ++j) {
        const auto [p, q] = cell.edges[j];
        for (int v = 0; v < k; ++v)
            E[j][v] = static_cast<long long>(supports[j][q][v]) - supports[j][p][v];
        const Complex cp = target.polys[j].coeff(supports[j][p]);
        const Complex cq = target.polys[j].coeff(supports[j][q]);
        beta[j] = to_polar(-cp / cq);
    }

    // Hermite normal form by unimodular row operations, mirrored on beta.
    for (int col = 0; col < k; ++col) {
        for (;;) {
            int piv = -1;
            for (int r = col; r < k; ++r)
                if (E[r][col] != 0 && (piv < 0 || std::llabs(E[r][col]) < std::llabs(E[piv][col])))
                    piv = r;
            if (piv < 0) throw StartSystemOverflow();  // singular edge matrix
            std::swap(E[col], E[piv]);
            std::swap(beta[col], beta[piv]);
            bool clean = true;
            for (int r = col + 1; r < k; ++r) {
                if (E[r][col] == 0) continue;
                const long long f = E[r][col] / E[col][col];
                if (f != 0) {
                    for (int v = 0; v < k; ++v) E[r][v] -= f * E[col][v];
                    beta[r] -= beta[col].scaled(f);
                }
                if (E[r][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (E[col][col] < 0) {
            for (int v = 0; v < k; ++v) E[col][v] = -E[col][v];
            beta[col] = beta[col].scaled(-1);
        }
    }

    long long total = 1;
    for (int j = 0; j < k; ++j) total *= E[j][j];
    if (total != cell.volume) throw StartSystemOverflow();  // inconsistent reduction

    // Back substitution: y_j^{d_j} = beta_j / prod_{t>j} y_t^{E[j][t]},
    // enumerated over every root choice, in log-polar coordinates.
    std::vector<StartSolution> out;
    std::vector<long long> choice(k, 0);
    std::vector<Polar> ly(k);
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int j = 0; j < k; ++j) {
            choice[j] = rest % E[j][j];
            rest /= E[j][j];
        }
        for (int j = k - 1; j >= 0; --j) {
            Polar rhs = beta[j];
            for (int t = j + 1; t < k; ++t) rhs -= ly[t].scaled(E[j][t]);
            const double d = static_cast<double>(E[j][j]);
            ly[j].logmag = rhs.logmag / d;
            ly[j].arg = (rhs.arg + 2.0 * kPi * static_cast<double>(choice[j])) / d;
        }
        StartSolution s;
        s.cell_id = cell_id;
        s.z0.resize(k);
        for (int j = 0; j < k; ++j) s.z0[j] = ly[j].value();
        out.push_back(std::move(s));
    }

    // Each binomial must vanish to relative precision at every start point.
    for (const auto& s : out) {
        for (int j = 0; j < k; ++j) {
            const auto [p, q] = cell.edges[j];
            Complex tp = target.polys[j].coeff(supports[j][p]);
            Complex tq = target.polys[j].coeff(supports[j][q]);
            for (int v = 0; v < k; ++v) {
                for (int e = 0; e < supports[j][p][v]; ++e) tp *= s.z0[v];
                for (int e = 0; e < supports[j][q][v]; ++e) tq *= s.z0[v];
            }
            if (std::abs(tp + tq) > 1e-10 * (std::abs(tp) + std::abs(tq)))
                throw StartSystemOverflow();
        }
    }
    return out;
}

namespace {

void validate(const TrackOptions& o) {
    if (o.initial_step <= 0 || o.min_step <= 0 || o.corrector_tol <= 0 || o.divergence_norm <= 0 ||
        o.max_corrector_iters < 1 || o.max_steps < 1 || o.min_step >= o.initial_step)
        throw std::invalid_argument("invalid tracking options");
}

}  // namespace

PathResult track_path(const StartSolution& start, const CellHomotopy& homotopy,
                      const TrackOptions& opts) {
    validate(opts);
    const int k = homotopy.dim;
    PathResult res;
    res.cell_id = start.cell_id;

    // Track in log scale along a complex arc:
    //   sigma(tau) = sigma0 (1 - tau) + i theta 4 tau (1 - tau),  tau in [0,1],
    // so t = exp(sigma) runs from exp(sigma0) ~ 0 to 1. The log scale gives
    // the tiny-coefficient (perturbation) terms, whose influence switches on
    // at t values many orders of magnitude below 1, the same resolution as
    // the O(1) terms. The imaginary detour steers around branch points on
    // the real t segment, where real-coefficient systems love to put them.
    constexpr double kSigma0 = -34.0;
    const double theta = opts.arc_phase;
    const auto sigma_of = [&](double tau) {
        return Complex(kSigma0 * (1.0 - tau), theta * 4.0 * tau * (1.0 - tau));
    };
    const auto dsigma_dtau = [&](double tau) {
        return Complex(-kSigma0, theta * (4.0 - 8.0 * tau));
    };

    Eigen::VectorXcd y = start.z0;
    double tau = 0.0;
    double h = opts.initial_step;
    int ok_streak = 0;

    Eigen::VectorXcd val(k), ds(k), k1(k), k2(k), k3(k), k4(k), ynew(k);
    Eigen::MatrixXcd jac(k, k);

    auto davidenko = [&](const Eigen::VectorXcd& yy, double ta, Eigen::VectorXcd& out) -> bool {
        eval_homotopy(homotopy, yy, sigma_of(ta), nullptr, &jac, &ds);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
        out = lu.solve(-(ds * dsigma_dtau(ta)));
        return out.allFinite();
    };

    auto correct = [&](Eigen::VectorXcd& yy, double ta, int iters, double tol) -> bool {
        for (int it = 0; it < iters; ++it) {
            eval_homotopy(homotopy, yy, sigma_of(ta), &val, &jac, nullptr);
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
            Eigen::VectorXcd delta = lu.solve(-val);
            if (!delta.allFinite()) return false;
            yy += delta;
            if (max_norm(delta) <= tol * (1.0 + max_norm(yy))) return true;
        }
        return false;
    };

    // The binomial start is exact at t=0; settle it onto the path at t(0).
    if (!correct(y, 0.0, 6, opts.corrector_tol)) {
        res.status = PathStatus::Failed;
        res.endpoint = y;
        return res;
    }

    while (res.steps < opts.max_steps) {
        if (max_norm(y) > opts.divergence_norm) {
            res.status = PathStatus::Diverged;
            res.endpoint = y;
            return res;
        }
        if (tau >= 1.0) break;
        h = std::min(h, 1.0 - tau);

        // RK4 predictor on y' = -J^{-1} dH/dtau, then Newton correction
        bool pred_ok = davidenko(y, tau, k1);
        if (pred_ok) pred_ok = davidenko(y + 0.5 * h * k1, tau + 0.5 * h, k2);
        if (pred_ok) pred_ok = davidenko(y + 0.5 * h * k2, tau + 0.5 * h, k3);
        if (pred_ok) pred_ok = davidenko(y + h * k3, tau + h, k4);
        bool accepted = false;
        if (pred_ok) {
            ynew = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            accepted = correct(ynew, tau + h, opts.max_corrector_iters, opts.corrector_tol) &&
                       ynew.allFinite();
        }
        ++res.steps;
        if (accepted) {
            y = ynew;
            tau += h;
            if (++ok_streak >= 5) {
                h = std::min(h * 2.0, 2.0 * opts.initial_step);
                ok_streak = 0;
            }
        } else {
            ok_streak = 0;
            if (h <= opts.min_step) {
                res.status = pred_ok ? PathStatus::Diverged : PathStatus::Failed;
                res.endpoint = y;
                return res;
            }
            h = std::max(h * 0.5, opts.min_step);
        }
    }
    if (tau < 1.0) {
        res.status = PathStatus::Diverged;
        res.endpoint = y;
        return res;
    }

    // polish against the (perturbed) target H(., t=1)
    for (int it = 0; it < 10; ++it) {
        eval_homotopy(homotopy, y, Complex(0.0), &val, &jac, nullptr);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
        Eigen::VectorXcd delta = lu.solve(-val);
        if (!delta.allFinite()) break;
        y += delta;
        if (!y.allFinite()) {
            res.status = PathStatus::Failed;
            return res;
        }
        if (max_norm(delta) <= 1e-14 * (1.0 + max_norm(y))) break;
    }
    eval_homotopy(homotopy, y, Complex(0.0), &val, nullptr, nullptr);
    res.status = PathStatus::Converged;
    res.endpoint = y;
    res.residual = max_norm(val);
    return res;
}

namespace {

// Coefficient-segment continuation H(y,t) = (1-t) G(y) + t F(y) along a
// complex arc t(tau) = tau + i theta 4 tau (1-tau). The start system G shares
// the target's supports but has generic coefficients, so its polyhedral
// roots are well separated and the segment avoids the discriminant for
// almost every arc.
PathResult track_segment(const Eigen::VectorXcd& z0, const PolynomialSystem& G,
                         const PolynomialSystem& F, const TrackOptions& opts, int cell_id) {
    const int k = F.ambient_dim;
    PathResult res;
    res.cell_id = cell_id;

    const double theta = opts.arc_phase;
    const auto t_of = [&](double tau) { return Complex(tau, theta * 4.0 * tau * (1.0 - tau)); };
    const auto dt_dtau = [&](double tau) { return Complex(1.0, theta * (4.0 - 8.0 * tau)); };

    Eigen::VectorXcd y = z0;
    double tau = 0.0;
    double h = opts.initial_step;
    int ok_streak = 0;

    Eigen::VectorXcd gval(k), fval(k), val(k), k1(k), k2(k), k3(k), k4(k), ynew(k);
    Eigen::MatrixXcd gjac(k, k), fjac(k, k), jac(k, k);

    auto davidenko = [&](const Eigen::VectorXcd& yy, double ta, Eigen::VectorXcd& out) -> bool {
        const Complex t = t_of(ta);
        eval_system(G, yy, &gval, &gjac);
        eval_system(F, yy, &fval, &fjac);
        jac = (Complex(1.0) - t) * gjac + t * fjac;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
        out = lu.solve(-((fval - gval) * dt_dtau(ta)));
        return out.allFinite();
    };
    auto correct = [&](Eigen::VectorXcd& yy, double ta, int iters, double tol) -> bool {
        const Complex t = t_of(ta);
        for (int it = 0; it < iters; ++it) {
            eval_system(G, yy, &gval, &gjac);
            eval_system(F, yy, &fval, &fjac);
            val = (Complex(1.0) - t) * gval + t * fval;
            jac = (Complex(1.0) - t) * gjac + t * fjac;
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
            Eigen::VectorXcd delta = lu.solve(-val);
            if (!delta.allFinite()) return false;
            yy += delta;
            if (max_norm(delta) <= tol * (1.0 + max_norm(yy))) return true;
        }
        return false;
    };

    while (res.steps < opts.max_steps) {
        if (max_norm(y) > opts.divergence_norm) {
            res.status = PathStatus::Diverged;
            res.endpoint = y;
            return res;
        }
        if (tau >= 1.0) break;
        h = std::min(h, 1.0 - tau);
        bool pred_ok = davidenko(y, tau, k1);
        if (pred_ok) pred_ok = davidenko(y + 0.5 * h * k1, tau + 0.5 * h, k2);
        if (pred_ok) pred_ok = davidenko(y + 0.5 * h * k2, tau + 0.5 * h, k3);
        if (pred_ok) pred_ok = davidenko(y + h * k3, tau + h, k4);
        bool accepted = false;
        if (pred_ok) {
            ynew = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            accepted = correct(ynew, tau + h, opts.max_corrector_iters, opts.corrector_tol) &&
                       ynew.allFinite();
        }
        ++res.steps;
        if (accepted) {
            y = ynew;
            tau += h;
            if (++ok_streak >= 5) {
                h = std::min(h * 2.0, 2.0 * opts.initial_step);
                ok_streak = 0;
            }
        } else {
            ok_streak = 0;
            if (h <= opts.min_step) {
                res.status = pred_ok ? PathStatus::Diverged : PathStatus::Failed;
                res.endpoint = y;
                return res;
            }
            h = std::max(h * 0.5, opts.min_step);
        }
    }
    if (tau < 1.0) {
        res.status = PathStatus::Diverged;
        res.endpoint = y;
        return res;
    }
    double rres = 0.0;
    y = newton_refine(F, y, 10, 1e-14, &rres);
    res.status = PathStatus::Converged;
    res.endpoint = y;
    res.residual = rres;
    return res;
}

}  // namespace

Eigen::VectorXcd newton_refine(const PolynomialSystem& sys, Eigen::VectorXcd y, int max_iters,
                               double tol, double* residual_out) {
    const int k = sys.ambient_dim;
    Eigen::VectorXcd val(k), best = y;
    Eigen::MatrixXcd jac(k, k);
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= max_iters; ++it) {
        eval_system(sys, y, &val, &jac);
        const double r = max_norm(val);
        if (r < best_res && y.allFinite()) {
            best_res = r;
            best = y;
        }
        if (it == max_iters) break;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
        Eigen::VectorXcd delta = lu.solve(-val);
        if (!delta.allFinite()) break;
        y += delta;
        if (!y.allFinite()) break;
        if (max_norm(delta) <= tol * (1.0 + max_norm(y))) {
            eval_system(sys, y, &val, nullptr);
            const double r2 = max_norm(val);
            if (r2 < best_res && y.allFinite()) {
                best_res = r2;
                best = y;
            }
            break;
        }
    }
    if (residual_out) *residual_out = best_res;
    return best;
}

SolveAllResult solve_all(const PolynomialSystem& target, std::uint64_t seed,
                         const TrackOptions& opts) {
    const auto t_begin = std::chrono::steady_clock::now();
    validate(opts);
    if (!target.is_square()) throw std::invalid_argument("solve_all needs a square system");
    const int k = target.ambient_dim;

    SolveAllResult best;
    bool have_best = false;
    for (int attempt = 0; attempt < 5; ++attempt) {
        SolveAllResult result;
        std::mt19937_64 rng(seed ^ (0xabcd1234ULL + attempt));
        auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

        // Perturb every constant term by a random complex of magnitude
        // eps_pert; endpoints are refined against the unperturbed target
        // afterwards.
        PolynomialSystem ptarget = target;
        if (opts.perturbation > 0.0) {
            for (auto& p : ptarget.polys)
                p.add_term(Monomial(k, 0), std::polar(opts.perturbation, 2.0 * kPi * uniform()));
        }

        // Generic start system on the origin-augmented supports: unit-modulus
        // random coefficients make it Bernstein generic, so the polyhedral
        // stage tracks to MV distinct, well-conditioned roots. The segment
        // stage then carries those to the perturbed target; roots off the
        // torus (and beyond the target's own root count) show up as finite
        // endpoints or divergent paths there.
        const auto sups = augmented_supports(ptarget);
        PolynomialSystem generic(k);
        for (const auto& s : sups) {
            SparsePolynomial g(k);
            for (const auto& a : s) g.add_term(a, std::polar(1.0, 2.0 * kPi * uniform()));
            generic.push(std::move(g));
        }

        try {
            result.mv = mixed_volume(generic, seed + 77777ULL * attempt);

            std::vector<StartSolution> starts;
            std::vector<CellHomotopy> homotopies;
            homotopies.reserve(result.mv.cells.size());
            for (std::size_t c = 0; c < result.mv.cells.size(); ++c) {
                homotopies.push_back(build_cell_homotopy(generic, result.mv.supports,
                                                         result.mv.lifting, result.mv.cells[c],
                                                         opts.exponent_cap));
                auto cell_starts = solve_start_system(result.mv.cells[c], generic,
                                                      result.mv.supports, static_cast<int>(c));
                for (auto& s : cell_starts) starts.push_back(std::move(s));
            }
            result.paths_tracked = static_cast<int>(starts.size());

            const int nthreads = std::max(1, opts.threads);
            auto run_parallel = [&](auto&& task, std::size_t count) {
                std::atomic<std::size_t> next{0};
                auto worker = [&]() {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= count) return;
                        task(i);
                    }
                };
                if (nthreads == 1) {
                    worker();
                } else {
                    std::vector<std::thread> pool;
                    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
                    for (auto& th : pool) th.join();
                }
            };

            // Stage 1: polyhedral tracking to the generic system's roots.
            std::vector<PathResult> stage1(starts.size());
            run_parallel(
                [&](std::size_t i) {
                    stage1[i] = track_path(starts[i], homotopies[starts[i].cell_id], opts);
                    stage1[i].start_id = static_cast<int>(i);
                },
                starts.size());
            for (std::size_t i = 0; i < stage1.size(); ++i) {
                if (stage1[i].status == PathStatus::Converged) continue;
                TrackOptions o2 = opts;
                o2.arc_phase = opts.arc_phase - 1.1;
                PathResult pr = track_path(starts[i], homotopies[starts[i].cell_id], o2);
                if (pr.status == PathStatus::Converged) stage1[i] = std::move(pr);
            }
            // A generic system has MV distinct roots; coincident stage-1
            // endpoints mean the tracker crossed sheets. Separate them on a
            // different arc, or redraw everything.
            for (int round = 1; round <= 3; ++round) {
                bool any = false;
                for (std::size_t i = 0; i < stage1.size(); ++i) {
                    if (stage1[i].status != PathStatus::Converged) continue;
                    bool dup = false;
                    for (std::size_t j = 0; j < i && !dup; ++j)
                        if (stage1[j].status == PathStatus::Converged &&
                            relative_close(stage1[i].endpoint, stage1[j].endpoint, 1e-8))
                            dup = true;
                    if (!dup) continue;
                    any = true;
                    TrackOptions o2 = opts;
                    o2.arc_phase = opts.arc_phase + (round % 2 ? 1.6 : -1.3) * round;
                    PathResult pr = track_path(starts[i], homotopies[starts[i].cell_id], o2);
                    if (pr.status == PathStatus::Converged) stage1[i] = std::move(pr);
                }
                if (!any) break;
            }
            int stage1_dups = 0;
            for (std::size_t i = 0; i < stage1.size(); ++i) {
                if (stage1[i].status != PathStatus::Converged) continue;
                for (std::size_t j = 0; j < i; ++j)
                    if (stage1[j].status == PathStatus::Converged &&
                        relative_close(stage1[i].endpoint, stage1[j].endpoint, 1e-8)) {
                        ++stage1_dups;
                        break;
                    }
            }

            // Stage 2: carry each generic root to the perturbed target.
            std::vector<PathResult> paths(stage1.size());
            run_parallel(
                [&](std::size_t i) {
                    if (stage1[i].status != PathStatus::Converged) {
                        paths[i] = stage1[i];
                        paths[i].status = PathStatus::Failed;
                        return;
                    }
                    paths[i] = track_segment(stage1[i].endpoint, generic, ptarget, opts,
                                             stage1[i].cell_id);
                    paths[i].start_id = static_cast<int>(i);
                },
                stage1.size());
            // A fresh generic waypoint shifts the homotopy class of a path;
            // tracking through it resolves crossings that mere arc changes
            // cannot (a monodromy loop in coefficient space).
            auto detour = [&](const Eigen::VectorXcd& z0, const PolynomialSystem& from,
                              const PolynomialSystem& to, int cell_id,
                              std::uint64_t dseed) -> PathResult {
                std::mt19937_64 drng(dseed);
                auto duni = [&drng]() { return static_cast<double>(drng() >> 11) * 0x1.0p-53; };
                PolynomialSystem waypoint(k);
                for (const auto& sup : augmented_supports(from)) {
                    SparsePolynomial g(k);
                    for (const auto& a : sup) g.add_term(a, std::polar(1.0, 2.0 * kPi * duni()));
                    waypoint.push(std::move(g));
                }
                PathResult leg1 = track_segment(z0, from, waypoint, opts, cell_id);
                if (leg1.status != PathStatus::Converged) return leg1;
                return track_segment(leg1.endpoint, waypoint, to, opts, cell_id);
            };
            auto rearc = [&](const PolynomialSystem& from, const PolynomialSystem& to,
                             const std::vector<Eigen::VectorXcd>& z0s, bool allow_detour) {
                // Monodromy waves: re-track every path that still has no root
                // of its own (failed, diverged, or coincident with an earlier
                // path) along a different arc, then through fresh random
                // waypoints. A new endpoint is adopted only when it lands on
                // an unoccupied root: crossing artifacts get pulled apart and
                // falsely diverged paths fill their holes, while genuinely
                // multiple roots keep their whole bundle of paths and true
                // ghosts keep diverging.
                auto settled = [&](std::size_t i) {
                    if (z0s[i].size() == 0) return true;
                    if (paths[i].status != PathStatus::Converged) return false;
                    for (std::size_t j = 0; j < i; ++j)
                        if (paths[j].status == PathStatus::Converged &&
                            relative_close(paths[i].endpoint, paths[j].endpoint, 1e-9))
                            return false;  // duplicate of an earlier path
                    return true;
                };
                for (int wave = 0; wave < 8; ++wave) {
                    bool pending = false, progress = false;
                    for (std::size_t i = 0; i < paths.size(); ++i) {
                        if (settled(i)) continue;
                        pending = true;
                        PathResult pr;
                        if (wave < 2) {
                            TrackOptions o2 = opts;
                            o2.arc_phase = opts.arc_phase + (wave == 0 ? -0.9 : 1.7);
                            pr = track_segment(z0s[i], from, to, o2, paths[i].cell_id);
                        } else if (allow_detour) {
                            pr = detour(z0s[i], from, to, paths[i].cell_id,
                                        seed + 1315423911ULL * (wave + 11 * i));
                        } else {
                            break;
                        }
                        if (pr.status != PathStatus::Converged) continue;
                        bool taken = false;
                        for (std::size_t j = 0; j < paths.size() && !taken; ++j)
                            if (j != i && paths[j].status == PathStatus::Converged &&
                                relative_close(pr.endpoint, paths[j].endpoint, 1e-9))
                                taken = true;
                        if (!taken) {
                            paths[i] = std::move(pr);
                            progress = true;
                        }
                    }
                    if (!pending || (wave >= 3 && !progress)) break;
                }
            };
            {
                std::vector<Eigen::VectorXcd> z0s(stage1.size());
                for (std::size_t i = 0; i < stage1.size(); ++i)
                    if (stage1[i].status == PathStatus::Converged) z0s[i] = stage1[i].endpoint;
                rearc(generic, ptarget, z0s, /*allow_detour=*/true);
            }

            // Stage 3: continue from the perturbed target to the bare one.
            // Newton refinement across the full eps displacement scrambles
            // root pairs closer than eps; a segment continuation keeps each
            // path on its own sheet no matter how tight the pair sits.
            if (opts.perturbation > 0.0) {
                std::vector<Eigen::VectorXcd> z0s(paths.size());
                std::vector<PathResult> stage2 = paths;
                run_parallel(
                    [&](std::size_t i) {
                        if (stage2[i].status != PathStatus::Converged) return;
                        z0s[i] = stage2[i].endpoint;
                        paths[i] =
                            track_segment(stage2[i].endpoint, ptarget, target, opts,
                                          stage2[i].cell_id);
                        paths[i].start_id = static_cast<int>(i);
                    },
                    paths.size());
                rearc(ptarget, target, z0s, /*allow_detour=*/true);
            }

            // Refine converged endpoints against the unperturbed target and
            // keep the ones that genuinely solve it.
            std::vector<KktTuple> candidates;
            for (auto& pr : paths) {
                switch (pr.status) {
                    case PathStatus::Converged: ++result.converged; break;
                    case PathStatus::Diverged: ++result.diverged; break;
                    case PathStatus::Failed: ++result.failed; break;
                }
                if (pr.status != PathStatus::Converged) continue;
                double res = 0.0;
                Eigen::VectorXcd refined =
                    newton_refine(target, pr.endpoint, opts.refine_iters, opts.refine_tol, &res);
                if (res <= opts.residual_keep && refined.allFinite()) {
                    KktTuple tup;
                    tup.point = std::move(refined);
                    tup.residual = res;
                    candidates.push_back(std::move(tup));
                }
            }

            // Deterministic order, then union-find dedup at relative distance
            // dedup_tol; cluster representative = lowest residual.
            std::vector<int> order(candidates.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const auto& u = candidates[a].point;
                const auto& v = candidates[b].point;
                for (int i = 0; i < k; ++i) {
                    if (u[i].real() != v[i].real()) return u[i].real() < v[i].real();
                    if (u[i].imag() != v[i].imag()) return u[i].imag() < v[i].imag();
                }
                return candidates[a].residual < candidates[b].residual;
            });
            std::vector<int> parent(candidates.size());
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (std::size_t ia = 0; ia < order.size(); ++ia) {
                for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
                    const int a = order[ia], b = order[ib];
                    if (relative_close(candidates[a].point, candidates[b].point, opts.dedup_tol)) {
                        const int ra = find(a), rb = find(b);
                        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
                    }
                }
            }
            std::vector<int> rep_of(candidates.size(), -1);
            for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
                const int r = find(i);
                if (rep_of[r] < 0 || candidates[i].residual < candidates[rep_of[r]].residual)
                    rep_of[r] = i;
            }
            for (int i : order)
                if (find(i) == i) result.solutions.push_back(candidates[rep_of[i]]);

            // Tuples found, counted with multiplicity: converged paths whose
            // endpoints genuinely solve the target. The re-track waves adopt
            // an endpoint only when it lands on an unoccupied root, so this
            // equals the mixed volume exactly when every path ends on the
            // solution set.
            result.found = static_cast<int>(candidates.size());

            if (static_cast<long long>(result.solutions.size()) > result.mv.value)
                throw std::logic_error("deduplicated solution count exceeds the mixed volume");

            const bool better =
                !have_best || result.solutions.size() > best.solutions.size() ||
                (result.solutions.size() == best.solutions.size() &&
                 result.converged > best.converged);
            if (better) {
                best = std::move(result);
                have_best = true;
            }
            if (stage1_dups == 0 || attempt >= 2) break;
        } catch (const StartSystemOverflow&) {
            continue;  // redraw lifting and generic coefficients
        }
    }
    if (!have_best) throw RetryExhausted();
    best.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return best;
}

ClassifiedTuples classify_tuples(const GnepProblem& prob, const std::vector<KktTuple>& endpoints,
                                 const Tolerances& tols) {
    const int n = prob.total_dim();
    const PolynomialSystem kkt_sys = build_complex_kkt(prob);
    ClassifiedTuples out;
    out.tuples = endpoints;

    Eigen::MatrixXcd jac(kkt_sys.ambient_dim, kkt_sys.ambient_dim);
    for (auto& tup : out.tuples) {
        double max_im = 0.0, max_abs = 0.0;
        for (int i = 0; i < tup.point.size(); ++i) {
            max_im = std::max(max_im, std::abs(tup.point[i].imag()));
            max_abs = std::max(max_abs, std::abs(tup.point[i]));
        }
        tup.is_real = max_im <= tols.real_tol * (1.0 + max_abs);

        eval_system(kkt_sys, tup.point, nullptr, &jac);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
        const auto& sv = svd.singularValues();
        tup.is_singular = sv(sv.size() - 1) <= 1e-8 * std::max(1.0, sv(0));

        tup.is_kkt = false;
        if (tup.is_real && !tup.is_singular) {
            std::vector<double> xv(n);
            for (int i = 0; i < n; ++i) xv[i] = tup.point[i].real();
            bool ok = true;
            for (int i = 0; i < prob.num_players() && ok; ++i) {
                for (int j = 0; j < prob.num_constraints(i) && ok; ++j) {
                    if (prob.player(i).constraints[j].kind != ConstraintKind::Inequality) continue;
                    const double lam = tup.point[n + prob.lambda_offset(i) + j].real();
                    if (lam < -tols.sign_tol) ok = false;
                    else if (evaluate_real(prob.player(i).constraints[j].g, xv) < -tols.sign_tol)
                        ok = false;
                }
            }
            tup.is_kkt = ok;
        }
    }
    for (int i = 0; i < static_cast<int>(out.tuples.size()); ++i)
        if (out.tuples[i].is_kkt) out.kkt.push_back(i);

    // P: deduplicated x-projections of K
    const auto lam_norm = [&](int t) {
        double s = 0.0;
        for (int i = n; i < out.tuples[t].point.size(); ++i) s += std::norm(out.tuples[t].point[i]);
        return s;
    };
    for (int idx : out.kkt) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = out.tuples[idx].point[i].real();
        bool fresh = true;
        for (std::size_t p = 0; p < out.points.size(); ++p) {
            if ((out.points[p] - x).norm() <=
                tols.dedup_tol * (1.0 + std::min(out.points[p].norm(), x.norm()))) {
                fresh = false;
                if (lam_norm(idx) < lam_norm(out.point_tuple[p])) out.point_tuple[p] = idx;
                break;
            }
        }
        if (fresh) {
            out.points.push_back(std::move(x));
            out.point_tuple.push_back(idx);
        }
    }
    return out;
}

}  // namespace gnesolve
