#include "gnesolve/selector.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace gnesolve {
namespace {

double lambda_norm(const KktTuple& t, int n) {
    double s = 0.0;
    for (int i = n; i < t.point.size(); ++i) s += std::norm(t.point[i]);
    return std::sqrt(s);
}

}  // namespace

GneReport select_gnes(const GnepProblem& prob, const SelectConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    GneReport report;

    const PolynomialSystem kkt = build_complex_kkt(prob);
    SolveAllResult sol = solve_all(kkt, config.seed, config.track);
    report.mixed_volume = sol.mv.value;
    report.num_complex = sol.found;
    report.num_distinct = static_cast<int>(sol.solutions.size());
    report.paths_tracked = sol.paths_tracked;
    report.converged = sol.converged;
    report.diverged = sol.diverged;
    report.failed = sol.failed;
    report.kkt_seconds = sol.seconds;

    ClassifiedTuples cls = classify_tuples(prob, sol.solutions, config.tols);
    report.num_kkt = static_cast<int>(cls.kkt.size());
    report.num_points = static_cast<int>(cls.points.size());
    for (const auto& t : cls.tuples)
        if (t.is_singular) ++report.num_singular;

    const int n = prob.total_dim();
    const int N = prob.num_players();

    // deterministic candidate order: ascending lambda norm, then lex x
    std::vector<int> order(cls.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double la = lambda_norm(cls.tuples[cls.point_tuple[a]], n);
        const double lb = lambda_norm(cls.tuples[cls.point_tuple[b]], n);
        if (la != lb) return la < lb;
        return std::lexicographical_compare(cls.points[a].data(), cls.points[a].data() + n,
                                            cls.points[b].data(), cls.points[b].data() + n);
    });

    bool any_inconclusive = false;
    std::vector<std::vector<Eigen::VectorXd>> cache(N);  // V_i

    for (int pi : order) {
        const Eigen::VectorXd& u = cls.points[pi];

        if (config.convex) {
            // every KKT point of a convex GNEP is a GNE
            GneReport::Gne g;
            g.x = u;
            g.player_deltas.assign(N, 0.0);
            g.delta = accuracy_delta(prob, u, g.player_deltas);
            report.gnes.push_back(std::move(g));
            continue;
        }

        // pre-screen: a cached deviation v_i that is feasible at u_{-i} and
        // strictly improves player i rules u out without SDP work
        bool screened = false;
        if (config.use_screen_cache) {
            std::vector<double> uv(u.data(), u.data() + n);
            for (int i = 0; i < N && !screened; ++i) {
                const double fu = evaluate_real(prob.player(i).objective, uv);
                for (const auto& vi : cache[i]) {
                    Eigen::VectorXd dev = u;
                    dev.segment(prob.x_offset(i), prob.x_dim(i)) = vi;
                    if (!feasible(prob, i, dev, config.tols.feas_tol)) continue;
                    std::vector<double> dv(dev.data(), dev.data() + n);
                    if (evaluate_real(prob.player(i).objective, dv) - fu < -config.screen_tol) {
                        screened = true;
                        break;
                    }
                }
            }
        }
        if (screened) continue;

        // full verification, player by player
        bool rejected = false;
        bool inconclusive = false;
        std::vector<double> deltas(N, 0.0);
        for (int i = 0; i < N; ++i) {
            auto outcome = solve_checking(make_checking_problem(prob, i, u), config.check);
            if (outcome.status == CheckStatus::Negative) {
                rejected = true;
                for (auto& v : outcome.minimizers) cache[i].push_back(std::move(v));
            } else if (outcome.status == CheckStatus::Inconclusive) {
                inconclusive = true;
            } else {
                deltas[i] = outcome.value;  // 0 by construction
            }
        }
        if (rejected) continue;
        if (inconclusive) {
            report.undetermined.push_back(u);
            any_inconclusive = true;
            continue;
        }
        const double delta = accuracy_delta(prob, u, deltas);
        if (delta >= -config.gne_tol) {
            GneReport::Gne g;
            g.x = u;
            g.delta = delta;
            g.player_deltas = std::move(deltas);
            report.gnes.push_back(std::move(g));
        } else {
            // certified optimal for every player yet infeasible beyond the
            // accuracy threshold; do not claim it either way
            report.undetermined.push_back(u);
            any_inconclusive = true;
        }
    }

    report.complete =
        report.num_complex == report.mixed_volume && !any_inconclusive;
    report.select_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() -
        report.kkt_seconds;
    return report;
}

Completeness completeness(const GneReport& report) {
    return report.complete ? Completeness::Complete : Completeness::PossiblyIncomplete;
}

}  // namespace gnesolve
