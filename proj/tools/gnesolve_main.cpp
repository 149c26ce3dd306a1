#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "gnesolve/gnep.hpp"
#include "gnesolve/mixedvol.hpp"
#include "gnesolve/momentsos.hpp"
#include "gnesolve/problem_io.hpp"
#include "gnesolve/samples.hpp"
#include "gnesolve/selector.hpp"

using namespace gnesolve;

namespace {

struct CommonFlags {
    std::uint64_t seed = 2024;
    bool convex = false;
    int threads = 0;  // 0: use hardware concurrency
    int max_order = 3;
    bool json_out = false;
    double tol_real = 1e-8;
    double tol_sign = 1e-6;
    double tol_feas = 1e-6;
    double tol_dedup = 1e-6;
    double tol_pert = 1e-6;
    double tol_rank = 1e-6;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "lifting / perturbation seed");
    cmd->add_option("--threads", f.threads, "path tracking threads (0 = all cores)");
    cmd->add_option("--max-order", f.max_order, "extra relaxation orders past the base order");
    cmd->add_option("--tol-real", f.tol_real, "realness tolerance (relative)");
    cmd->add_option("--tol-sign", f.tol_sign, "multiplier / inequality sign slack");
    cmd->add_option("--tol-feas", f.tol_feas, "feasibility slack");
    cmd->add_option("--tol-dedup", f.tol_dedup, "endpoint deduplication distance");
    cmd->add_option("--tol-pert", f.tol_pert, "constant-term perturbation magnitude");
    cmd->add_option("--tol-rank", f.tol_rank, "singular-value ratio for moment matrix ranks");
}

SelectConfig to_config(const CommonFlags& f) {
    SelectConfig cfg;
    cfg.convex = f.convex;
    cfg.seed = f.seed;
    cfg.tols.real_tol = f.tol_real;
    cfg.tols.sign_tol = f.tol_sign;
    cfg.tols.feas_tol = f.tol_feas;
    cfg.tols.dedup_tol = f.tol_dedup;
    cfg.track.dedup_tol = f.tol_dedup;
    cfg.track.perturbation = f.tol_pert;
    cfg.track.threads =
        f.threads > 0 ? f.threads : static_cast<int>(std::thread::hardware_concurrency());
    cfg.check.rank_tol = f.tol_rank;
    cfg.check.feas_tol = f.tol_feas;
    cfg.check.max_order_offset = f.max_order;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gnesolve: all generalized Nash equilibria of polynomial games"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string path, point_str, dir = "problems", mode = "convex";
    int rnd_players = 2, rnd_dim = 2, rnd_degree = 2, rnd_count = 5;
    bool do_track = false;

    auto* solve_cmd = app.add_subcommand("solve", "find all GNEs of a problem file");
    solve_cmd->add_option("file", path)->required();
    solve_cmd->add_flag("--convex", flags.convex, "accept every KKT point (convex shortcut)");
    solve_cmd->add_flag("--json,!--text", flags.json_out, "emit the report as JSON");
    add_common(solve_cmd, flags);

    auto* mv_cmd = app.add_subcommand("mixed-volume", "mixed volume of the complex KKT system");
    mv_cmd->add_option("file", path)->required();
    add_common(mv_cmd, flags);

    auto* kkt_cmd = app.add_subcommand("kkt-points", "dump all complex KKT tuples as JSON");
    kkt_cmd->add_option("file", path)->required();
    add_common(kkt_cmd, flags);

    auto* verify_cmd =
        app.add_subcommand("verify", "run the per-player verification at a given point");
    verify_cmd->add_option("file", path)->required();
    verify_cmd->add_option("--point", point_str, "comma-separated strategy vector")->required();
    add_common(verify_cmd, flags);

    auto* rnd_cmd = app.add_subcommand("random", "mixed volumes of random instances");
    rnd_cmd->add_option("--players", rnd_players, "number of players (N >= 2)");
    rnd_cmd->add_option("--dim", rnd_dim, "strategy dimension per player");
    rnd_cmd->add_option("--degree", rnd_degree, "objective degree (dense mode)");
    rnd_cmd->add_option("--mode", mode, "convex | dense")
        ->check(CLI::IsMember({"convex", "dense"}));
    rnd_cmd->add_option("--count", rnd_count, "instances to generate");
    rnd_cmd->add_flag("--track", do_track, "also track paths and report the success rate");
    add_common(rnd_cmd, flags);

    auto* samples_cmd = app.add_subcommand("samples", "write the built-in sample problems");
    samples_cmd->add_option("--dir", dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (samples_cmd->parsed()) {
            std::filesystem::create_directories(dir);
            for (const auto& name : samples::names()) {
                save_problem(samples::by_name(name), dir + "/" + name + ".json");
                std::cout << dir << "/" << name << ".json\n";
            }
            return 0;
        }
        if (rnd_cmd->parsed()) {
            const bool convex = mode == "convex";
            std::printf("%-6s %-4s %-4s %-8s %-14s %s\n", "seed", "N", "n_i", "degree",
                        "mixed volume", do_track ? "found / success" : "");
            int successes = 0;
            for (int i = 0; i < rnd_count; ++i) {
                auto prob = random_gnep(rnd_players, rnd_dim, rnd_degree, convex, flags.seed + i);
                auto sys = build_complex_kkt(prob);
                if (do_track) {
                    TrackOptions topts;
                    topts.threads = to_config(flags).track.threads;
                    topts.perturbation = flags.tol_pert;
                    auto out = solve_all(sys, flags.seed + i, topts);
                    const bool ok = out.found == out.mv.value;
                    successes += ok;
                    std::printf("%-6llu %-4d %-4d %-8d %-14lld %d / %s\n",
                                static_cast<unsigned long long>(flags.seed + i), rnd_players,
                                rnd_dim, convex ? 2 : rnd_degree, out.mv.value, out.found,
                                ok ? "yes" : "no");
                } else {
                    auto mv = mixed_volume(sys, flags.seed + i);
                    std::printf("%-6llu %-4d %-4d %-8d %-14lld\n",
                                static_cast<unsigned long long>(flags.seed + i), rnd_players,
                                rnd_dim, convex ? 2 : rnd_degree, mv.value);
                }
            }
            if (do_track)
                std::printf("success rate: %d / %d\n", successes, rnd_count);
            return 0;
        }

        GnepProblem prob = load_problem(path);
        const SelectConfig cfg = to_config(flags);

        if (mv_cmd->parsed()) {
            auto mv = mixed_volume(build_complex_kkt(prob), cfg.seed);
            std::cout << "mixed volume: " << mv.value << "\n";
            std::cout << "mixed cells:  " << mv.cells.size() << "\n";
            return 0;
        }
        if (kkt_cmd->parsed()) {
            auto sol = solve_all(build_complex_kkt(prob), cfg.seed, cfg.track);
            auto cls = classify_tuples(prob, sol.solutions, cfg.tols);
            std::cout << tuples_to_json(prob, cls) << "\n";
            std::cerr << "mixed volume " << sol.mv.value << ", " << sol.found
                      << " tuples found, " << cls.kkt.size() << " in K, " << cls.points.size()
                      << " KKT points\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            std::stringstream ss(point_str);
            std::vector<double> coords;
            for (std::string item; std::getline(ss, item, ',');) coords.push_back(std::stod(item));
            if (static_cast<int>(coords.size()) != prob.total_dim())
                throw std::runtime_error("--point needs " + std::to_string(prob.total_dim()) +
                                         " coordinates");
            Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(coords.data(), coords.size());
            std::vector<double> deltas;
            bool all_certified = true;
            for (int i = 0; i < prob.num_players(); ++i) {
                auto outcome = solve_checking(make_checking_problem(prob, i, u), cfg.check);
                const char* label = outcome.status == CheckStatus::NonnegativeCertified
                                        ? "certified nonnegative"
                                        : outcome.status == CheckStatus::Negative
                                              ? "negative"
                                              : "inconclusive";
                std::cout << "player " << (i + 1) << ": " << label;
                if (outcome.status == CheckStatus::Negative) {
                    std::cout << " (value " << outcome.value << ")";
                    all_certified = false;
                } else if (outcome.status == CheckStatus::Inconclusive) {
                    all_certified = false;
                }
                std::cout << "\n";
                deltas.push_back(outcome.status == CheckStatus::Negative ? outcome.value : 0.0);
            }
            std::cout << "accuracy parameter: " << accuracy_delta(prob, u, deltas) << "\n";
            std::cout << (all_certified && accuracy_delta(prob, u, deltas) >= -cfg.gne_tol
                              ? "the point is a GNE\n"
                              : "the point is not certified as a GNE\n");
            return 0;
        }

        // solve
        GneReport report = select_gnes(prob, cfg);
        std::cout << (flags.json_out ? report_to_json(report) : report_to_text(report)) << "\n";
        if (!report.gnes.empty()) return 0;
        return report.complete ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
