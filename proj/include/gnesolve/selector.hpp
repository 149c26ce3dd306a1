#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gnesolve/gnep.hpp"
#include "gnesolve/homotopy.hpp"
#include "gnesolve/momentsos.hpp"

namespace gnesolve {

enum class Completeness { Complete, PossiblyIncomplete };

struct SelectConfig {
    bool convex = false;  // accept every KKT point without verification
    std::uint64_t seed = 2024;
    double screen_tol = 1e-8;  // margin for the cached-deviation rejection
    double gne_tol = 1e-6;     // accept when the accuracy parameter >= -1e-6
    bool use_screen_cache = true;
    Tolerances tols;
    TrackOptions track;
    CheckOptions check;
};

struct GneReport {
    struct Gne {
        Eigen::VectorXd x;
        double delta = 0.0;
        std::vector<double> player_deltas;
    };
    std::vector<Gne> gnes;
    std::vector<Eigen::VectorXd> undetermined;  // candidates with an inconclusive verification

    long long mixed_volume = 0;
    int num_complex = 0;   // complex KKT tuples found, counted with multiplicity
    int num_distinct = 0;  // deduplicated endpoints
    int num_kkt = 0;       // |K|
    int num_points = 0;    // |P|
    int num_singular = 0;  // endpoints with a rank-deficient Jacobian (never verified)
    bool complete = false;

    int paths_tracked = 0, converged = 0, diverged = 0, failed = 0;
    double kkt_seconds = 0.0, select_seconds = 0.0;
};

// Full pipeline: enumerate complex KKT tuples with the polyhedral homotopy,
// classify, then walk the KKT points: pre-screen against cached deviation
// strategies, verify the rest player by player with the Moment-SOS
// hierarchy, and certify the survivors via the accuracy parameter. With
// `convex` set, every KKT point is accepted directly.
GneReport select_gnes(const GnepProblem& prob, const SelectConfig& config = {});

// Complete exactly when every path ended in a genuine KKT tuple (count with
// multiplicity equals the mixed volume) and no verification was inconclusive.
Completeness completeness(const GneReport& report);

}  // namespace gnesolve
