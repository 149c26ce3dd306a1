#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "gnesolve/gnep.hpp"
#include "gnesolve/mixedvol.hpp"

namespace gnesolve {

enum class PathStatus { Converged, Diverged, Failed };

struct TrackOptions {
    double initial_step = 0.05;
    double min_step = 1e-9;
    double corrector_tol = 1e-10;
    int max_corrector_iters = 3;
    double divergence_norm = 1e8;
    int max_steps = 10000;
    double perturbation = 1e-6;  // magnitude of the constant-term perturbation
    double exponent_cap = 16.0;  // cap on normalized t-exponents
    double arc_phase = 0.7;      // imaginary detour of the log-t tracking arc
    int refine_iters = 50;
    double refine_tol = 1e-12;
    double dedup_tol = 1e-6;
    double residual_keep = 1e-8;
    int threads = 1;
};

struct StartSolution {
    int cell_id = 0;
    Eigen::VectorXcd z0;
};

struct PathResult {
    PathStatus status = PathStatus::Failed;
    Eigen::VectorXcd endpoint;
    double residual = std::numeric_limits<double>::infinity();
    int steps = 0;
    int cell_id = 0;
    int start_id = 0;
};

// Extreme lifting produced an over/underflowing start solution; redraw.
class StartSystemOverflow : public std::runtime_error {
public:
    StartSystemOverflow() : std::runtime_error("start system magnitude over/underflow") {}
};

// H(y,t) for one mixed cell: each target term carries the t-exponent
// <gamma,a> + w(a) - h*, which is zero exactly on the cell's edge points.
// Exponents are rescaled so the smallest positive one equals 1 (a plain
// reparametrization of t) and capped above, keeping dH/dt bounded at t=0
// and the path non-stiff near t=1.
struct CellHomotopy {
    struct Term {
        Complex c;
        Monomial a;
        double s = 0.0;
    };
    int dim = 0;
    std::vector<std::vector<Term>> eqs;
};

CellHomotopy build_cell_homotopy(const PolynomialSystem& target,
                                 const std::vector<std::vector<Monomial>>& supports,
                                 const Lifting& lifting, const MixedCell& cell,
                                 double exponent_cap);

// All |det E| torus solutions of the cell's binomial start system, via a
// Hermite normal form of the integer edge matrix and back substitution in
// log-polar form.
std::vector<StartSolution> solve_start_system(const MixedCell& cell,
                                              const PolynomialSystem& target,
                                              const std::vector<std::vector<Monomial>>& supports,
                                              int cell_id = 0);

// Predictor-corrector continuation of H from t=0 to t=1 (RK4 on the
// Davidenko system, Newton corrector, adaptive step).
PathResult track_path(const StartSolution& start, const CellHomotopy& homotopy,
                      const TrackOptions& opts);

// Newton iteration on a square system; returns the best iterate seen and its
// max-norm residual.
Eigen::VectorXcd newton_refine(const PolynomialSystem& sys, Eigen::VectorXcd y, int max_iters,
                               double tol, double* residual_out = nullptr);

struct SolveAllResult {
    std::vector<KktTuple> solutions;  // refined, deduplicated, residual-filtered
    // Endpoints that solve the target, counted with multiplicity (a root of
    // multiplicity m legitimately terminates m paths); this is the count to
    // compare against the mixed volume for completeness.
    int found = 0;
    MixedVolumeResult mv;
    int paths_tracked = 0;
    int converged = 0;
    int diverged = 0;
    int failed = 0;
    double seconds = 0.0;
};

// Full pipeline: constant-perturb the target (reaching roots outside the
// torus), enumerate cells, track all start solutions in parallel, refine the
// endpoints against the unperturbed target, filter by residual and
// deduplicate. The deduplicated count never exceeds the mixed volume.
SolveAllResult solve_all(const PolynomialSystem& target, std::uint64_t seed,
                         const TrackOptions& opts = {});

struct ClassifiedTuples {
    std::vector<KktTuple> tuples;         // K_C with flags filled
    std::vector<int> kkt;                 // indices into tuples forming K
    std::vector<Eigen::VectorXd> points;  // P: deduplicated x-projections of K
    std::vector<int> point_tuple;         // representative tuple index per point
};

// K_C / K / P classification: realness within real_tol, lambda and inequality
// signs within sign_tol, x-projections deduplicated within dedup_tol.
ClassifiedTuples classify_tuples(const GnepProblem& prob, const std::vector<KktTuple>& endpoints,
                                 const Tolerances& tols = {});

}  // namespace gnesolve
