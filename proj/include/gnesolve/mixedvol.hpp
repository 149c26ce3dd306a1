#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gnesolve/polysys.hpp"

namespace gnesolve {

// A candidate cell's defining inequalities are satisfied with equality by an
// extra point (tie within tolerance); the caller redraws the lifting.
class DegenerateLifting : public std::runtime_error {
public:
    DegenerateLifting() : std::runtime_error("degenerate lifting: tie within LP tolerance") {}
};

class RetryExhausted : public std::runtime_error {
public:
    RetryExhausted() : std::runtime_error("mixed volume: 32 degenerate liftings in a row") {}
};

// Real lift values, one per lattice point of each (origin-augmented) support,
// in the order returned by augmented_supports().
struct Lifting {
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> values;
};

// A fine mixed cell of type (1,...,1): one support edge per equation whose
// lifted points are strictly minimal against the inner normal (gamma, 1).
struct MixedCell {
    std::vector<std::pair<int, int>> edges;  // per equation, indices into the support
    Eigen::VectorXd gamma;
    long long volume = 0;  // |det(b_1 - a_1, ..., b_k - a_k)|
};

struct MixedVolumeResult {
    long long value = 0;
    std::vector<MixedCell> cells;
    Lifting lifting;
    std::vector<std::vector<Monomial>> supports;
};

// Supports of the system members with the origin adjoined, sorted graded lex.
// Mixed volumes are computed for these augmented supports, so the value
// bounds the number of isolated roots in all of C^k (not only the torus);
// the constant-term perturbation in the solver reaches the extra roots.
std::vector<std::vector<Monomial>> augmented_supports(const PolynomialSystem& sys);

// Independent lift values per lattice point, uniform on [0,1), deterministic
// in the seed.
Lifting draw_lifting(const PolynomialSystem& sys, std::uint64_t seed);

// All fine mixed cells of the induced lower-hull subdivision. Throws
// DegenerateLifting when a tie falls within the LP tolerance.
std::vector<MixedCell> enumerate_mixed_cells(const PolynomialSystem& sys, const Lifting& lifting);

// Sum of cell volumes; redraws the lifting on degeneracy, up to 32 times.
MixedVolumeResult mixed_volume(const PolynomialSystem& sys, std::uint64_t seed = 2024);

}  // namespace gnesolve
