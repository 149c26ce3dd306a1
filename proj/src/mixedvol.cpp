#include "gnesolve/mixedvol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "linprog.hpp"

namespace gnesolve {
namespace {

constexpr double kMarginTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// |det| of an integer matrix by fraction-free (Bareiss) elimination.
long long integer_abs_det(std::vector<std::vector<long long>> M) {
    const int k = static_cast<int>(M.size());
    std::vector<std::vector<__int128>> a(k, std::vector<__int128>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a[i][j] = M[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (int p = 0; p < k - 1; ++p) {
        if (a[p][p] == 0) {
            int r = -1;
            for (int i = p + 1; i < k; ++i)
                if (a[i][p] != 0) { r = i; break; }
            if (r < 0) return 0;
            std::swap(a[p], a[r]);
            sign = -sign;
        }
        for (int i = p + 1; i < k; ++i) {
            for (int j = p + 1; j < k; ++j)
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    __int128 det = a[k - 1][k - 1] * sign;
    if (det < 0) det = -det;
    return static_cast<long long>(det);
}

// The cell search asks many closely related questions of the form
//
//   maximize s  s.t.  <gamma, a_j - b_j> = w_j(b_j) - w_j(a_j)  (chosen edges)
//                     <gamma, r - p_j> + w_j(r) - w_j(p_j) >= s,  s <= 1
//
// i.e. "with what margin can a normal expose these edges". We solve the LP
// dual, which has k+1 rows no matter how deep the search is; going one level
// deeper just appends columns, so the parent's optimal basis stays feasible
// and re-optimization takes a handful of pivots. Since simplex objectives on
// the dual decrease monotonically, a caller that only needs the sign of the
// margin can stop as soon as the objective drops below -tol.
class MarginLp {
public:
    explicit MarginLp(int k) : k_(k), rows_(k + 1), b_(Eigen::VectorXd::Zero(k + 1)) {
        b_[k_] = 1.0;
        // columns 0..k: identity placeholders, one per row (basis fillers for
        // rows the real columns do not span; never allowed to enter)
        // column k+1: the cap column for s <= 1
        const int cap = std::max(64, 4 * rows_);
        cols_ = Eigen::MatrixXd::Zero(rows_, cap);
        cost_.assign(cap, 0.0);
        for (int r = 0; r < rows_; ++r) cols_(r, r) = 1.0;
        cols_(k_, rows_) = 1.0;
        cost_[rows_] = 1.0;
        ncols_ = rows_ + 1;
        B_.resize(rows_, rows_);
        xB_.resize(rows_);
        y_.resize(rows_);
        cB_.resize(rows_);
        d_.resize(rows_);
    }

    int size() const { return ncols_; }
    void truncate(int n) { ncols_ = n; }

    void push_col(const Eigen::VectorXd& a, double c) {
        if (ncols_ == cols_.cols()) {
            Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(rows_, 2 * cols_.cols());
            grown.leftCols(cols_.cols()) = cols_;
            cols_ = std::move(grown);
            cost_.resize(2 * cost_.size(), 0.0);
        }
        cols_.col(ncols_) = a;
        cost_[ncols_] = c;
        ++ncols_;
    }

    struct Outcome {
        double margin = -kInf;  // -inf: no exposing normal exists
        bool exact = false;     // false when the early cutoff fired
        std::vector<int> basis;
    };

    // Re-optimizes from `start`, a feasible basis referencing live columns.
    // With early_cut, returns as soon as the objective certifies margin <=
    // -tol. Falls back to a fresh two-phase solve whenever the warm pivot
    // loop cannot certify its answer (placeholder relaxations, stalls).
    Outcome solve_from(const std::vector<int>& start, bool early_cut) {
        std::vector<int> basis = start;
        is_basic_.assign(ncols_, 0);
        for (int j : basis) is_basic_[j] = 1;

        int stall = 0;
        double last = kInf;
        for (int iter = 0; iter < 400; ++iter) {
            for (int i = 0; i < rows_; ++i) B_.col(i) = cols_.col(basis[i]);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(B_);
            xB_ = lu.solve(b_);
            if (!xB_.allFinite() || (B_ * xB_ - b_).cwiseAbs().maxCoeff() > 1e-9)
                return full_solve();
            for (int i = 0; i < rows_; ++i) cB_[i] = cost_[basis[i]];
            y_ = lu.transpose().solve(cB_);
            if (!y_.allFinite()) return full_solve();

            const double obj = cB_.dot(xB_);
            // The objective only bounds the true margin while no placeholder
            // relaxation is active.
            bool relaxed = false;
            for (int i = 0; i < rows_; ++i)
                if (basis[i] < rows_ && xB_[i] > 1e-11) { relaxed = true; break; }
            if (early_cut && !relaxed && obj <= -kMarginTol) return {obj, false, {}};
            if (obj < last - 1e-13 * (1.0 + std::abs(last))) {
                last = obj;
                stall = 0;
            } else if (++stall > 3 * rows_ + 60) {
                return full_solve();
            }

            int enter = -1;
            double best = -1e-10;
            const bool bland = stall > rows_ + 20;
            for (int j = rows_; j < ncols_; ++j) {  // placeholders (< rows_) never enter
                if (is_basic_[j]) continue;
                const double rc = cost_[j] - y_.dot(cols_.col(j));
                if (bland) {
                    if (rc < -1e-10) { enter = j; break; }
                } else if (rc < best) {
                    best = rc;
                    enter = j;
                }
            }
            if (enter < 0) {
                // optimal; placeholders must sit at zero or the relaxation lied
                for (int i = 0; i < rows_; ++i)
                    if (basis[i] < rows_ && xB_[i] > 1e-11) return full_solve();
                return {obj, true, std::move(basis)};
            }

            d_ = lu.solve(cols_.col(enter));
            int leave = -1;
            double best_ratio = kInf;
            for (int i = 0; i < rows_; ++i) {
                if (d_[i] > 1e-11) {
                    const double ratio = std::max(xB_[i], 0.0) / d_[i];
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) {
                // A ray certifies "no exposing normal" only when the basis is
                // free of placeholder relaxations.
                for (int i = 0; i < rows_; ++i)
                    if (basis[i] < rows_) return full_solve();
                return {};
            }
            is_basic_[basis[leave]] = 0;
            is_basic_[enter] = 1;
            basis[leave] = enter;
        }
        return full_solve();
    }

    // Fresh two-phase solve over the active columns (placeholders excluded);
    // artificial indices in the result map back to placeholder slots.
    Outcome full_solve() const {
        const int n = ncols_ - rows_;  // cap + transient columns
        Eigen::MatrixXd A(rows_, n);
        Eigen::VectorXd c(n);
        for (int j = 0; j < n; ++j) {
            A.col(j) = cols_.col(rows_ + j);
            c[j] = cost_[rows_ + j];
        }
        auto res = lp::solve(A, b_, c);
        if (res.status != lp::Status::Optimal) return {};  // no exposing normal
        Outcome out;
        out.margin = res.objective;
        out.exact = true;
        for (int pos : res.basis) out.basis.push_back(pos < n ? rows_ + pos : pos - n);
        return out;
    }

    std::vector<int> root_basis() const {
        // placeholders for the gamma rows plus the cap column for the last row
        std::vector<int> basis(rows_);
        std::iota(basis.begin(), basis.end(), 0);
        basis[rows_ - 1] = rows_;  // cap
        return basis;
    }

private:
    int k_, rows_, ncols_ = 0;
    Eigen::MatrixXd cols_;
    std::vector<double> cost_;
    Eigen::VectorXd b_;
    // pivot workspaces
    Eigen::MatrixXd B_;
    Eigen::VectorXd xB_, y_, cB_, d_;
    std::vector<char> is_basic_;
};

class Enumerator {
public:
    Enumerator(const std::vector<std::vector<Monomial>>& sup, const Lifting& lift)
        : sup_(sup), lift_(lift), k_(static_cast<int>(sup.size())), lp_(k_) {}

    std::vector<MixedCell> run() {
        for (const auto& s : sup_)
            if (s.size() < 2) return {};  // a point polytope kills every cell
        fixed_.assign(k_, 0);
        std::vector<std::vector<int>> viable(k_);
        for (int j = 0; j < k_; ++j) {
            viable[j].resize(sup_[j].size());
            std::iota(viable[j].begin(), viable[j].end(), 0);
        }
        scratch_.resize(k_ + 1);
        dfs(lp_.root_basis(), viable);
        return std::move(cells_);
    }

private:
    const std::vector<std::vector<Monomial>>& sup_;
    const Lifting& lift_;
    int k_;
    MarginLp lp_;
    std::vector<char> fixed_;
    std::vector<int> chosen_sup_;
    std::vector<std::pair<int, int>> chosen_edge_;
    std::vector<MixedCell> cells_;
    Eigen::VectorXd scratch_;

    void push_ineq_col(int j, int base, int r) {
        for (int v = 0; v < k_; ++v)
            scratch_[v] = static_cast<double>(sup_[j][r][v] - sup_[j][base][v]);
        scratch_[k_] = 1.0;
        lp_.push_col(scratch_, lift_.values[j][r] - lift_.values[j][base]);
    }

    // Weak test: can point r of support j still touch the lower envelope
    // somewhere in the current normal region? Only parent-viable rivals are
    // pitted against r; dropping non-viable rivals relaxes nothing that
    // matters, since a cell normal keeps them strictly above anyway.
    bool viable_point(int j, int r, const std::vector<int>& rivals,
                      const std::vector<int>& parent) {
        const int mark = lp_.size();
        for (int t : rivals) {
            if (t == r) continue;
            push_ineq_col(j, r, t);
        }
        auto out = lp_.solve_from(parent, /*early_cut=*/true);
        lp_.truncate(mark);
        return out.margin > -kMarginTol;
    }

    void push_edge_block(int j, int p, int q, const std::vector<int>& rivals) {
        for (int r : rivals) {
            if (r == p || r == q) continue;
            push_ineq_col(j, p, r);
        }
        const double dw = lift_.values[j][q] - lift_.values[j][p];
        for (int v = 0; v < k_; ++v)
            scratch_[v] = static_cast<double>(sup_[j][p][v] - sup_[j][q][v]);
        scratch_[k_] = 0.0;
        lp_.push_col(scratch_, -dw);
        scratch_.head(k_) *= -1.0;
        lp_.push_col(scratch_, dw);
    }

    void dfs(const std::vector<int>& parent, const std::vector<std::vector<int>>& viable) {
        // Refresh viability for the unfixed supports, inheriting the parent
        // lists; prune the whole branch when some support drops below an edge.
        std::vector<std::vector<int>> cur(k_);
        int pick = -1, unfixed = 0;
        for (int j = 0; j < k_; ++j) {
            if (fixed_[j]) continue;
            ++unfixed;
            cur[j].reserve(viable[j].size());
            for (int r : viable[j])
                if (viable_point(j, r, viable[j], parent)) cur[j].push_back(r);
            if (cur[j].size() < 2) return;
            if (pick < 0 || cur[j].size() < cur[pick].size()) pick = j;
        }

        const auto& pts = cur[pick];
        const bool leaf = unfixed == 1;
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
                const int p = pts[a], q = pts[b];
                if (leaf) {
                    try_leaf(pick, {p, q});
                    continue;
                }
                const int mark = lp_.size();
                push_edge_block(pick, p, q, cur[pick]);
                auto out = lp_.solve_from(parent, /*early_cut=*/true);
                if (out.margin > -kMarginTol && out.margin <= kMarginTol) {
                    lp_.truncate(mark);
                    throw DegenerateLifting();
                }
                if (out.margin > kMarginTol) {
                    fixed_[pick] = 1;
                    chosen_sup_.push_back(pick);
                    chosen_edge_.push_back({p, q});
                    dfs(out.basis, cur);
                    chosen_sup_.pop_back();
                    chosen_edge_.pop_back();
                    fixed_[pick] = 0;
                }
                lp_.truncate(mark);
            }
        }
    }

    // Leaf: the k edge equalities pin gamma; accept if every other lifted
    // point of every support clears its edge level by more than the
    // tolerance. This is exact regardless of the viability pre-filtering.
    void try_leaf(int last_sup, std::pair<int, int> last_edge) {
        std::vector<int> sups = chosen_sup_;
        std::vector<std::pair<int, int>> edges = chosen_edge_;
        sups.push_back(last_sup);
        edges.push_back(last_edge);

        Eigen::MatrixXd E(k_, k_);
        Eigen::VectorXd d(k_);
        for (int l = 0; l < k_; ++l) {
            const int j = sups[l];
            const auto [p, q] = edges[l];
            for (int v = 0; v < k_; ++v) E(l, v) = static_cast<double>(sup_[j][p][v] - sup_[j][q][v]);
            d[l] = lift_.values[j][q] - lift_.values[j][p];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
        if (lu.rank() < k_) {
            if ((E * lu.solve(d) - d).cwiseAbs().maxCoeff() < 1e-7) throw DegenerateLifting();
            return;
        }
        Eigen::VectorXd gamma = lu.solve(d);

        double min_slack = kInf;
        for (int l = 0; l < k_; ++l) {
            const int j = sups[l];
            const auto [p, q] = edges[l];
            const auto& pts = sup_[j];
            const auto& w = lift_.values[j];
            double base = w[p];
            for (int v = 0; v < k_; ++v) base += gamma[v] * pts[p][v];
            for (int r = 0; r < static_cast<int>(pts.size()); ++r) {
                if (r == p || r == q) continue;
                double val = w[r];
                for (int v = 0; v < k_; ++v) val += gamma[v] * pts[r][v];
                min_slack = std::min(min_slack, val - base);
            }
        }
        if (min_slack <= -kMarginTol) return;
        if (min_slack <= kMarginTol) throw DegenerateLifting();

        MixedCell cell;
        cell.edges.resize(k_);
        for (int l = 0; l < k_; ++l) cell.edges[sups[l]] = edges[l];
        cell.gamma = std::move(gamma);

        std::vector<std::vector<long long>> M(k_, std::vector<long long>(k_));
        for (int j = 0; j < k_; ++j) {
            const auto [p, q] = cell.edges[j];
            for (int v = 0; v < k_; ++v) M[j][v] = sup_[j][q][v] - sup_[j][p][v];
        }
        cell.volume = integer_abs_det(std::move(M));
        if (cell.volume == 0) throw DegenerateLifting();
        cells_.push_back(std::move(cell));
    }
};

}  // namespace

std::vector<std::vector<Monomial>> augmented_supports(const PolynomialSystem& sys) {
    std::vector<std::vector<Monomial>> out;
    out.reserve(sys.polys.size());
    for (const auto& p : sys.polys) {
        if (p.is_zero()) throw std::invalid_argument("zero polynomial in system");
        std::vector<Monomial> s = support(p);
        Monomial origin(sys.ambient_dim, 0);
        if (!std::binary_search(s.begin(), s.end(), origin, GradedLexLess{}))
            s.insert(s.begin(), origin);  // graded lex puts the origin first
        out.push_back(std::move(s));
    }
    return out;
}

Lifting draw_lifting(const PolynomialSystem& sys, std::uint64_t seed) {
    const auto sups = augmented_supports(sys);
    Lifting lf;
    lf.seed = seed;
    std::mt19937_64 rng(seed);
    for (const auto& s : sups) {
        std::vector<double> v(s.size());
        for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        lf.values.push_back(std::move(v));
    }
    return lf;
}

std::vector<MixedCell> enumerate_mixed_cells(const PolynomialSystem& sys, const Lifting& lifting) {
    if (!sys.is_square()) throw std::invalid_argument("mixed cells need a square system");
    const auto sups = augmented_supports(sys);
    if (sups.size() != lifting.values.size())
        throw std::invalid_argument("lifting does not match the system");
    for (std::size_t j = 0; j < sups.size(); ++j)
        if (sups[j].size() != lifting.values[j].size())
            throw std::invalid_argument("lifting does not match the support sizes");
    Enumerator en(sups, lifting);
    return en.run();
}

MixedVolumeResult mixed_volume(const PolynomialSystem& sys, std::uint64_t seed) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        Lifting lf = draw_lifting(sys, seed + 0x9e3779b97f4a7c15ULL * attempt);
        try {
            MixedVolumeResult res;
            res.cells = enumerate_mixed_cells(sys, lf);
            res.lifting = std::move(lf);
            res.supports = augmented_supports(sys);
            res.value = 0;
            for (const auto& c : res.cells) res.value += c.volume;
            return res;
        } catch (const DegenerateLifting&) {
            continue;
        }
    }
    throw RetryExhausted();
}

}  // namespace gnesolve
