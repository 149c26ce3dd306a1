#include "gnesolve/samples.hpp"

#include <stdexcept>

namespace gnesolve::samples {
namespace {

// a term is a coefficient plus a list of (variable, exponent) pairs
using T = std::pair<double, std::vector<std::pair<int, int>>>;

SparsePolynomial poly(int n, const std::vector<T>& terms) {
    SparsePolynomial p(n);
    for (const auto& [coeff, vars] : terms) {
        Monomial a(n, 0);
        for (const auto& [v, e] : vars) a[v] += e;
        p.add_term(a, coeff);
    }
    return p;
}

Constraint ineq(SparsePolynomial g) { return {std::move(g), ConstraintKind::Inequality}; }
Constraint eq(SparsePolynomial g) { return {std::move(g), ConstraintKind::Equality}; }

// Quadratic game objective 0.5 x_i'A x_i + x_i'(B x_{-i} + b) over the full
// variable vector; `own`/`other` give the global indices of the blocks.
SparsePolynomial quad_objective(int n, const std::vector<int>& own, const std::vector<int>& other,
                                const std::vector<std::vector<double>>& A,
                                const std::vector<std::vector<double>>& B,
                                const std::vector<double>& b) {
    SparsePolynomial f(n);
    for (std::size_t r = 0; r < own.size(); ++r)
        for (std::size_t s = 0; s < own.size(); ++s) {
            Monomial a(n, 0);
            a[own[r]] += 1;
            a[own[s]] += 1;
            f.add_term(a, 0.5 * A[r][s]);
        }
    for (std::size_t r = 0; r < own.size(); ++r)
        for (std::size_t s = 0; s < other.size(); ++s) {
            Monomial a(n, 0);
            a[own[r]] += 1;
            a[other[s]] += 1;
            f.add_term(a, B[r][s]);
        }
    for (std::size_t r = 0; r < own.size(); ++r) {
        Monomial a(n, 0);
        a[own[r]] = 1;
        f.add_term(a, b[r]);
    }
    return f;
}

void add_box(PlayerProblem& pl, int n, const std::vector<int>& own, double lo, double hi) {
    for (int v : own) {
        pl.constraints.push_back(ineq(poly(n, {{1.0, {{v, 1}}}, {-lo, {}}})));  // v - lo >= 0
        pl.constraints.push_back(ineq(poly(n, {{hi, {}}, {-1.0, {{v, 1}}}})));  // hi - v >= 0
    }
}

GnepProblem ex56(bool convex_variant) {
    const int n = 7;
    const std::vector<int> x1{0, 1, 2}, x2{3, 4}, x3{5, 6};
    const std::vector<int> o1{3, 4, 5, 6}, o2{0, 1, 2, 5, 6}, o3{0, 1, 2, 3, 4};

    std::vector<std::vector<double>> A1;
    if (convex_variant)
        A1 = {{20, 5, 3}, {5, 5, -5}, {3, -5, 15}};
    else
        A1 = {{1, 2, 3}, {2, 5, -5}, {3, -5, 15}};
    const std::vector<std::vector<double>> A2{{11, -1}, {-1, 9}};
    const std::vector<std::vector<double>> A3{{48, 39}, {39, 53}};
    const std::vector<std::vector<double>> B1{{-6, 10, 11, 20}, {10, -4, -17, 9}, {15, 8, -22, 21}};
    const std::vector<std::vector<double>> B2{{20, 1, -3, 12, 1}, {10, -4, 8, 16, 21}};
    const std::vector<std::vector<double>> B3{{10, -2, 22, 12, 16}, {9, 19, 21, -4, 20}};
    const std::vector<double> b1{1, -1, 1}, b2{1, 0}, b3{-1, 2};

    PlayerProblem p1;
    p1.dim = 3;
    p1.objective = quad_objective(n, x1, o1, A1, B1, b1);
    add_box(p1, n, x1, -10, 10);
    p1.constraints.push_back(ineq(
        poly(n, {{20, {}}, {-1, {{0, 1}}}, {-1, {{1, 1}}}, {-1, {{2, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{3, 1}}}, {-1, {{6, 1}}}, {5, {}},
                                           {-1, {{0, 1}}}, {-1, {{1, 1}}}, {1, {{2, 1}}}})));

    PlayerProblem p2;
    p2.dim = 2;
    p2.objective = quad_objective(n, x2, o2, A2, B2, b2);
    add_box(p2, n, x2, -10, 10);
    p2.constraints.push_back(ineq(poly(n, {{1, {{1, 1}}}, {1, {{2, 1}}}, {-1, {{5, 1}}}, {7, {}},
                                           {-1, {{3, 1}}}, {1, {{4, 1}}}})));

    PlayerProblem p3;
    p3.dim = 2;
    p3.objective = quad_objective(n, x3, o3, A3, B3, b3);
    add_box(p3, n, x3, -10, 10);
    p3.constraints.push_back(ineq(poly(n, {{1, {{0, 1}}}, {1, {{2, 1}}}, {-1, {{3, 1}}}, {4, {}},
                                           {-1, {{6, 1}}}})));

    return GnepProblem({p1, p2, p3});
}

}  // namespace

GnepProblem ex22() {
    const int n = 2;
    PlayerProblem p1, p2;
    p1.dim = 1;
    p1.objective = poly(n, {{0.5, {{0, 2}, {1, 3}}}, {-1, {{0, 1}, {1, 2}}}, {-2, {{0, 1}, {1, 1}}}});
    p2.dim = 1;
    p2.objective = poly(n, {{0.5, {{0, 3}, {1, 2}}}, {-1, {{0, 2}, {1, 1}}}, {-2, {{0, 1}, {1, 1}}}});
    return GnepProblem({p1, p2});
}

namespace {

SparsePolynomial ex51_f1(int n) {
    // sum_j x_{1,j} (x_{1,j} - j x_{2,j})
    return poly(n, {{1, {{0, 2}}}, {-1, {{0, 1}, {3, 1}}},
                    {1, {{1, 2}}}, {-2, {{1, 1}, {4, 1}}},
                    {1, {{2, 2}}}, {-3, {{2, 1}, {5, 1}}}});
}

PlayerProblem ex51_p1(int n) {
    PlayerProblem p1;
    p1.dim = 3;
    p1.objective = ex51_f1(n);
    p1.constraints.push_back(ineq(poly(n, {{1, {}}, {-1, {{0, 1}, {1, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {}}, {-1, {{1, 1}, {2, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{0, 1}}}})));
    return p1;
}

// sum over 1<=i<j<=3, 1<=k<=3 of x_{1,i} x_{1,j} x_{2,k}
std::vector<T> pair_single_terms(double c) {
    std::vector<T> ts;
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs)
        for (int k = 3; k <= 5; ++k) ts.push_back({c, {{pr[0], 1}, {pr[1], 1}, {k, 1}}});
    return ts;
}

// sum over 1<=i<=3, 1<=j<k<=3 of x_{1,i} x_{2,j} x_{2,k}
std::vector<T> single_pair_terms(double c) {
    std::vector<T> ts;
    const int pairs[3][2] = {{3, 4}, {3, 5}, {4, 5}};
    for (int i = 0; i <= 2; ++i)
        for (const auto& pr : pairs) ts.push_back({c, {{i, 1}, {pr[0], 1}, {pr[1], 1}}});
    return ts;
}

}  // namespace

GnepProblem ex51i() {
    const int n = 6;
    PlayerProblem p2;
    p2.dim = 3;
    std::vector<T> ts{{1, {{3, 1}, {4, 1}, {5, 1}}}};
    for (auto& t : pair_single_terms(1.0)) ts.push_back(t);
    for (auto& t : single_pair_terms(1.0)) ts.push_back(t);
    p2.objective = poly(n, ts);
    p2.constraints.push_back(eq(poly(n, {{1, {}}, {-1, {{3, 2}}}, {-1, {{4, 2}}}, {-1, {{5, 2}}}})));
    return GnepProblem({ex51_p1(n), p2});
}

GnepProblem ex51ii() {
    const int n = 6;
    PlayerProblem p2;
    p2.dim = 3;
    std::vector<T> ts{{-1, {{3, 1}, {4, 1}, {5, 1}}}};
    for (auto& t : single_pair_terms(1.0)) ts.push_back(t);
    for (auto& t : pair_single_terms(-1.0)) ts.push_back(t);
    p2.objective = poly(n, ts);
    p2.constraints.push_back(eq(poly(n, {{1, {}}, {-1, {{3, 2}}}, {-1, {{4, 2}}}, {-1, {{5, 2}}}})));
    return GnepProblem({ex51_p1(n), p2});
}

GnepProblem ex52() {
    const int n = 6;
    PlayerProblem p1;
    p1.dim = 3;
    p1.objective = ex51_f1(n);
    p1.constraints.push_back(ineq(poly(n, {{1, {{5, 1}}}, {-1, {{0, 1}, {1, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{3, 1}}}, {-1, {{1, 1}, {2, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{0, 1}}}, {-1, {{4, 1}}}})));

    PlayerProblem p2;
    p2.dim = 3;
    std::vector<T> ts{{1, {{3, 1}, {4, 1}, {5, 1}}}};
    for (auto& t : pair_single_terms(1.0)) ts.push_back(t);
    for (auto& t : single_pair_terms(1.0)) ts.push_back(t);
    p2.objective = poly(n, ts);
    p2.constraints.push_back(
        eq(poly(n, {{1, {}}, {-1, {{0, 2}, {3, 2}}}, {-1, {{4, 2}}}, {-1, {{5, 2}}}})));
    return GnepProblem({p1, p2});
}

GnepProblem ex53() {
    const int n = 3;
    PlayerProblem p1;
    p1.dim = 2;
    p1.objective = poly(n, {{1, {{0, 2}}}, {-2, {{0, 1}}}, {1, {}},
                            {1, {{1, 2}}}, {-2, {{1, 1}}}, {1, {}},
                            {1, {{2, 1}, {0, 1}}}, {-1, {{2, 1}, {1, 1}}}});
    p1.constraints.push_back(ineq(poly(n, {{2, {}}, {-1, {{0, 2}}}, {-1, {{1, 2}}}, {-1, {{2, 1}}}})));

    PlayerProblem p2;
    p2.dim = 1;
    p2.objective = poly(n, {{1, {{2, 3}}}, {-1, {{0, 1}, {1, 1}, {2, 1}}}, {-1, {{2, 1}}}});
    p2.constraints.push_back(ineq(poly(n, {{3, {{2, 1}}}, {-1, {{0, 2}}}, {-1, {{1, 2}}}})));
    p2.constraints.push_back(ineq(poly(n, {{1, {}}, {-1, {{2, 1}}}})));
    return GnepProblem({p1, p2});
}

GnepProblem ex54() {
    const int n = 4;
    PlayerProblem p1;
    p1.dim = 2;
    p1.objective = poly(n, {{3, {{0, 3}, {2, 1}}}, {5, {{1, 3}}},
                            {-2, {{0, 1}, {2, 1}}}, {-2, {{0, 1}, {3, 1}}},
                            {-2, {{1, 1}, {2, 1}}}, {-2, {{1, 1}, {3, 1}}}});
    p1.constraints.push_back(
        ineq(poly(n, {{5, {{0, 1}}}, {-2, {{1, 1}}}, {3, {{3, 1}}}, {-1, {}}})));
    p1.constraints.push_back(
        ineq(poly(n, {{3, {}}, {-1, {{0, 2}, {2, 1}}}, {-1, {{1, 2}, {2, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{0, 1}}}, {2, {}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {{1, 1}}}, {-1, {}}})));

    PlayerProblem p2;
    p2.dim = 2;
    p2.objective = poly(n, {{2, {{0, 1}, {2, 3}}}, {3, {{1, 1}, {2, 3}}}, {-3, {{2, 1}}},
                            {7, {{3, 2}}}, {5, {{0, 1}, {1, 1}, {3, 1}}}});
    p2.constraints.push_back(
        ineq(poly(n, {{7, {{1, 1}}}, {3, {{3, 1}}}, {-5, {{2, 2}}}, {3, {}}})));
    p2.constraints.push_back(ineq(poly(n, {{2, {{2, 1}}}, {1, {}}})));
    p2.constraints.push_back(ineq(poly(n, {{2, {}}, {-1, {{3, 1}}}})));
    p2.constraints.push_back(ineq(poly(n, {{5, {}}, {1, {{3, 1}}}})));
    return GnepProblem({p1, p2});
}

GnepProblem ex55() {
    const int n = 4;
    PlayerProblem p1;
    p1.dim = 2;
    p1.objective = poly(n, {{2, {{0, 2}}}, {7, {{1, 2}}}, {3, {{0, 1}}}, {5, {{1, 1}}}});
    p1.constraints.push_back(ineq(poly(n, {{1, {}}, {-2, {{0, 2}}}, {-1, {{1, 2}}},
                                           {-3, {{2, 2}}}, {-5, {{3, 2}}}})));
    p1.constraints.push_back(ineq(poly(n, {{1, {}}, {-1, {{0, 1}}}})));
    p1.constraints.push_back(ineq(poly(n, {{0.5, {}}, {-1, {{1, 1}}}})));

    PlayerProblem p2;
    p2.dim = 2;
    p2.objective = poly(n, {{3, {{3, 2}}}, {-4, {{2, 1}, {3, 1}}}});
    p2.constraints.push_back(ineq(poly(n, {{3, {{0, 2}}}, {1, {{1, 2}}}, {0.7, {{2, 2}}},
                                           {6, {{3, 2}}}, {-1, {}}})));
    p2.constraints.push_back(ineq(poly(n, {{7, {}}, {-1, {{2, 1}}}})));
    p2.constraints.push_back(ineq(poly(n, {{1, {{3, 1}}}, {-0.3, {}}})));
    p2.constraints.push_back(ineq(poly(n, {{0.8, {}}, {-1, {{3, 1}}}})));
    return GnepProblem({p1, p2});
}

GnepProblem ex56i() { return ex56(true); }
GnepProblem ex56ii() { return ex56(false); }

std::vector<std::string> names() {
    return {"ex22", "ex51i", "ex51ii", "ex52", "ex53", "ex54", "ex55", "ex56i", "ex56ii"};
}

GnepProblem by_name(const std::string& name) {
    if (name == "ex22") return ex22();
    if (name == "ex51i") return ex51i();
    if (name == "ex51ii") return ex51ii();
    if (name == "ex52") return ex52();
    if (name == "ex53") return ex53();
    if (name == "ex54") return ex54();
    if (name == "ex55") return ex55();
    if (name == "ex56i") return ex56i();
    if (name == "ex56ii") return ex56ii();
    throw std::invalid_argument("unknown sample problem: " + name);
}

bool is_convex(const std::string& name) { return name == "ex53" || name == "ex56i"; }

}  // namespace gnesolve::samples
