#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gnesolve/gnep.hpp"
#include "gnesolve/samples.hpp"

using namespace gnesolve;

namespace {

SparsePolynomial from_terms(int n, std::initializer_list<std::pair<Monomial, double>> ts) {
    SparsePolynomial p(n);
    for (const auto& [a, c] : ts) p.add_term(a, c);
    return p;
}

}  // namespace

TEST_CASE("complex KKT of the unconstrained sample is the gradient system") {
    auto prob = samples::ex22();
    auto sys = build_complex_kkt(prob);
    REQUIRE(sys.ambient_dim == 2);
    REQUIRE(sys.size() == 2);
    CHECK(sys.polys[0] ==
          from_terms(2, {{{1, 3}, 1.0}, {{0, 2}, -1.0}, {{0, 1}, -2.0}}));
    CHECK(sys.polys[1] ==
          from_terms(2, {{{3, 1}, 1.0}, {{2, 0}, -1.0}, {{1, 0}, -2.0}}));
}

TEST_CASE("single-player assemblies") {
    {
        // f = x^2, no constraints -> {2x}
        PlayerProblem p;
        p.dim = 1;
        p.objective = from_terms(1, {{{2}, 1.0}});
        GnepProblem prob({p});
        auto sys = build_complex_kkt(prob);
        REQUIRE(sys.size() == 1);
        CHECK(sys.polys[0] == from_terms(1, {{{1}, 2.0}}));
    }
    {
        // f = x, constraint x >= 0 -> {1 - lambda, lambda*x}
        PlayerProblem p;
        p.dim = 1;
        p.objective = from_terms(1, {{{1}, 1.0}});
        p.constraints.push_back({from_terms(1, {{{1}, 1.0}}), ConstraintKind::Inequality});
        GnepProblem prob({p});
        auto sys = build_complex_kkt(prob);
        REQUIRE(sys.ambient_dim == 2);
        REQUIRE(sys.size() == 2);
        CHECK(sys.polys[0] == from_terms(2, {{{0, 0}, 1.0}, {{0, 1}, -1.0}}));
        CHECK(sys.polys[1] == from_terms(2, {{{1, 1}, 1.0}}));
    }
}

TEST_CASE("KKT system is square and lambda stays in its player's block") {
    for (const auto& name : {"ex51i", "ex52", "ex53", "ex54", "ex55"}) {
        auto prob = samples::by_name(name);
        auto sys = build_complex_kkt(prob);
        CHECK(sys.is_square());
        CHECK(sys.ambient_dim == prob.kkt_dim());

        const int n = prob.total_dim();
        // row ranges per player
        int row = 0;
        std::vector<std::pair<int, int>> player_rows;
        for (int i = 0; i < prob.num_players(); ++i) {
            const int cnt = prob.x_dim(i) + prob.num_constraints(i);
            player_rows.push_back({row, row + cnt});
            row += cnt;
        }
        for (int i = 0; i < prob.num_players(); ++i) {
            for (int j = 0; j < prob.num_constraints(i); ++j) {
                const int lam = n + prob.lambda_offset(i) + j;
                for (int r = 0; r < static_cast<int>(sys.size()); ++r) {
                    bool appears = false;
                    for (const auto& a : support(sys.polys[r]))
                        if (a[lam] > 0) appears = true;
                    if (appears) {
                        CHECK(r >= player_rows[i].first);
                        CHECK(r < player_rows[i].second);
                    }
                }
            }
        }
    }
}

TEST_CASE("feasible") {
    auto prob = samples::ex53();
    Eigen::VectorXd u(3);
    u << 0.4897, 1.0259, 0.7077;
    CHECK(feasible(prob, 0, u));
    CHECK(feasible(prob, 1, u));

    // unconstrained player is always feasible
    auto nep = samples::ex22();
    Eigen::VectorXd x(2);
    x << 123.0, -5.0;
    CHECK(feasible(nep, 0, x));

    // violated equality
    PlayerProblem p;
    p.dim = 1;
    p.objective = from_terms(1, {{{1}, 1.0}});
    p.constraints.push_back({from_terms(1, {{{1}, 1.0}, {{0}, -1.0}}), ConstraintKind::Equality});
    GnepProblem prob2({p});
    Eigen::VectorXd zero(1);
    zero << 0.0;
    CHECK_FALSE(feasible(prob2, 0, zero));
}

TEST_CASE("accuracy_delta") {
    // one player, equality g = x - 1, at x = 0 with delta_i = 0: min(0, -1) = -1
    PlayerProblem p;
    p.dim = 1;
    p.objective = from_terms(1, {{{2}, 1.0}});
    p.constraints.push_back({from_terms(1, {{{1}, 1.0}, {{0}, -1.0}}), ConstraintKind::Equality});
    GnepProblem prob({p});
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(accuracy_delta(prob, x, {0.0}) == doctest::Approx(-1.0));

    // strictly feasible point with delta_i = 0 gives exactly 0
    PlayerProblem q;
    q.dim = 1;
    q.objective = from_terms(1, {{{2}, 1.0}});
    q.constraints.push_back({from_terms(1, {{{1}, 1.0}, {{0}, 2.0}}), ConstraintKind::Inequality});
    GnepProblem prob2({q});
    Eigen::VectorXd y(1);
    y << 1.0;
    CHECK(accuracy_delta(prob2, y, {0.0}) == doctest::Approx(0.0));
}

TEST_CASE("random_gnep is reproducible and well-formed") {
    auto a = random_gnep(2, 2, 2, true, 42);
    auto b = random_gnep(2, 2, 2, true, 42);
    auto c = random_gnep(2, 2, 2, true, 43);
    CHECK(a.total_dim() == 4);
    CHECK(a.total_constraints() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(a.player(i).objective == b.player(i).objective);
        CHECK(a.player(i).constraints[0].g == b.player(i).constraints[0].g);
    }
    CHECK(a.player(0).objective != c.player(0).objective);

    auto d = random_gnep(2, 2, 3, false, 7);
    CHECK(d.player(0).objective.degree() == 3);
    // dense: C(4+3,3) = 35 coefficients drawn, none expected to cancel
    CHECK(d.player(0).objective.num_terms() == 35);

    CHECK_THROWS_AS(random_gnep(1, 2, 2, true, 0), std::invalid_argument);
}
