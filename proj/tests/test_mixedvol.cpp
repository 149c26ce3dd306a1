#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gnesolve/gnep.hpp"
#include "gnesolve/mixedvol.hpp"
#include "gnesolve/samples.hpp"

using namespace gnesolve;

namespace {

SparsePolynomial dense_random(std::mt19937& rng, int dim, int deg) {
    std::uniform_real_distribution<double> dc(0.2, 2.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    SparsePolynomial p(dim);
    for (const auto& a : monomials_up_to(dim, deg))
        p.add_term(a, dc(rng) * (sign(rng) < 0 ? -1.0 : 1.0));
    return p;
}

// Mixed-volume oracle for two 2-D polytopes: area(P+Q) - area(P) - area(Q),
// evaluated by sampling the volume polynomial of alpha1*P + alpha2*Q.
double mixed_area_oracle(const std::vector<Monomial>& A, const std::vector<Monomial>& B) {
    auto minkowski_area = [&](double s, double t) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& a : A)
            for (const auto& b : B)
                pts.push_back({s * a[0] + t * b[0], s * a[1] + t * b[1]});
        // gift wrap: shoelace over hull of pts
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto cross = [](auto o, auto p, auto q) {
            return (p.first - o.first) * (q.second - o.second) -
                   (p.second - o.second) * (q.first - o.first);
        };
        std::vector<std::pair<double, double>> h;
        for (const auto& p : pts) {
            while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) <= 1e-12) h.pop_back();
            h.push_back(p);
        }
        const std::size_t lower = h.size() + 1;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            while (h.size() >= lower && cross(h[h.size() - 2], h.back(), *it) <= 1e-12) h.pop_back();
            h.push_back(*it);
        }
        h.pop_back();
        double area = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const auto& p = h[i];
            const auto& q = h[(i + 1) % h.size()];
            area += p.first * q.second - q.first * p.second;
        }
        return 0.5 * std::abs(area);
    };
    return minkowski_area(1, 1) - minkowski_area(1, 0) - minkowski_area(0, 1);
}

}  // namespace

TEST_CASE("sample NEP system has mixed volume 8") {
    auto sys = build_complex_kkt(samples::ex22());
    auto mv = mixed_volume(sys);
    CHECK(mv.value == 8);
    long long total = 0;
    for (const auto& c : mv.cells) total += c.volume;
    CHECK(total == mv.value);
}

TEST_CASE("single univariate equation") {
    // x^2 - 1: one cell of volume 2 over conv{0,2}
    PolynomialSystem sys(1);
    SparsePolynomial p(1);
    p.add_term({2}, 1.0);
    p.add_term({0}, -1.0);
    sys.push(p);
    auto mv = mixed_volume(sys);
    CHECK(mv.value == 2);
    CHECK(mv.cells.size() == 1);
}

TEST_CASE("two generic linear polynomials") {
    std::mt19937 rng(5);
    PolynomialSystem sys(2);
    sys.push(dense_random(rng, 2, 1));
    sys.push(dense_random(rng, 2, 1));
    auto mv = mixed_volume(sys);
    CHECK(mv.value == 1);
    CHECK(mv.cells.size() == 1);
    CHECK(mv.cells[0].volume == 1);
}

TEST_CASE("two dense quadrics give 4, matching the area oracle") {
    std::mt19937 rng(9);
    PolynomialSystem sys(2);
    sys.push(dense_random(rng, 2, 2));
    sys.push(dense_random(rng, 2, 2));
    auto mv = mixed_volume(sys);
    CHECK(mv.value == 4);
    const double oracle = mixed_area_oracle(support(sys.polys[0]), support(sys.polys[1]));
    CHECK(mv.value == doctest::Approx(oracle));
}

TEST_CASE("dense systems match the Bezout number") {
    std::mt19937 rng(13);
    const int degs[][3] = {{1, 2, 0}, {2, 3, 0}, {3, 2, 0}, {2, 2, 2}, {1, 2, 3}};
    for (const auto& d : degs) {
        const int k = d[2] == 0 ? 2 : 3;
        PolynomialSystem sys(k);
        long long bezout = 1;
        for (int j = 0; j < k; ++j) {
            sys.push(dense_random(rng, k, d[j]));
            bezout *= d[j];
        }
        auto mv = mixed_volume(sys);
        CHECK(mv.value == bezout);
    }
}

TEST_CASE("value is lifting independent") {
    auto sys = build_complex_kkt(samples::ex53());
    auto a = mixed_volume(sys, 1);
    auto b = mixed_volume(sys, 99991);
    CHECK(a.value == b.value);
    CHECK(a.value == 23);
}

TEST_CASE("two different seeds draw different liftings") {
    auto sys = build_complex_kkt(samples::ex22());
    auto a = draw_lifting(sys, 1);
    auto b = draw_lifting(sys, 2);
    CHECK(a.values != b.values);
}

TEST_CASE("binomial equation has one cell for any lifting") {
    PolynomialSystem sys(1);
    SparsePolynomial p(1);
    p.add_term({3}, 2.0);
    p.add_term({0}, -5.0);
    sys.push(p);
    for (std::uint64_t seed : {1, 7, 123}) {
        auto cells = enumerate_mixed_cells(sys, draw_lifting(sys, seed));
        CHECK(cells.size() == 1);
        CHECK(cells[0].volume == 3);
    }
}

TEST_CASE("monotone under support growth") {
    std::mt19937 rng(17);
    for (int it = 0; it < 5; ++it) {
        PolynomialSystem sys(2);
        sys.push(dense_random(rng, 2, 2));
        sys.push(dense_random(rng, 2, 1));
        auto base = mixed_volume(sys).value;
        PolynomialSystem grown = sys;
        Monomial extra{3, 1};
        grown.polys[1].add_term(extra, 1.0);
        CHECK(mixed_volume(grown).value >= base);
    }
}

TEST_CASE("cells expose strictly minimal lifted edges") {
    auto sys = build_complex_kkt(samples::ex22());
    auto lift = draw_lifting(sys, 3);
    auto cells = enumerate_mixed_cells(sys, lift);
    auto sups = augmented_supports(sys);
    REQUIRE(!cells.empty());
    for (const auto& cell : cells) {
        for (std::size_t j = 0; j < sups.size(); ++j) {
            const auto [p, q] = cell.edges[j];
            auto val = [&](int r) {
                double v = lift.values[j][r];
                for (int t = 0; t < sys.ambient_dim; ++t) v += cell.gamma[t] * sups[j][r][t];
                return v;
            };
            CHECK(val(p) == doctest::Approx(val(q)).epsilon(1e-7));
            for (int r = 0; r < static_cast<int>(sups[j].size()); ++r) {
                if (r == p || r == q) continue;
                CHECK(val(r) > val(p) + 1e-9);
            }
        }
    }
}

TEST_CASE("random convex quadratic instances hit the tabulated values") {
    // (N, n_i) -> (2 n_i + 1)^N for the quadratic game family
    CHECK(mixed_volume(build_complex_kkt(random_gnep(2, 2, 2, true, 1))).value == 25);
    CHECK(mixed_volume(build_complex_kkt(random_gnep(2, 2, 2, true, 2))).value == 25);
    CHECK(mixed_volume(build_complex_kkt(random_gnep(2, 3, 2, true, 3))).value == 49);
}
