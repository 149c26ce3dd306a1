#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../src/linprog.hpp"

using namespace gnesolve;

TEST_CASE("basic optimum") {
    // min -x1 - 2x2 s.t. x1 + x2 + s1 = 4, x1 + 3x2 + s2 = 6, x >= 0
    Eigen::MatrixXd A(2, 4);
    A << 1, 1, 1, 0, 1, 3, 0, 1;
    Eigen::VectorXd b(2);
    b << 4, 6;
    Eigen::VectorXd c(4);
    c << -1, -2, 0, 0;
    auto r = lp::solve(A, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-5.0));  // x = (3, 1)
    CHECK(r.x[0] == doctest::Approx(3.0));
    CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasible") {
    // x1 = -1 with x1 >= 0
    Eigen::MatrixXd A(1, 1);
    A << 1;
    Eigen::VectorXd b(1);
    b << -1;
    Eigen::VectorXd c(1);
    c << 0;
    auto r = lp::solve(A, b, c);
    CHECK(r.status == lp::Status::Infeasible);
}

TEST_CASE("unbounded") {
    // min -x1 s.t. x1 - x2 = 0
    Eigen::MatrixXd A(1, 2);
    A << 1, -1;
    Eigen::VectorXd b(1);
    b << 0;
    Eigen::VectorXd c(2);
    c << -1, 0;
    auto r = lp::solve(A, b, c);
    CHECK(r.status == lp::Status::Unbounded);
}

TEST_CASE("equality-only system with negative rhs") {
    // min x1 + x2 s.t. x1 - x2 = -3 -> x = (0,3)
    Eigen::MatrixXd A(1, 2);
    A << 1, -1;
    Eigen::VectorXd b(1);
    b << -3;
    Eigen::VectorXd c(2);
    c << 1, 1;
    auto r = lp::solve(A, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("redundant rows are tolerated") {
    Eigen::MatrixXd A(3, 3);
    A << 1, 1, 0, 2, 2, 0, 1, 0, 1;
    Eigen::VectorXd b(3);
    b << 2, 4, 3;
    Eigen::VectorXd c(3);
    c << 1, 2, 1;
    auto r = lp::solve(A, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    // x = (2, 0, 1) is optimal: objective 3
    CHECK(r.objective == doctest::Approx(3.0));
}
