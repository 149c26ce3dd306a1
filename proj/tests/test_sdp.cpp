#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gnesolve/sdp.hpp"

using namespace gnesolve;

namespace {

LmiProgram scalar_program(double c, double f0, double f1) {
    // min c*y s.t. f0 + f1*y >= 0
    LmiProgram prog;
    prog.objective = Eigen::VectorXd::Constant(1, c);
    LmiProgram::Block b;
    b.size = 1;
    b.constant = Eigen::MatrixXd::Constant(1, 1, f0);
    b.terms.push_back({0, 0, 0, f1});
    prog.blocks.push_back(b);
    prog.eq_lhs.resize(0, 1);
    prog.eq_rhs.resize(0);
    return prog;
}

}  // namespace

TEST_CASE("1x1 nonnegativity: min y s.t. y >= 0") {
    auto out = solve(scalar_program(1.0, 0.0, 1.0));
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(out.y[0] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("1x1 bound: min -y s.t. 1 - y >= 0") {
    auto out = solve(scalar_program(-1.0, 1.0, -1.0));
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.y[0] == doctest::Approx(1.0));
    CHECK(out.objective == doctest::Approx(-1.0));
}

TEST_CASE("2x2 off-diagonal coupling") {
    // min y11 + y22 s.t. [[y11, 1], [1, y22]] >= 0 -> optimum 2 at y11=y22=1
    LmiProgram prog;
    prog.objective = Eigen::VectorXd::Ones(2);
    LmiProgram::Block b;
    b.size = 2;
    b.constant = Eigen::MatrixXd::Zero(2, 2);
    b.constant(0, 1) = b.constant(1, 0) = 1.0;
    b.terms.push_back({0, 0, 0, 1.0});
    b.terms.push_back({1, 1, 1, 1.0});
    prog.blocks.push_back(b);
    prog.eq_lhs.resize(0, 2);
    prog.eq_rhs.resize(0);
    auto out = solve(prog);
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(out.y[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(out.y[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("weak duality and pencil feasibility at the optimum") {
    LmiProgram prog;
    prog.objective = Eigen::VectorXd::Ones(2);
    LmiProgram::Block b;
    b.size = 2;
    b.constant = Eigen::MatrixXd::Zero(2, 2);
    b.constant(0, 1) = b.constant(1, 0) = 1.0;
    b.terms.push_back({0, 0, 0, 1.0});
    b.terms.push_back({1, 1, 1, 1.0});
    prog.blocks.push_back(b);
    prog.eq_lhs.resize(0, 2);
    prog.eq_rhs.resize(0);
    auto out = solve(prog);
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.objective >= out.dual_value - 1e-7);
    Eigen::Matrix2d X;
    X << out.y[0], 1.0, 1.0, out.y[1];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(X);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-7);
}

TEST_CASE("equality constraints") {
    // min y1 s.t. y1 + y2 = 3, y1 >= 0, 2 - y2 >= 0: optimum y = (1, 2)
    LmiProgram prog;
    prog.objective.resize(2);
    prog.objective << 1.0, 0.0;
    LmiProgram::Block b1;
    b1.size = 1;
    b1.constant = Eigen::MatrixXd::Zero(1, 1);
    b1.terms.push_back({0, 0, 0, 1.0});
    LmiProgram::Block b2;
    b2.size = 1;
    b2.constant = Eigen::MatrixXd::Constant(1, 1, 2.0);
    b2.terms.push_back({1, 0, 0, -1.0});
    prog.blocks = {b1, b2};
    prog.eq_lhs.resize(1, 2);
    prog.eq_lhs << 1.0, 1.0;
    prog.eq_rhs = Eigen::VectorXd::Constant(1, 3.0);
    auto out = solve(prog);
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.y[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(out.y[1] == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("duplicate equality rows are tolerated") {
    LmiProgram prog;
    prog.objective.resize(2);
    prog.objective << 1.0, 0.0;
    LmiProgram::Block b1;
    b1.size = 1;
    b1.constant = Eigen::MatrixXd::Zero(1, 1);
    b1.terms.push_back({0, 0, 0, 1.0});
    LmiProgram::Block b2;
    b2.size = 1;
    b2.constant = Eigen::MatrixXd::Constant(1, 1, 2.0);
    b2.terms.push_back({1, 0, 0, -1.0});
    prog.blocks = {b1, b2};
    prog.eq_lhs.resize(3, 2);
    prog.eq_lhs << 1.0, 1.0, 1.0, 1.0, 2.0, 2.0;
    prog.eq_rhs.resize(3);
    prog.eq_rhs << 3.0, 3.0, 6.0;
    auto out = solve(prog);
    REQUIRE(out.status == SdpStatus::Optimal);
    CHECK(out.y[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("unbounded program detected") {
    // min -y with y >= 0 only
    auto out = solve(scalar_program(-1.0, 0.0, 1.0));
    CHECK(out.status == SdpStatus::Unbounded);
}

TEST_CASE("argmin is invariant under positive objective scaling") {
    auto a = solve(scalar_program(-1.0, 1.0, -1.0));
    auto b = solve(scalar_program(-7.5, 1.0, -1.0));
    REQUIRE(a.status == SdpStatus::Optimal);
    REQUIRE(b.status == SdpStatus::Optimal);
    CHECK(std::abs(a.y[0] - b.y[0]) < 1e-6);
}

TEST_CASE("input validation") {
    LmiProgram prog;
    prog.objective = Eigen::VectorXd::Ones(1);
    LmiProgram::Block b;
    b.size = 2;
    b.constant = Eigen::MatrixXd::Zero(2, 2);
    b.terms.push_back({0, 1, 0, 1.0});  // row > col
    prog.blocks.push_back(b);
    prog.eq_lhs.resize(0, 1);
    prog.eq_rhs.resize(0);
    CHECK_THROWS_AS(solve(prog), std::invalid_argument);
}
