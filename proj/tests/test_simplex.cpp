#include "qsh/errors.hpp"
#include "qsh/simplex.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsh::lp;

TEST_CASE("simplex solves a small bounded program") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
    LinearProgram p;
    p.add_variable();
    p.add_variable();
    p.add_constraint({1, 0}, Sense::LessEqual, 4);
    p.add_constraint({0, 2}, Sense::LessEqual, 12);
    p.add_constraint({3, 2}, Sense::LessEqual, 18);
    const auto s = p.maximize({3, 5});
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(36).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(2));
    CHECK(s.x[1] == doctest::Approx(6));
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
    LinearProgram infeasible;
    infeasible.add_variable();
    infeasible.add_constraint({1}, Sense::GreaterEqual, 2);
    infeasible.add_constraint({1}, Sense::LessEqual, 1);
    const auto a = infeasible.minimize({1});
    CHECK(a.status == Status::Infeasible);
    CHECK(std::isinf(a.objective));

    LinearProgram unbounded;
    unbounded.add_variable(VarKind::Free);
    unbounded.add_constraint({1}, Sense::LessEqual, 3);
    const auto b = unbounded.minimize({1});
    CHECK(b.status == Status::Unbounded);
    CHECK(b.objective == -INFINITY);
}

TEST_CASE("simplex handles negative right-hand sides and free variables") {
    // min |x + 3| via t >= x + 3, t >= -x - 3 -> 0 at x = -3
    LinearProgram p;
    p.add_variable(VarKind::Free);
    p.add_variable();
    p.add_constraint({-1, 1}, Sense::GreaterEqual, 3);
    p.add_constraint({1, 1}, Sense::GreaterEqual, -3);
    const auto s = p.minimize({0, 1});
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(0).scale(1));
    CHECK(s.x[0] == doctest::Approx(-3));
}

TEST_CASE("simplex survives redundant equality rows") {
    LinearProgram p;
    p.add_variable();
    p.add_variable();
    p.add_constraint({1, 1}, Sense::Equal, 1);
    p.add_constraint({2, 2}, Sense::Equal, 2);
    const auto s = p.minimize({1, 2});
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(1));
    CHECK(s.x[0] == doctest::Approx(1));
}

TEST_CASE("Bland's rule terminates on Beale's cycling example") {
    LinearProgram p;
    for (int i = 0; i < 4; ++i) p.add_variable();
    p.add_constraint({0.25, -8, -1, 9}, Sense::LessEqual, 0);
    p.add_constraint({0.5, -12, -0.5, 3}, Sense::LessEqual, 0);
    p.add_constraint({0, 0, 1, 0}, Sense::LessEqual, 1);
    const auto s = p.minimize({-0.75, 20, -0.5, 6});
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(-1.25));
    CHECK(s.x[0] == doctest::Approx(1));
    CHECK(s.x[2] == doctest::Approx(1));
}

TEST_CASE("alternative optima are flagged") {
    // min x + y on x + y >= 1: a whole edge is optimal.
    LinearProgram p;
    p.add_variable();
    p.add_variable();
    p.add_constraint({1, 1}, Sense::GreaterEqual, 1);
    CHECK(p.minimize({1, 1}).alternative_optima);
    CHECK_FALSE(p.minimize({1, 2}).alternative_optima);
}

TEST_CASE("constraint rows longer than the variable list are rejected") {
    LinearProgram p;
    p.add_variable();
    CHECK_THROWS_AS(p.add_constraint({1, 2}, Sense::Equal, 0), qsh::Error);
}
