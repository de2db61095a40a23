#include "qsh/errors.hpp"
#include "qsh/grid_oracle.hpp"
#include "qsh/pricing.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsh;

namespace {

OnePeriodMarket market_1d(double y, std::vector<double> ys, std::vector<std::vector<double>> priors) {
    RandomVariable terminal;
    for (double v : ys) terminal.values.push_back(Point{v});
    std::vector<DiscreteMeasure> ps;
    for (auto& w : priors) ps.emplace_back(w);
    return OnePeriodMarket(Point{y}, std::move(terminal), PriorFamily(std::move(ps)));
}

Payoff call(double k) {
    return [k](const Point& z) { return std::optional<double>(std::max(z[0] - k, 0.0)); };
}

Payoff constant(double c) {
    return [c](const Point&) { return std::optional<double>(c); };
}

std::vector<geometry::MinimaxRow> rows_for(const OnePeriodMarket& m, const Payoff& g) {
    std::vector<geometry::MinimaxRow> rows;
    for (std::size_t j : m.relevant()) {
        rows.push_back({*g(m.terminal().values[j]), m.initial() - m.terminal().values[j]});
    }
    return rows;
}

}  // namespace

TEST_CASE("OnePeriodMarket validation") {
    CHECK_THROWS_WITH_AS(market_1d(-1, {80, 120}, {{0.5, 0.5}}), doctest::Contains("InvalidMarket"),
                         Error);
    CHECK_THROWS_WITH_AS(market_1d(100, {80, -1}, {{0.5, 0.5}}), doctest::Contains("InvalidMarket"),
                         Error);
    CHECK_THROWS_AS(market_1d(100, {80, 120, 90}, {{0.5, 0.5}}), Error);
    const auto m = market_1d(100, {80, 120}, {{0.5, 0.5}});
    CHECK(m.increment_support() == SupportSet({Point{-20}, Point{20}}));
}

TEST_CASE("superhedge_price binomial call") {
    const auto m = market_1d(100, {80, 120}, {{0.5, 0.5}});
    const auto r = superhedge_price(m, call(100));
    REQUIRE(r.status == PriceStatus::Finite);
    const auto grid = oracle::grid_minimax(rows_for(m, call(100)), 1, 5.0, 1e-4);
    CHECK(std::abs(grid.value - 10.0) <= 1e-9);
    CHECK(std::abs(r.price - 10.0) <= 1e-9);
    CHECK(std::abs((*r.theta_hat)[0] - 0.5) <= 1e-9);
    CHECK(r.closedness == Closedness::StrictlyClosed);
    CHECK_FALSE(r.hedge_non_unique);
    for (double s : r.certificate_slack) CHECK(std::abs(s) <= 1e-9);
}

TEST_CASE("superhedge_price of the zero claim") {
    const auto aip = market_1d(100, {80, 120}, {{0.5, 0.5}});
    const auto r0 = superhedge_price(aip, PerAtomClaim{{0, 0}});
    CHECK(r0.status == PriceStatus::Finite);
    CHECK(r0.price == doctest::Approx(0).scale(1));

    const auto ip = market_1d(130, {80, 120}, {{0.5, 0.5}});
    const auto r1 = superhedge_price(ip, PerAtomClaim{{0, 0}});
    CHECK(r1.status == PriceStatus::InstantaneousProfit);
    CHECK(r1.price == -INFINITY);
    CHECK_FALSE(r1.theta_hat);
    CHECK(r1.closedness == Closedness::NotClosed);
    // The grid objective keeps falling as the radius grows.
    const auto rows = rows_for(ip, constant(0));
    CHECK(oracle::grid_minimax(rows, 1, 10, 1).value == -100);
    CHECK(oracle::grid_minimax(rows, 1, 100, 1).value == -1000);
}

TEST_CASE("superhedge_price claim errors") {
    const auto m = market_1d(100, {80, 120}, {{0.5, 0.5}});
    CHECK_THROWS_WITH_AS(superhedge_price(m, PerAtomClaim{{1}}), doctest::Contains("ClaimMismatch"),
                         Error);
    const Payoff only80 = [](const Point& z) -> std::optional<double> {
        if (z[0] == 80) return 1.0;
        return std::nullopt;
    };
    CHECK_THROWS_WITH_AS(superhedge_price(m, only80), doctest::Contains("ClaimMismatch"), Error);
}

TEST_CASE("per-atom claims keep atoms with equal Y distinct") {
    // Two atoms at Y = 120 with different claims: the larger one binds.
    const auto m = market_1d(100, {80, 120, 120}, {{0.5, 0.25, 0.25}});
    const auto r = superhedge_price(m, PerAtomClaim{{0, 10, 20}});
    REQUIRE(r.status == PriceStatus::Finite);
    CHECK(r.price == doctest::Approx(10));
    CHECK(r.certificate_slack.size() == 3);
    CHECK(r.certificate_slack[1] == doctest::Approx(10));
}

TEST_CASE("fenchel_conjugate spec examples") {
    const auto m = market_1d(100, {80, 120}, {{0.5, 0.5}});
    CHECK(fenchel_conjugate(m, call(100), Point{0}) == 20);
    CHECK(fenchel_conjugate(m, call(100), Point{1}) == 140);
    const auto single = market_1d(5, {5}, {{1.0}});
    const Payoff three = constant(3);
    for (double x : {-2.0, 0.0, 1.5}) CHECK(fenchel_conjugate(single, three, Point{x}) == 5 * x + 3);
    const Payoff none = [](const Point&) { return std::optional<double>(); };
    CHECK_THROWS_WITH_AS(fenchel_conjugate(m, none, Point{0}), doctest::Contains("MissingValue"),
                         Error);
}

TEST_CASE("price_via_biconjugate spec examples") {
    const auto m = market_1d(100, {80, 120}, {{0.5, 0.5}});
    CHECK(price_via_biconjugate(m, call(100)) == doctest::Approx(10));
    CHECK(price_via_biconjugate(m, call(100)) ==
          doctest::Approx(superhedge_price(m, call(100)).price));

    const auto three = market_1d(100, {80, 100, 120}, {{0.2, 0.3, 0.5}});
    PayoffTable t;
    t.set(Point{80}, 0);
    t.set(Point{100}, 15);
    t.set(Point{120}, 20);
    CHECK(price_via_biconjugate(three, t.as_payoff()) == doctest::Approx(15));

    const auto outside = market_1d(70, {80, 120}, {{0.5, 0.5}});
    CHECK(price_via_biconjugate(outside, call(100)) == -INFINITY);
}

TEST_CASE("closedness_diagnostic spec examples") {
    CHECK(closedness_diagnostic(market_1d(100, {80, 120}, {{0.5, 0.5}})) == Closedness::StrictlyClosed);
    CHECK(closedness_diagnostic(market_1d(50, {50, 50}, {{0.5, 0.5}})) == Closedness::DegenerateClosed);
    CHECK(closedness_diagnostic(market_1d(100, {110, 120}, {{0.5, 0.5}})) == Closedness::NotClosed);
    CHECK(closedness_diagnostic(market_1d(100, {100, 120}, {{0.5, 0.5}})) == Closedness::BoundaryCase);
}

TEST_CASE("closedness in two dimensions") {
    auto m2 = [](std::vector<Point> ys) {
        RandomVariable t{std::move(ys)};
        std::vector<double> w(t.values.size(), 1.0 / static_cast<double>(t.values.size()));
        return OnePeriodMarket(Point{10, 10}, std::move(t), PriorFamily({DiscreteMeasure(w)}));
    };
    // Segment through y: 0 is in the relative interior but not the interior.
    CHECK(closedness_diagnostic(m2({Point{5, 5}, Point{15, 15}})) == Closedness::BoundaryCase);
    CHECK(closedness_diagnostic(m2({Point{5, 5}, Point{15, 5}, Point{10, 15}})) ==
          Closedness::StrictlyClosed);
    CHECK(closedness_diagnostic(m2({Point{11, 11}, Point{12, 15}})) == Closedness::NotClosed);
}

TEST_CASE("degenerate market prices at the essential supremum") {
    const auto m = market_1d(50, {50, 50}, {{0.5, 0.5}});
    const auto r = superhedge_price(m, PerAtomClaim{{1, 4}});
    CHECK(r.price == 4);
    CHECK(r.closedness == Closedness::DegenerateClosed);
    const auto set = price_set_description(m, PerAtomClaim{{1, 4}});
    CHECK(set.lower_bound == 4);
    CHECK(set.closed_at_bound == true);
}

TEST_CASE("price_set_description spec examples") {
    const auto bin = price_set_description(market_1d(100, {80, 120}, {{0.5, 0.5}}), call(100));
    CHECK(bin.lower_bound == doctest::Approx(10));
    CHECK(bin.closed_at_bound == true);
    const auto ip = price_set_description(market_1d(130, {80, 120}, {{0.5, 0.5}}), constant(0));
    CHECK(ip.lower_bound == -INFINITY);
    CHECK_FALSE(ip.closed_at_bound.has_value());
}

TEST_CASE("pricing properties on random markets") {
    testing::Rng rng(424242);
    for (int trial = 0; trial < 200; ++trial) {
        testing::MarketSpec spec;
        spec.d = static_cast<std::size_t>(testing::uniform_int(rng, 1, 3));
        spec.atoms = static_cast<std::size_t>(testing::uniform_int(rng, 2, 8));
        spec.max_priors = 3;
        spec.zero_rate = 0.3;
        const auto m = testing::random_market_inside(rng, spec);
        const auto table = testing::random_table(rng, m);
        const Payoff g = table.as_payoff();
        const auto r = superhedge_price(m, g);
        REQUIRE(r.status == PriceStatus::Finite);

        // Dual-path equality.
        CHECK(std::abs(r.price - price_via_biconjugate(m, g)) <= 1e-7);

        // Certificate.
        const double min_slack = *std::min_element(r.certificate_slack.begin(), r.certificate_slack.end());
        CHECK(min_slack >= -1e-8);
        CHECK(min_slack <= 1e-8);

        // Cash invariance.
        const double c = testing::uniform(rng, -10, 10);
        const Payoff shifted = [&](const Point& z) { return std::optional<double>(*g(z) + c); };
        CHECK(std::abs(superhedge_price(m, shifted).price - (r.price + c)) <= 1e-8);

        // Hedge invariance.
        const Point theta0 = testing::random_point(rng, spec.d, -2, 2);
        PerAtomClaim hedged{std::vector<double>(m.atom_count(), 0.0)};
        for (std::size_t j = 0; j < m.atom_count(); ++j) {
            hedged.values[j] = *g(m.terminal().values[j]) + dot(theta0, m.increment(j));
        }
        CHECK(std::abs(superhedge_price(m, hedged).price - r.price) <= 1e-8);

        // Monotonicity.
        PayoffTable bigger;
        for (const auto& [z, v] : table.entries()) bigger.set(z, v + testing::uniform(rng, 0, 5));
        CHECK(r.price <= superhedge_price(m, bigger.as_payoff()).price + 1e-10);

        // Positive homogeneity and subadditivity.
        const double lam = testing::uniform(rng, 0, 3);
        const Payoff scaled = [&](const Point& z) { return std::optional<double>(lam * *g(z)); };
        CHECK(std::abs(superhedge_price(m, scaled).price - lam * r.price) <= 1e-8 * (1 + std::abs(r.price)));
        const auto other = testing::random_table(rng, m);
        const Payoff h = other.as_payoff();
        const Payoff sum = [&](const Point& z) { return std::optional<double>(*g(z) + *h(z)); };
        CHECK(superhedge_price(m, sum).price <= r.price + superhedge_price(m, h).price + 1e-8);

        // Conjugate consistency: essup(g(Y) - theta Y) = f*(-theta).
        for (int k = 0; k < 50; ++k) {
            const Point theta = testing::random_point(rng, spec.d, -3, 3);
            const PointFunction shifted_g = [&](const Point& z) {
                return std::optional<double>(*g(z) - dot(theta, z));
            };
            CHECK(essup_of_function(m.priors(), m.terminal(), shifted_g) ==
                  fenchel_conjugate(m, g, -1.0 * theta));
        }
    }
}

TEST_CASE("biconjugate price at a hull vertex returns the payoff") {
    testing::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        testing::MarketSpec spec;
        spec.d = static_cast<std::size_t>(testing::uniform_int(rng, 1, 3));
        spec.atoms = static_cast<std::size_t>(testing::uniform_int(rng, 2, 8));
        auto base = testing::random_market_inside(rng, spec);
        const auto support = base.support();
        const Point vertex = *std::max_element(support.begin(), support.end(), lex_less);
        const OnePeriodMarket m(vertex, base.terminal(), base.priors());
        const auto table = testing::random_table(rng, m);
        CHECK(std::abs(price_via_biconjugate(m, table.as_payoff()) - *table.lookup(vertex)) <= 1e-9);
    }
}

TEST_CASE("both routes report -inf when y is outside the hull") {
    testing::Rng rng(77);
    int seen = 0;
    while (seen < 50) {
        testing::MarketSpec spec;
        spec.d = static_cast<std::size_t>(testing::uniform_int(rng, 1, 3));
        spec.atoms = static_cast<std::size_t>(testing::uniform_int(rng, 2, 8));
        spec.max_priors = 2;
        spec.zero_rate = 0.2;
        const auto m = testing::random_market_outside(rng, spec);
        if (!m) continue;
        ++seen;
        const auto g = testing::random_table(rng, *m).as_payoff();
        CHECK(superhedge_price(*m, g).price == -INFINITY);
        CHECK(price_via_biconjugate(*m, g) == -INFINITY);
    }
}
