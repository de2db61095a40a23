#include "qsh/errors.hpp"
#include "qsh/geometry.hpp"
#include "qsh/measures.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace qsh;

namespace {

PriorFamily family(std::initializer_list<std::vector<double>> priors) {
    std::vector<DiscreteMeasure> ps;
    for (const auto& w : priors) ps.emplace_back(w);
    return PriorFamily(std::move(ps));
}

RandomVariable scalar_rv(std::initializer_list<double> xs) {
    RandomVariable x;
    for (double v : xs) x.values.push_back(Point{v});
    return x;
}

}  // namespace

TEST_CASE("DiscreteMeasure validates its weights") {
    CHECK_NOTHROW(DiscreteMeasure({0.25, 0.75}));
    CHECK_THROWS_AS(DiscreteMeasure({0.5, 0.6}), Error);
    CHECK_THROWS_AS(DiscreteMeasure({-0.1, 1.1}), Error);
    CHECK_THROWS_AS(DiscreteMeasure({}), Error);
    const auto m = DiscreteMeasure::normalized({1, 3});
    CHECK(m[0] == 0.25);
    CHECK_THROWS_AS(DiscreteMeasure::normalized({0, 0}), Error);
}

TEST_CASE("PriorFamily requires a common atom count") {
    CHECK_THROWS_AS(PriorFamily({}), Error);
    CHECK_THROWS_AS(family({{1.0}, {0.5, 0.5}}), Error);
}

TEST_CASE("relevant_atoms spec examples") {
    CHECK(relevant_atoms(family({{0.5, 0.5, 0}, {0, 1, 0}})) == std::vector<std::size_t>{0, 1});
    CHECK(polar_atoms(family({{0.5, 0.5, 0}, {0, 1, 0}})) == std::vector<std::size_t>{2});
    CHECK(relevant_atoms(family({{1.0}})) == std::vector<std::size_t>{0});
    CHECK(relevant_atoms(family({{1, 0}, {0, 1}})) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("polarity threshold separates structural zeros from noise") {
    const auto f = family({{1.0 - 1e-13, 1e-13}});
    CHECK(relevant_atoms(f) == std::vector<std::size_t>{0});
    const auto g = family({{1.0 - 1e-11, 1e-11}});
    CHECK(relevant_atoms(g) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("quasi_support spec examples") {
    CHECK(quasi_support(family({{0.5, 0.5}}), scalar_rv({1, 2})) ==
          SupportSet({Point{1}, Point{2}}));
    CHECK(quasi_support(family({{1, 0}, {0, 1}}), scalar_rv({3, 3})) == SupportSet({Point{3}}));
    CHECK(quasi_support(family({{1, 0, 0}, {0, 1, 0}}), scalar_rv({1, 2, 99})) ==
          SupportSet({Point{1}, Point{2}}));
}

TEST_CASE("quasi_support output is sorted and rejects mismatches") {
    const auto s = quasi_support(family({{0.2, 0.3, 0.5}}), scalar_rv({5, -1, 2}));
    CHECK(s.points() == std::vector<Point>{Point{-1}, Point{2}, Point{5}});
    CHECK_THROWS_AS(quasi_support(family({{0.5, 0.5}}), scalar_rv({1})), Error);
    RandomVariable mixed{{Point{1}, Point{1, 2}}};
    CHECK_THROWS_AS(quasi_support(family({{0.5, 0.5}}), mixed), Error);
}

TEST_CASE("essential_supremum spec examples") {
    const std::vector<ScalarVariable> one{{{1, 2, 3}}};
    CHECK(essential_supremum(family({{0.5, 0.5, 0}}), one) == 2);
    const std::vector<ScalarVariable> two{{{1, 2}}, {{5, 0}}};
    CHECK(essential_supremum(family({{0.5, 0.5}}), two) == 5);
    const std::vector<ScalarVariable> single{{{7}}};
    CHECK(essential_supremum(family({{1.0}}), single) == 7);
    CHECK_THROWS_WITH_AS(essential_supremum(family({{1.0}}), std::vector<ScalarVariable>{}),
                         doctest::Contains("EmptyFamily"), Error);
}

TEST_CASE("essup_of_function spec examples") {
    const auto all = family({{0.2, 0.3, 0.5}});
    const PointFunction identity = [](const Point& z) { return std::optional<double>(z[0]); };
    CHECK(essup_of_function(all, scalar_rv({1, 2, 3}), identity) == 3);

    const auto pm = scalar_rv({-20, 20});
    const PointFunction minus_theta = [](const Point& z) { return std::optional<double>(-1.0 * z[0]); };
    const double v = essup_of_function(family({{0.5, 0.5}}), pm, minus_theta);
    CHECK(v == 20);
    CHECK(v == geometry::support_function(SupportSet({Point{-20}, Point{20}}), Point{1}));

    const PointFunction h = [](const Point& z) { return std::optional<double>(z[0] * z[0] + 1); };
    CHECK(essup_of_function(family({{1.0}}), scalar_rv({5}), h) == 26);
}

TEST_CASE("essup_of_function reports missing values") {
    const PointFunction partial = [](const Point& z) -> std::optional<double> {
        if (z[0] == 1) return 0.0;
        return std::nullopt;
    };
    CHECK_THROWS_WITH_AS(essup_of_function(family({{0.5, 0.5}}), scalar_rv({1, 2}), partial),
                         doctest::Contains("MissingValue"), Error);
    // Undefined only on a polar atom is fine.
    CHECK(essup_of_function(family({{1, 0}}), scalar_rv({1, 2}), partial) == 0);
}

TEST_CASE("measures properties on random families") {
    testing::Rng rng(31337);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t atoms = static_cast<std::size_t>(testing::uniform_int(rng, 1, 8));
        const auto fam = testing::random_family(rng, atoms, 3, 0.4);
        RandomVariable x;
        ScalarVariable xs;
        for (std::size_t j = 0; j < atoms; ++j) {
            const double v = testing::uniform_int(rng, -5, 5);
            x.values.push_back(Point{v});
            xs.values.push_back(v);
        }
        const PointFunction h = [](const Point& z) { return std::optional<double>(std::sin(z[0])); };
        ScalarVariable hx;
        for (double v : xs.values) hx.values.push_back(std::sin(v));
        const std::vector<ScalarVariable> composed{hx};
        CHECK(essup_of_function(fam, x, h) == essential_supremum(fam, composed));

        // Adding priors never removes support points.
        std::vector<DiscreteMeasure> more = fam.priors();
        more.emplace_back(testing::random_weights(rng, atoms, 0.4));
        const PriorFamily bigger(more);
        const auto small_support = quasi_support(fam, x);
        const auto big_support = quasi_support(bigger, x);
        for (const auto& p : small_support) CHECK(big_support.find(p) < big_support.size());

        // Reweighting with the same zero pattern changes nothing.
        std::vector<DiscreteMeasure> reweighted;
        for (const auto& p : fam.priors()) {
            std::vector<double> w(p.weights().begin(), p.weights().end());
            for (auto& v : w) v *= testing::uniform(rng, 0.5, 2.0);
            reweighted.push_back(DiscreteMeasure::normalized(w));
        }
        const PriorFamily same_pattern(reweighted);
        CHECK(relevant_atoms(same_pattern) == relevant_atoms(fam));
        CHECK(quasi_support(same_pattern, x) == small_support);
        const std::vector<ScalarVariable> xv{xs};
        CHECK(essential_supremum(same_pattern, xv) == essential_supremum(fam, xv));

        // Atomwise domination carries over to the essential supremum.
        ScalarVariable above = xs;
        for (auto& v : above.values) v += testing::uniform(rng, 0, 3);
        const std::vector<ScalarVariable> av{above};
        CHECK(essential_supremum(fam, xv) <= essential_supremum(fam, av));
    }
}
