#include <doctest.h>

#include <cmath>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/influence.hpp"

using flocksim::InfluenceFunction;

TEST_SUITE_BEGIN("influence");

TEST_CASE("constant family evaluates to K everywhere") {
    const auto psi = InfluenceFunction::constant(1.0);
    CHECK(psi(5.0) == 1.0);
    CHECK(psi(0.0) == 1.0);
    CHECK(psi.sup_norm() == 1.0);
}

TEST_CASE("power law evaluates K/(1+r^2)^gamma") {
    const auto psi = InfluenceFunction::power_law(1.0, 1.0);
    CHECK(psi(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psi(0.0) == 1.0);
    CHECK(psi(3.0) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("tabulated interpolates linearly and extends constantly") {
    const auto psi = InfluenceFunction::tabulated({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(psi(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(psi(5.0) == 3.0);   // beyond the last knot
    CHECK(psi(0.0) == 1.0);
    CHECK(psi.sup_norm() == 3.0);
}

TEST_CASE("negative distance is a domain error") {
    const auto psi = InfluenceFunction::constant(1.0);
    CHECK_THROWS_AS(psi(-0.1), std::domain_error);
}

TEST_CASE("positivity and boundedness over random arguments") {
    const auto families = {
        InfluenceFunction::constant(2.0),
        InfluenceFunction::power_law(1.5, 0.7),
        InfluenceFunction::oscillating(0.2, 1.0, 3.0),
        InfluenceFunction::tabulated({{0.0, 0.5}, {1.0, 2.0}, {4.0, 0.25}}),
    };
    for (const auto& psi : families) {
        for (int k = 0; k < 10000; ++k) {
            const double r = 50.0 * flocksim::detail::mixed_uniform(7u, k);
            const double value = psi(r);
            CHECK(value > 0.0);
            CHECK(value <= psi.sup_norm() + 1e-15);
        }
    }
}

TEST_CASE("divergent-integral classification per family") {
    CHECK(InfluenceFunction::constant(1.0).integral_diverges());
    CHECK_FALSE(InfluenceFunction::power_law(1.0, 1.0).integral_diverges());
    CHECK(InfluenceFunction::power_law(1.0, 0.25).integral_diverges());
    CHECK(InfluenceFunction::power_law(1.0, 0.5).integral_diverges());
    CHECK(InfluenceFunction::oscillating(0.1, 2.0, 1.0).integral_diverges());
    CHECK(InfluenceFunction::tabulated({{0.0, 1.0}, {1.0, 0.2}}).integral_diverges());
}

TEST_CASE("minimum over [0, upper]") {
    CHECK(InfluenceFunction::constant(1.0).min_on(7.0) == 1.0);
    CHECK(InfluenceFunction::power_law(1.0, 1.0).min_on(3.0) == doctest::Approx(0.1).epsilon(1e-15));
    // a + b sin^2: the minimum a is attained at r = 0
    CHECK(InfluenceFunction::oscillating(0.2, 1.0, 1.0).min_on(3.14159265358979) ==
          doctest::Approx(0.2).epsilon(1e-15));
    const auto tab = InfluenceFunction::tabulated({{0.0, 1.0}, {1.0, 0.3}, {2.0, 2.0}});
    CHECK(tab.min_on(0.5) == doctest::Approx(0.65).epsilon(1e-15));  // midpoint of the first segment
    CHECK(tab.min_on(3.0) == doctest::Approx(0.3).epsilon(1e-15));

    // brute-force oracle on a fine grid for the non-monotone family
    const auto osc = InfluenceFunction::oscillating(0.4, 0.9, 2.5);
    for (double upper : {0.3, 1.0, 2.0, 6.0}) {
        double brute = osc(0.0);
        for (int k = 1; k <= 20000; ++k) brute = std::min(brute, osc(upper * k / 20000.0));
        CHECK(osc.min_on(upper) <= brute + 1e-12);
        CHECK(osc.min_on(upper) >= brute - 1e-6);
    }
}

TEST_CASE("construction rejects invalid parameters") {
    CHECK_THROWS_AS(InfluenceFunction::constant(0.0), flocksim::ConfigError);
    CHECK_THROWS_AS(InfluenceFunction::power_law(1.0, -0.5), flocksim::ConfigError);
    CHECK_THROWS_AS(InfluenceFunction::oscillating(0.0, 1.0, 1.0), flocksim::ConfigError);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.0, 1.0}, {0.0, 2.0}}), flocksim::ConfigError);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.0, -1.0}}), flocksim::ConfigError);
}

TEST_SUITE_END();
