#include <doctest.h>

#include <cmath>

#include "flocksim/delay.hpp"
#include "flocksim/errors.hpp"

using namespace flocksim;

TEST_SUITE_BEGIN("delay");

TEST_CASE("pointwise delay clamps into [0, tau_bar]") {
    PointwiseDelay d{TimeFunction::sinusoidal(0.3, 0.4, 2.0 * 3.14159265358979), 0.5};
    for (int k = 0; k <= 1000; ++k) {
        const double t = 10.0 * k / 1000.0;
        const double lag = d(t);
        CHECK(lag >= 0.0);
        CHECK(lag <= 0.5);
    }
}

TEST_CASE("beta normalizer has closed form") {
    // integral of beta(s) = s over [0.2, 0.8] is (0.64 - 0.04) / 2 = 0.3
    DistributedDelayKernel kernel(TimeFunction::constant(0.2), TimeFunction::constant(0.8), 1.0,
                                  BetaKernel::linear(1.0, 0.0));
    CHECK(kernel.normalizer(0.0) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("exponential beta against quadrature of its own samples") {
    const auto beta = BetaKernel::exponential(1.0);
    const double a = 0.1, b = 0.5;
    // trapezoid oracle
    double acc = 0.0;
    const int cells = 200000;
    for (int k = 0; k < cells; ++k) {
        const double s0 = a + (b - a) * k / cells;
        const double s1 = a + (b - a) * (k + 1) / cells;
        acc += 0.5 * (beta(s0) + beta(s1)) * (s1 - s0);
    }
    CHECK(beta.integral(a, b) == doctest::Approx(acc).epsilon(1e-9));
    CHECK(beta.integral(a, b) == doctest::Approx(std::exp(0.5) - std::exp(0.1)).epsilon(1e-14));
}

TEST_CASE("window ordering is enforced") {
    DistributedDelayKernel kernel(TimeFunction::constant(0.4), TimeFunction::constant(0.2), 1.0,
                                  BetaKernel::constant(1.0));
    CHECK_THROWS_AS(kernel.window(0.0), ConfigError);
}

TEST_CASE("sinusoidal window stays ordered when both laws move") {
    DistributedDelayKernel kernel(TimeFunction::constant(0.1),
                                  TimeFunction::sinusoidal(0.4, 0.1, 3.0), 0.6,
                                  BetaKernel::constant(2.0));
    for (int k = 0; k <= 300; ++k) {
        const double t = 12.0 * k / 300.0;
        const auto w = kernel.window(t);
        CHECK(w.lo < w.hi);
        CHECK(kernel.normalizer(t) > 0.0);
    }
}

TEST_CASE("negative beta is rejected") {
    CHECK_THROWS_AS(BetaKernel::constant(-1.0), ConfigError);
    CHECK_THROWS_AS(DistributedDelayKernel(TimeFunction::constant(0.0),
                                           TimeFunction::constant(0.5), 0.5,
                                           BetaKernel::linear(1.0, -2.0)),
                    ConfigError);
}

TEST_SUITE_END();
