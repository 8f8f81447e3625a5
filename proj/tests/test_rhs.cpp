#include <doctest.h>

#include <cmath>
#include <vector>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/geometry.hpp"
#include "flocksim/rhs.hpp"

using namespace flocksim;

TEST_SUITE_BEGIN("rhs");

namespace {

SystemConfig pair_config(double tau, double tau_bar, std::vector<double> v0) {
    SystemConfig cfg;
    cfg.n_agents = 2;
    cfg.dim = 1;
    cfg.psi = InfluenceFunction::constant(1.0);
    cfg.delay = DelaySpec{PointwiseDelay{TimeFunction::constant(tau), tau_bar}};
    cfg.schedule = WeightSchedule::always_on({std::max(1.0, tau_bar), 1.0});
    cfg.initial = {InitialField::constant(2, 1, {0.0, 0.0}),
                   InitialField::constant(2, 1, std::move(v0))};
    cfg.integrator.t_end = 1.0;
    return cfg;
}

} // namespace

TEST_CASE("communication rate examples") {
    const std::vector<double> origin{0.0, 0.0};
    const std::vector<double> unit{1.0, 0.0};
    CHECK(communication_rate(InfluenceFunction::constant(1.0), 2, origin, unit) == 1.0);
    CHECK(communication_rate(InfluenceFunction::power_law(1.0, 1.0), 3, origin, unit) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(communication_rate(InfluenceFunction::power_law(1.0, 1.0), 2, origin, origin) == 1.0);
    CHECK_THROWS_AS(communication_rate(InfluenceFunction::constant(1.0), 1, origin, unit),
                    ConfigError);
}

TEST_CASE("zero-delay pair has the classical alignment derivative") {
    auto cfg = pair_config(0.0, 0.0, {0.5, -0.5});
    TrajectoryHistory hist(cfg.initial, 0.0);
    std::vector<double> x{0.0, 0.0}, v{0.5, -0.5}, dx(2), dv(2);
    rhs_pointwise(cfg, 0.0, x, v, hist, dx, dv);
    CHECK(dx[0] == 0.5);
    CHECK(dv[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(dv[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("identical velocities give zero coupling in both modes") {
    for (auto mode : {CouplingMode::VelocityCoupling, CouplingMode::LiteralPositionCoupling}) {
        auto cfg = pair_config(0.2, 0.5, {0.7, 0.7});
        cfg.coupling = mode;
        // positions also coincide across the history
        TrajectoryHistory hist(cfg.initial, 0.5);
        std::vector<double> x{0.0, 0.0}, v{0.7, 0.7}, dx(2), dv(2);
        rhs_pointwise(cfg, 0.0, x, v, hist, dx, dv);
        CHECK(dv[0] == 0.0);
        CHECK(dv[1] == 0.0);
    }
}

TEST_CASE("literal position coupling drives velocities toward position gaps") {
    auto cfg = pair_config(0.0, 0.0, {0.0, 0.0});
    cfg.coupling = CouplingMode::LiteralPositionCoupling;
    TrajectoryHistory hist(cfg.initial, 0.0);
    std::vector<double> x{0.0, 1.0}, v{0.0, 0.0}, dx(2), dv(2);
    rhs_pointwise(cfg, 0.0, x, v, hist, dx, dv);
    // dv_1 = psi(1) * (x_2 - x_1) = 1, unlike the velocity form which gives 0
    CHECK(dv[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dv[1] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("a blackout freezes the velocity derivative") {
    auto cfg = pair_config(0.0, 0.0, {0.5, -0.5});
    cfg.schedule = WeightSchedule::blackout_list({{0.0, 2.0}}, {3.0, 1.0});
    TrajectoryHistory hist(cfg.initial, 0.0);
    std::vector<double> x{0.0, 0.0}, v{0.5, -0.5}, dx(2), dv(2);
    rhs_pointwise(cfg, 1.0, x, v, hist, dx, dv);
    CHECK(dv[0] == 0.0);
    CHECK(dv[1] == 0.0);
}

TEST_CASE("distributed pair with uniform kernel averages the history") {
    SystemConfig cfg;
    cfg.n_agents = 2;
    cfg.dim = 1;
    cfg.psi = InfluenceFunction::constant(1.0);
    cfg.delay = DelaySpec{DistributedDelayKernel(TimeFunction::constant(0.0),
                                                 TimeFunction::constant(1.0), 1.0,
                                                 BetaKernel::constant(1.0), 8)};
    cfg.schedule = WeightSchedule::always_on({1.0, 1.0});
    cfg.initial = {InitialField::constant(2, 1, {0.0, 0.0}),
                   InitialField::constant(2, 1, {0.5, -0.5})};
    cfg.integrator.t_end = 1.0;

    TrajectoryHistory hist(cfg.initial, 1.0);
    std::vector<double> x{0.0, 0.0}, v{0.5, -0.5}, dx(2), dv(2);
    rhs_distributed(cfg, 0.0, x, v, hist, dx, dv);
    CHECK(dv[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dv[1] == doctest::Approx(1.0).epsilon(1e-14));

    SUBCASE("shared constant velocity kills the integrand") {
        cfg.initial = {InitialField::constant(2, 1, {0.0, 3.0}),
                       InitialField::constant(2, 1, {0.4, 0.4})};
        TrajectoryHistory hist2(cfg.initial, 1.0);
        std::vector<double> v2{0.4, 0.4};
        rhs_distributed(cfg, 0.0, x, v2, hist2, dx, dv);
        CHECK(dv[0] == 0.0);
        CHECK(dv[1] == 0.0);
    }
}

TEST_CASE("node count doubling: polynomial integrands are exact, smooth ones converge") {
    // linear-in-time velocities + linear beta: the integrand is a low-degree
    // polynomial in the lookback variable, exact for any rule with >= 3 nodes
    auto make_cfg = [](int nodes) {
        SystemConfig cfg;
        cfg.n_agents = 2;
        cfg.dim = 1;
        cfg.psi = InfluenceFunction::constant(2.0);
        cfg.delay = DelaySpec{DistributedDelayKernel(TimeFunction::constant(0.1),
                                                     TimeFunction::constant(0.9), 1.0,
                                                     BetaKernel::linear(0.5, 0.1), nodes)};
        cfg.schedule = WeightSchedule::always_on({1.0, 1.0});
        cfg.initial = {
            InitialField::linear_in_time(2, 1, {0.0, 1.0}, {0.3, -0.2}),
            InitialField::linear_in_time(2, 1, {0.5, -0.5}, {0.25, -0.75})};
        cfg.integrator.t_end = 1.0;
        return cfg;
    };
    std::vector<double> x{0.0, 1.0}, v{0.5, -0.5}, dx(2), dv3(2), dv8(2);
    {
        auto cfg = make_cfg(3);
        TrajectoryHistory hist(cfg.initial, 1.0);
        rhs_distributed(cfg, 0.0, x, v, hist, dx, dv3);
    }
    {
        auto cfg = make_cfg(8);
        TrajectoryHistory hist(cfg.initial, 1.0);
        rhs_distributed(cfg, 0.0, x, v, hist, dx, dv8);
    }
    CHECK(dv3[0] == doctest::Approx(dv8[0]).epsilon(1e-14));
    CHECK(dv3[1] == doctest::Approx(dv8[1]).epsilon(1e-14));

    // non-polynomial influence: doubling the nodes must agree within the
    // quadrature error model
    auto make_smooth = [](int nodes) {
        SystemConfig cfg;
        cfg.n_agents = 3;
        cfg.dim = 2;
        cfg.psi = InfluenceFunction::power_law(1.0, 0.6);
        cfg.delay = DelaySpec{DistributedDelayKernel(TimeFunction::constant(0.1),
                                                     TimeFunction::constant(0.5), 0.5,
                                                     BetaKernel::exponential(1.0), nodes)};
        cfg.schedule = WeightSchedule::always_on({1.0, 1.0});
        cfg.initial = {
            InitialField::linear_in_time(3, 2, {0.0, 0.0, 1.0, 0.2, -0.4, 0.9},
                                         {0.1, -0.2, 0.05, 0.3, -0.1, 0.0}),
            InitialField::linear_in_time(3, 2, {0.5, -0.1, -0.5, 0.2, 0.1, -0.3},
                                         {0.2, 0.1, -0.3, 0.0, 0.15, -0.05})};
        cfg.integrator.t_end = 1.0;
        return cfg;
    };
    std::vector<double> x3{0.0, 0.0, 1.0, 0.2, -0.4, 0.9};
    std::vector<double> v3{0.5, -0.1, -0.5, 0.2, 0.1, -0.3};
    std::vector<double> dx3(6), dva(6), dvb(6);
    {
        auto cfg = make_smooth(8);
        TrajectoryHistory hist(cfg.initial, 0.5);
        rhs_distributed(cfg, 0.0, x3, v3, hist, dx3, dva);
    }
    {
        auto cfg = make_smooth(16);
        TrajectoryHistory hist(cfg.initial, 0.5);
        rhs_distributed(cfg, 0.0, x3, v3, hist, dx3, dvb);
    }
    for (int k = 0; k < 6; ++k) CHECK(dva[k] == doctest::Approx(dvb[k]).epsilon(1e-10));
}

TEST_CASE("velocity derivative norm bound by K times the window spread") {
    SystemConfig cfg;
    cfg.n_agents = 5;
    cfg.dim = 3;
    cfg.psi = InfluenceFunction::power_law(1.7, 0.4);
    cfg.delay = DelaySpec{PointwiseDelay{TimeFunction::constant(0.3), 0.5}};
    cfg.schedule = WeightSchedule::always_on({1.0, 1.0});
    const auto size = 15u;
    std::vector<double> x0(size), v0(size);
    for (std::size_t k = 0; k < size; ++k) {
        x0[k] = 2.0 * detail::mixed_uniform(11u, k) - 1.0;
        v0[k] = 2.0 * detail::mixed_uniform(13u, k) - 1.0;
    }
    cfg.initial = {InitialField::constant(5, 3, x0), InitialField::constant(5, 3, v0)};
    cfg.integrator.t_end = 1.0;

    TrajectoryHistory hist(cfg.initial, 0.5);
    std::vector<double> dx(size), dv(size);
    rhs_pointwise(cfg, 0.0, x0, v0, hist, dx, dv);

    double max_pair_gap = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            max_pair_gap = std::max(
                max_pair_gap, distance(agent_slice(std::span<const double>(v0), i, 3),
                                       agent_slice(std::span<const double>(v0), j, 3)));
    for (int i = 0; i < 5; ++i) {
        const double a = norm(agent_slice(std::span<const double>(dv), i, 3));
        CHECK(a <= cfg.psi.sup_norm() * max_pair_gap + 1e-12);
    }
}

TEST_SUITE_END();
