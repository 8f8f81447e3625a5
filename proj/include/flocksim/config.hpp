#pragma once

#include <algorithm>
#include <cmath>

#include "flocksim/delay.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/influence.hpp"
#include "flocksim/initial_data.hpp"
#include "flocksim/schedule.hpp"

namespace flocksim {

struct IntegratorSettings {
    double h_step = 1e-2;
    double t_end = 10.0;
    int overlap_iterations = 2;  // fixed-point sweeps when a delayed lookup lands inside the step
    int record_stride = 1;

    void validate() const {
        if (!(h_step > 0.0)) throw ConfigError("integrator: h_step must be > 0");
        if (!(t_end > 0.0)) throw ConfigError("integrator: t_end must be > 0");
        if (overlap_iterations < 1) throw ConfigError("integrator: overlap_iterations must be >= 1");
        if (record_stride < 1) throw ConfigError("integrator: record_stride must be >= 1");
    }
};

/// Default step: resolve both the delay horizon and the excitation window.
inline double default_h_step(double tau_bar, double pe_window) {
    double h = std::min(1e-2, pe_window / 50.0);
    if (tau_bar > 0.0) h = std::min(h, tau_bar / 20.0);
    return h;
}

enum class CouplingMode {
    VelocityCoupling,         // alignment drives velocity differences (default)
    LiteralPositionCoupling,  // position differences in the coupling term
};

struct SystemConfig {
    int n_agents = 2;
    int dim = 1;
    InfluenceFunction psi = InfluenceFunction::constant(1.0);
    DelaySpec delay{PointwiseDelay{}};
    WeightSchedule schedule = WeightSchedule::always_on({1.0, 1.0});
    InitialData initial;
    CouplingMode coupling = CouplingMode::VelocityCoupling;
    IntegratorSettings integrator;

    double tau_bar() const { return delay.tau_bar(); }

    /// Structural validation; the declared PE pair is checked separately at the
    /// harness boundary (verify_pe over the run horizon).
    void validate() const {
        if (n_agents < 2) throw ConfigError("config: need at least 2 agents");
        if (dim < 1) throw ConfigError("config: dimension must be >= 1");
        if (tau_bar() < 0.0) throw ConfigError("config: tau_bar must be >= 0");
        initial.validate();
        if (initial.n_agents() != n_agents || initial.dim() != dim)
            throw ConfigError("config: initial data shape does not match (n_agents, dim)");
        if (schedule.pe().pe_window < tau_bar())
            throw ConfigError("config: PE window T must be >= tau_bar");
        if (schedule.pe().pe_mass > schedule.pe().pe_window)
            throw ConfigError("config: PE mass cannot exceed the window length");
        integrator.validate();
    }
};

} // namespace flocksim
