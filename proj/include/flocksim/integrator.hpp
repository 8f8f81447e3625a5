#pragma once

#include <vector>

#include "flocksim/config.hpp"
#include "flocksim/history.hpp"

namespace flocksim {

/// Step plan on [0, t_end]: strictly increasing times containing every
/// schedule breakpoint, with spacing at most h_step. Within each step the
/// weight alpha is constant. Boundaries closer than 1e-12 raise ConfigError.
std::vector<double> align_breakpoints(const WeightSchedule& schedule, double h_step, double t_end);

/// Integrates the delay system by the method of steps with classical RK4.
/// Delayed lookups are served by the committed history; lookups landing inside
/// the current step (lag smaller than the step) use a predictor refined by
/// cfg.integrator.overlap_iterations fixed-point sweeps. A lag of exactly zero
/// short-circuits to the stage state, recovering the classical ODE scheme.
TrajectoryHistory integrate(const SystemConfig& cfg);

} // namespace flocksim
