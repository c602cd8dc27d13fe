#pragma once

#include "syncarena/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace syncarena {

/// Error control and output grid for one integration run.
struct IntegratorConfig {
    double relative_tolerance = 1e-5;
    double absolute_tolerance = 1e-8;
    double max_step = 0.1;
    double t_end = 0.0;          // must be set > 0 by the caller
    double sample_interval = 0.1;
};

void validate(const IntegratorConfig& config);

struct TrajectorySample {
    double t = 0.0;
    std::vector<double> theta;
    std::vector<double> theta_dot; // rhs evaluated at theta, never interpolated
};

/// Dense time-ordered output of one run, plus the inputs that produced it.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    CouplingSpec coupling;
    FrequencyProfile omega;
    IntegratorConfig config;
    std::optional<std::uint64_t> seed;

    std::size_t oscillator_count() const {
        return samples.empty() ? 0 : samples.front().theta.size();
    }
    double t_start() const { return samples.front().t; }
    double t_final() const { return samples.back().t; }
};

/// Integrates the oscillator system with an embedded Dormand-Prince 5(4)
/// pair, proportional step control at (rtol, atol), and quartic dense output
/// evaluated on the uniform grid {0, h, 2h, ..., t_end} with
/// h = sample_interval. Velocities are recomputed from rhs at every emitted
/// state. Throws IntegrationError if the step size underflows 1e-12.
Trajectory integrate_adaptive(const PhaseState& state0, const FrequencyProfile& omega,
                              const CouplingSpec& coupling, const IntegratorConfig& config);

/// Fixed-step forward Euler on the grid {0, step, 2*step, ...}, used as an
/// independent cross-check of integrate_adaptive. record_every keeps one
/// sample out of that many steps (the initial and final states are always
/// kept) so long runs at tiny steps stay affordable to store.
Trajectory integrate_euler_oracle(const PhaseState& state0, const FrequencyProfile& omega,
                                  const CouplingSpec& coupling, double step, double t_end,
                                  std::size_t record_every = 1);

} // namespace syncarena
