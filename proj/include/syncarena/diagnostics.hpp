#pragma once

#include "syncarena/integrator.hpp"
#include "syncarena/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace syncarena {

/// Diameter D(X) = max_i x_i - min_i x_i of a real vector.
double diameter(const std::vector<double>& values);

/// Length of the smallest arc containing all phases mod 2*pi, i.e. 2*pi minus
/// the largest gap between consecutive reduced phases. Always in [0, 2*pi).
/// This is the right notion for phase-sync detection: phases that differ by
/// multiples of 2*pi count as coincident.
double circular_diameter(const PhaseState& state);

/// Modulus of the mean unit phasor, in [0, 1]. 1 means full alignment.
double order_parameter(const PhaseState& state);

struct DetectionThresholds {
    double eps_phase = 1e-3;
    double eps_freq = 1e-3;
    double hold_window = 10.0; // sub-threshold tail required before a sync time is reported
};

/// Measured synchronization summary for one trajectory. Detected times are
/// grid times; absent optionals mean the condition never held through t_end.
struct SyncReport {
    std::optional<double> phase_sync_time;
    std::optional<double> freq_sync_time;
    std::optional<double> sync_frequency;    // mean final velocity, set only with freq_sync_time
    std::optional<double> well_ordering_time; // filled by callers that run the ordering check
    double final_phase_diameter = 0.0;
    double final_circular_diameter = 0.0;
    double final_velocity_diameter = 0.0;
    DetectionThresholds thresholds;
};

/// Scans the trajectory for the earliest grid time after which the circular
/// phase diameter stays below eps_phase through t_end (and analogously the
/// velocity diameter below eps_freq). A time is only reported if at least
/// hold_window of sub-threshold tail backs it, so transient dips do not
/// count. Throws ConfigError if hold_window exceeds the trajectory span.
SyncReport detect_sync(const Trajectory& trajectory, double eps_phase,
                       double eps_freq, double hold_window);

SyncReport detect_sync(const Trajectory& trajectory,
                       const DetectionThresholds& thresholds);

struct OrderingViolation {
    double t = 0.0;
    std::size_t i = 0; // zero-based oscillator indices, omega_i > omega_j
    std::size_t j = 0;
};

struct WellOrderingResult {
    bool ok = true;
    std::optional<OrderingViolation> violation; // earliest one, when !ok
};

/// Checks that from from_time onward every pair with omega_i > omega_j keeps
/// theta_i >= theta_j - tol_order at the sampled times. tol_order absorbs
/// integration error (one order above the default absolute tolerance).
WellOrderingResult check_well_ordering(const Trajectory& trajectory,
                                       const FrequencyProfile& omega,
                                       double from_time,
                                       double tol_order = 1e-6);

struct FrequencyGroup {
    double omega = 0.0;
    std::vector<std::size_t> indices; // zero-based, ascending
};

/// Partition into groups of exactly-equal frequency, sorted descending by
/// frequency. Exact equality is intentional: omegas are user-specified reals,
/// so callers quantize beforehand if they want coarser groups.
std::vector<FrequencyGroup> group_by_frequency(const FrequencyProfile& omega);

} // namespace syncarena
