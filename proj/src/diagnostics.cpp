#include "syncarena/diagnostics.hpp"

#include "syncarena/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>

namespace syncarena {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce to [0, 2*pi). fmod keeps the sign of its argument, hence the fixup;
// the final guard catches -eps + 2*pi rounding up to exactly 2*pi.
double reduce_angle(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

} // namespace

double diameter(const std::vector<double>& values) {
    if (values.empty()) {
        throw DimensionError("diameter: empty input");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

double circular_diameter(const PhaseState& state) {
    validate(state);
    const std::size_t n = state.size();
    if (n == 1) {
        return 0.0;
    }
    std::vector<double> reduced(n);
    for (std::size_t i = 0; i < n; ++i) {
        reduced[i] = reduce_angle(state.phases[i]);
    }
    std::sort(reduced.begin(), reduced.end());
    // Largest gap between consecutive points on the circle; the smallest
    // covering arc is its complement.
    double largest_gap = reduced.front() + two_pi - reduced.back();
    for (std::size_t i = 1; i < n; ++i) {
        largest_gap = std::max(largest_gap, reduced[i] - reduced[i - 1]);
    }
    return std::max(0.0, two_pi - largest_gap);
}

double order_parameter(const PhaseState& state) {
    validate(state);
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    for (double theta : state.phases) {
        sum_cos += std::cos(theta);
        sum_sin += std::sin(theta);
    }
    const double n = static_cast<double>(state.size());
    return std::min(1.0, std::hypot(sum_cos, sum_sin) / n);
}

SyncReport detect_sync(const Trajectory& trajectory, double eps_phase,
                       double eps_freq, double hold_window) {
    if (trajectory.samples.empty()) {
        throw DimensionError("detect_sync: trajectory has no samples");
    }
    if (!(eps_phase > 0.0) || !(eps_freq > 0.0) || !(hold_window > 0.0)) {
        throw ConfigError("detect_sync: thresholds must be positive");
    }
    const double t_start = trajectory.t_start();
    const double t_end = trajectory.t_final();
    const double span = t_end - t_start;
    if (hold_window > span) {
        throw ConfigError("detect_sync: hold_window " + std::to_string(hold_window) +
                          " exceeds trajectory span " + std::to_string(span));
    }

    const std::size_t sample_count = trajectory.samples.size();
    std::vector<double> phase_metric(sample_count);
    std::vector<double> freq_metric(sample_count);
    for (std::size_t s = 0; s < sample_count; ++s) {
        phase_metric[s] = circular_diameter(PhaseState{trajectory.samples[s].theta});
        freq_metric[s] = diameter(trajectory.samples[s].theta_dot);
    }

    // Earliest grid time after the last above-threshold sample, accepted only
    // when the remaining sub-threshold tail covers the hold window.
    auto earliest_hold = [&](const std::vector<double>& metric,
                             double eps) -> std::optional<double> {
        std::size_t first_ok = 0;
        for (std::size_t s = 0; s < sample_count; ++s) {
            if (metric[s] >= eps) {
                first_ok = s + 1;
            }
        }
        if (first_ok >= sample_count) {
            return std::nullopt;
        }
        const double candidate = trajectory.samples[first_ok].t;
        if (t_end - candidate < hold_window) {
            return std::nullopt;
        }
        return candidate;
    };

    SyncReport report;
    report.thresholds = DetectionThresholds{eps_phase, eps_freq, hold_window};
    report.phase_sync_time = earliest_hold(phase_metric, eps_phase);
    report.freq_sync_time = earliest_hold(freq_metric, eps_freq);
    const TrajectorySample& last = trajectory.samples.back();
    if (report.freq_sync_time) {
        double sum = 0.0;
        for (double v : last.theta_dot) {
            sum += v;
        }
        report.sync_frequency = sum / static_cast<double>(last.theta_dot.size());
    }
    report.final_phase_diameter = diameter(last.theta);
    report.final_circular_diameter = circular_diameter(PhaseState{last.theta});
    report.final_velocity_diameter = diameter(last.theta_dot);
    return report;
}

SyncReport detect_sync(const Trajectory& trajectory,
                       const DetectionThresholds& thresholds) {
    return detect_sync(trajectory, thresholds.eps_phase, thresholds.eps_freq,
                       thresholds.hold_window);
}

WellOrderingResult check_well_ordering(const Trajectory& trajectory,
                                       const FrequencyProfile& omega,
                                       double from_time, double tol_order) {
    if (trajectory.samples.empty()) {
        throw DimensionError("check_well_ordering: trajectory has no samples");
    }
    const std::size_t n = trajectory.oscillator_count();
    if (omega.size() != n) {
        throw DimensionError("check_well_ordering: trajectory has " + std::to_string(n) +
                             " oscillators but omega has " + std::to_string(omega.size()));
    }
    if (from_time < trajectory.t_start() || from_time > trajectory.t_final()) {
        throw ConfigError("check_well_ordering: from_time " + std::to_string(from_time) +
                          " is outside the trajectory span");
    }

    // Pairs that carry an ordering constraint: omega_i strictly above omega_j.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (omega.omegas[i] > omega.omegas[j]) {
                pairs.emplace_back(i, j);
            }
        }
    }

    for (const TrajectorySample& sample : trajectory.samples) {
        if (sample.t < from_time) {
            continue;
        }
        for (const auto& [i, j] : pairs) {
            if (sample.theta[i] < sample.theta[j] - tol_order) {
                return WellOrderingResult{false, OrderingViolation{sample.t, i, j}};
            }
        }
    }
    return WellOrderingResult{true, std::nullopt};
}

std::vector<FrequencyGroup> group_by_frequency(const FrequencyProfile& omega) {
    validate(omega);
    std::map<double, std::vector<std::size_t>, std::greater<>> buckets;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        buckets[omega.omegas[i]].push_back(i);
    }
    std::vector<FrequencyGroup> groups;
    groups.reserve(buckets.size());
    for (auto& [value, indices] : buckets) {
        groups.push_back(FrequencyGroup{value, std::move(indices)});
    }
    return groups;
}

} // namespace syncarena
