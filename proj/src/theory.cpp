#include "syncarena/theory.hpp"

#include "syncarena/diagnostics.hpp"
#include "syncarena/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <string>

namespace syncarena {

namespace {

constexpr double pi = std::numbers::pi;

void require_delta_in_range(double delta, const char* where) {
    if (!(delta > 0.0) || !(delta < pi / 2.0) || !std::isfinite(delta)) {
        throw ConfigError(std::string(where) + ": delta must lie in (0, pi/2), got " +
                          std::to_string(delta));
    }
}

} // namespace

const char* to_string(TheoremId id) {
    switch (id) {
    case TheoremId::Thm1:
        return "thm1";
    case TheoremId::Thm2:
        return "thm2";
    case TheoremId::ClassicalSufficient:
        return "classical_sufficient";
    }
    return "unknown";
}

double trapping_time_T0(double k, double delta, double d_omega) {
    require_delta_in_range(delta, "trapping_time_T0");
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("trapping_time_T0: coupling strength must be positive");
    }
    if (!(d_omega >= 0.0) || !std::isfinite(d_omega)) {
        throw ConfigError("trapping_time_T0: frequency diameter must be non-negative");
    }
    const double gap = k * std::sin(delta) - d_omega;
    if (!(gap > 0.0)) {
        throw HypothesisError("trapping_time_T0: requires k*sin(delta) > d_omega, got " +
                              std::to_string(k * std::sin(delta)) + " <= " +
                              std::to_string(d_omega));
    }
    return (pi - 2.0 * delta) / gap;
}

double interchange_bound(double theta_i_t0, double theta_j_t0, double omega_i,
                         double omega_j, double t0) {
    if (!(omega_i > omega_j)) {
        throw HypothesisError("interchange_bound: requires omega_i > omega_j, got " +
                              std::to_string(omega_i) + " <= " + std::to_string(omega_j));
    }
    return t0 + std::max(0.0, (theta_j_t0 - theta_i_t0) / (omega_i - omega_j));
}

double well_ordering_time_Tstar(double k, double delta,
                                const FrequencyProfile& omega,
                                const PhaseState& state_at_T0) {
    validate(omega);
    validate(state_at_T0);
    const std::size_t n = omega.size();
    if (state_at_T0.size() != n) {
        throw DimensionError("well_ordering_time_Tstar: state has " +
                             std::to_string(state_at_T0.size()) +
                             " oscillators but omega has " + std::to_string(n));
    }
    const double t0 = trapping_time_T0(k, delta, diameter(omega.omegas));
    double longest_wait = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (omega.omegas[i] > omega.omegas[j]) {
                const double wait =
                    (state_at_T0.phases[j] - state_at_T0.phases[i]) /
                    (omega.omegas[i] - omega.omegas[j]);
                longest_wait = std::max(longest_wait, wait);
            }
        }
    }
    return t0 + longest_wait;
}

double predicted_sync_frequency(CouplingKind kind, const FrequencyProfile& omega) {
    validate(omega);
    if (kind == CouplingKind::StrongCompetition) {
        return *std::max_element(omega.omegas.begin(), omega.omegas.end());
    }
    const double sum = std::accumulate(omega.omegas.begin(), omega.omegas.end(), 0.0);
    return sum / static_cast<double>(omega.size());
}

double uniform_circle_frequency(int n, double k, double omega) {
    if (n < 2) {
        throw ConfigError("uniform_circle_frequency: needs n >= 2, got " +
                          std::to_string(n));
    }
    double sum = 0.0;
    for (int j = 1; 2 * j < n; ++j) {
        sum += std::sin(2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
    }
    return omega + k * sum;
}

HypothesisVerdict check_hypotheses(TheoremId theorem, double k,
                                   std::optional<double> delta,
                                   const FrequencyProfile& omega,
                                   const PhaseState& state0) {
    validate(omega);
    validate(state0);
    if (state0.size() != omega.size()) {
        throw DimensionError("check_hypotheses: state has " +
                             std::to_string(state0.size()) +
                             " oscillators but omega has " + std::to_string(omega.size()));
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("check_hypotheses: coupling strength must be positive");
    }

    const double d_omega = diameter(omega.omegas);
    const double d_theta0 = diameter(state0.phases);

    HypothesisVerdict verdict;
    verdict.theorem = theorem;

    auto add = [&verdict](std::string name, double margin) {
        verdict.conditions.push_back(ConditionCheck{std::move(name), margin > 0.0, margin});
    };

    switch (theorem) {
    case TheoremId::Thm1: {
        // Equality condition: identical frequencies, margin is -D(Omega).
        verdict.conditions.push_back(
            ConditionCheck{"identical_frequencies", d_omega == 0.0, -d_omega});
        add("initial_diameter_below_pi", pi - d_theta0);
        break;
    }
    case TheoremId::Thm2: {
        if (!delta) {
            throw ConfigError("check_hypotheses: Thm2 needs delta");
        }
        require_delta_in_range(*delta, "check_hypotheses");
        add("coupling_above_threshold", k * std::sin(*delta) - d_omega);
        add("initial_diameter_below_pi_minus_delta", pi - *delta - d_theta0);
        break;
    }
    case TheoremId::ClassicalSufficient: {
        if (!delta) {
            throw ConfigError("check_hypotheses: ClassicalSufficient needs delta");
        }
        require_delta_in_range(*delta, "check_hypotheses");
        const double n = static_cast<double>(omega.size());
        add("coupling_above_threshold", k * n * std::sin(*delta) - d_omega);
        add("initial_diameter_below_pi_minus_delta", pi - *delta - d_theta0);
        break;
    }
    }

    verdict.holds = std::all_of(verdict.conditions.begin(), verdict.conditions.end(),
                                [](const ConditionCheck& c) { return c.holds; });
    return verdict;
}

} // namespace syncarena
