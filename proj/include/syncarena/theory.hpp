#pragma once

#include "syncarena/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace syncarena {

enum class TheoremId {
    Thm1,                // identical frequencies: phase sync from any D(Theta0) < pi
    Thm2,                // strong coupling: frequency sync at max(Omega)
    ClassicalSufficient, // classical model, weaker coupling requirement
};

const char* to_string(TheoremId id);

struct ConditionCheck {
    std::string name;
    bool holds = false;
    double margin = 0.0; // positive = satisfied with room, 0 = exact equality (fails)
};

struct HypothesisVerdict {
    TheoremId theorem = TheoremId::Thm1;
    bool holds = false; // conjunction of the per-condition booleans
    std::vector<ConditionCheck> conditions;
};

/// Sector trapping time T0 = (pi - 2*delta) / (k*sin(delta) - d_omega): once
/// the phases fit in an arc of length pi - delta, they contract into an arc
/// of length delta within T0. Requires k*sin(delta) > d_omega.
/// Throws ConfigError for delta outside (0, pi/2) or k <= 0 or d_omega < 0,
/// HypothesisError when k*sin(delta) <= d_omega (bound undefined).
double trapping_time_T0(double k, double delta, double d_omega);

/// Earliest time by which the faster oscillator i has caught up with j:
/// t0 + max(0, (theta_j(t0) - theta_i(t0)) / (omega_i - omega_j)).
/// Throws HypothesisError unless omega_i > omega_j.
double interchange_bound(double theta_i_t0, double theta_j_t0, double omega_i,
                         double omega_j, double t0);

/// Well-ordering onset T* = T0 + the largest interchange wait over all pairs
/// with omega_i > omega_j, evaluated at the simulated state at t = T0. The
/// state argument is explicit because T* has no closed form in Theta(0).
/// Equals T0 when all frequencies coincide (empty pair set).
double well_ordering_time_Tstar(double k, double delta,
                                const FrequencyProfile& omega,
                                const PhaseState& state_at_T0);

/// Limit frequency after synchronization: the strong-competition model locks
/// onto max(Omega) (winner takes all), the classical model onto mean(Omega).
double predicted_sync_frequency(CouplingKind kind, const FrequencyProfile& omega);

/// Common velocity of n identical oscillators equally spaced on the circle:
/// omega + k * sum_{1 <= j < n/2} sin(2*pi*j/n). Exceeds omega for n >= 3,
/// which is why equal spacing sits outside the sync theorems' scope.
double uniform_circle_frequency(int n, double k, double omega);

/// Evaluates a theorem's hypotheses on concrete data, reporting each
/// condition with its numeric margin. All inequalities are strict; exact
/// equality yields holds = false with margin 0. delta is required for Thm2
/// and ClassicalSufficient (ConfigError when missing or out of (0, pi/2)).
HypothesisVerdict check_hypotheses(TheoremId theorem, double k,
                                   std::optional<double> delta,
                                   const FrequencyProfile& omega,
                                   const PhaseState& state0);

} // namespace syncarena
