#pragma once

#include "syncarena/errors.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace syncarena {

/// Lifted phase vector on the real line. Phases are never reduced mod 2*pi
/// here; the dynamics live on R^N and circular reduction happens only in
/// diagnostics. The diameter of a valid state may therefore exceed 2*pi.
struct PhaseState {
    std::vector<double> phases;

    std::size_t size() const { return phases.size(); }
};

/// Natural frequencies, one per oscillator, in radians per unit time.
struct FrequencyProfile {
    std::vector<double> omegas;

    std::size_t size() const { return omegas.size(); }
};

enum class CouplingKind {
    Classical,         // k * sin(phi)
    StrongCompetition, // k * max(0, sin(phi)); pulls only from oscillators ahead
};

const char* to_string(CouplingKind kind);

/// Coupling kind plus strength k > 0. k is folded into coupling_value so the
/// right-hand side is a single pass over pairs.
struct CouplingSpec {
    CouplingKind kind = CouplingKind::StrongCompetition;
    double strength = 1.0;
};

void validate(const CouplingSpec& coupling);
void validate(const PhaseState& state);
void validate(const FrequencyProfile& omega);

/// Pairwise coupling term including the strength factor:
/// Classical -> k*sin(phi), StrongCompetition -> k*max(0, sin(phi)).
double coupling_value(const CouplingSpec& coupling, double phase_difference);

/// Velocity vector of the oscillator system:
///   thetadot_i = omega_i + sum_j coupling_value(theta_j - theta_i).
/// The self term j == i is included in the sum; it contributes exactly zero
/// for both coupling kinds.
std::vector<double> rhs(const PhaseState& state, const FrequencyProfile& omega,
                        const CouplingSpec& coupling);

} // namespace syncarena
