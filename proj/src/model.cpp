#include "syncarena/model.hpp"

#include <cmath>

namespace syncarena {

const char* to_string(CouplingKind kind) {
    switch (kind) {
    case CouplingKind::Classical:
        return "classical";
    case CouplingKind::StrongCompetition:
        return "strong_competition";
    }
    return "unknown";
}

void validate(const CouplingSpec& coupling) {
    if (!(coupling.strength > 0.0) || !std::isfinite(coupling.strength)) {
        throw ConfigError("coupling strength must be a positive finite real, got " +
                          std::to_string(coupling.strength));
    }
}

void validate(const PhaseState& state) {
    if (state.phases.empty()) {
        throw DimensionError("phase state must hold at least one oscillator");
    }
    for (double theta : state.phases) {
        if (!std::isfinite(theta)) {
            throw ConfigError("phase state contains a non-finite entry");
        }
    }
}

void validate(const FrequencyProfile& omega) {
    if (omega.omegas.empty()) {
        throw DimensionError("frequency profile must hold at least one oscillator");
    }
    for (double w : omega.omegas) {
        if (!std::isfinite(w)) {
            throw ConfigError("frequency profile contains a non-finite entry");
        }
    }
}

double coupling_value(const CouplingSpec& coupling, double phase_difference) {
    const double s = std::sin(phase_difference);
    switch (coupling.kind) {
    case CouplingKind::Classical:
        return coupling.strength * s;
    case CouplingKind::StrongCompetition:
        return coupling.strength * std::max(0.0, s);
    }
    return 0.0;
}

std::vector<double> rhs(const PhaseState& state, const FrequencyProfile& omega,
                        const CouplingSpec& coupling) {
    const std::size_t n = state.size();
    if (omega.size() != n) {
        throw DimensionError("rhs: state has " + std::to_string(n) + " oscillators but omega has " +
                             std::to_string(omega.size()));
    }
    std::vector<double> velocity(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta_i = state.phases[i];
        double pull = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            pull += coupling_value(coupling, state.phases[j] - theta_i);
        }
        velocity[i] = omega.omegas[i] + pull;
    }
    return velocity;
}

} // namespace syncarena
