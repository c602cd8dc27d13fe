#pragma once

#include "syncarena/diagnostics.hpp"
#include "syncarena/integrator.hpp"
#include "syncarena/model.hpp"
#include "syncarena/theory.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace syncarena {

/// How a scenario obtains an input vector: either given verbatim, or drawn
/// uniformly from [0,1) and affinely rescaled to a target diameter (with an
/// optional translation pinning the maximum, e.g. max(Omega) = 0).
struct VectorSpec {
    std::optional<std::vector<double>> values; // explicit entries, used as-is
    double target_diameter = 0.0;              // random mode: exact diameter after rescale
    std::optional<double> shift_max_to;        // random mode: translate so max equals this

    static VectorSpec explicit_values(std::vector<double> v);
    static VectorSpec random(double diameter,
                             std::optional<double> shift_max_to = std::nullopt);

    bool is_random() const { return !values.has_value(); }
};

/// What a scenario is supposed to show. `guaranteed` separates proved
/// consequences (test-blocking) from outcomes that are merely expected
/// empirically for the shipped seed (reported as observations).
struct Expectation {
    bool guaranteed = false;
    std::string note; // which result or observation this encodes
    std::optional<bool> phase_sync;
    std::optional<bool> freq_sync;
    std::optional<double> sync_frequency;
    double freq_tolerance = 1e-3;
    std::optional<double> final_phase_diameter;
    double diameter_tolerance = 1e-2;
    std::optional<double> final_circular_diameter_below;
};

struct Scenario {
    std::string name;
    std::string description;
    std::size_t n = 2;
    std::vector<CouplingKind> kinds = {CouplingKind::StrongCompetition};
    double k = 1.0;
    VectorSpec omega_spec;
    VectorSpec theta0_spec;
    std::uint64_t seed = 0;
    double t_end = 200.0;
    std::optional<double> delta; // sector half-angle for hypothesis checks and bounds
    std::optional<Expectation> expected;
};

void validate(const Scenario& scenario);

/// Draw n uniforms from the pinned generator and affinely map them so that
/// min = 0 and max = target_diameter exactly; n = 1 or coincident draws give
/// all zeros. If shift_max_to is set, translate so the maximum equals it.
std::vector<double> generate_initial_conditions(
    std::uint64_t seed, std::size_t n, double target_diameter,
    std::optional<double> shift_max_to = std::nullopt);

struct MaterializedInputs {
    FrequencyProfile omega;
    PhaseState theta0;
};

/// Resolve a scenario's vector specs into concrete inputs. Random omega uses
/// the scenario seed, random theta0 uses seed + 1, so the two draws are
/// independent streams fully determined by one seed.
MaterializedInputs materialize(const Scenario& scenario);

struct ExpectationOutcome {
    bool pass = true;
    bool guaranteed = false;
    std::vector<std::string> failures; // human-readable, empty when pass
};

ExpectationOutcome evaluate_expectation(const Expectation& expected,
                                        const SyncReport& report);

/// Everything produced by one simulation run of one coupling kind.
struct RunResult {
    Scenario scenario;
    CouplingKind kind = CouplingKind::StrongCompetition;
    FrequencyProfile omega;
    PhaseState theta0;
    Trajectory trajectory;
    SyncReport report;
    std::vector<HypothesisVerdict> verdicts;
    double predicted_frequency = 0.0;
    std::optional<double> trapping_time; // sector contraction deadline T0
    bool trapping_guaranteed = false;    // both sector hypotheses held at t = 0
    std::optional<double> t_star;        // well-ordering onset bound
    std::optional<WellOrderingResult> well_ordering; // checked from t_star when in span
    std::optional<ExpectationOutcome> expectation;   // primary-kind runs only
};

/// Simulate the scenario's primary coupling kind, detect synchronization,
/// evaluate hypotheses, and (for strong competition under the frequency-sync
/// hypotheses with non-constant omega) verify well-ordering from the
/// computed onset bound. config.t_end <= 0 means: use the scenario's t_end.
RunResult run_scenario(const Scenario& scenario, const IntegratorConfig& config,
                       const DetectionThresholds& thresholds = DetectionThresholds{});

struct ComparisonResult {
    Scenario scenario;
    FrequencyProfile omega; // shared inputs, materialized once
    PhaseState theta0;
    std::vector<RunResult> runs; // classical first, then strong competition
};

/// Run both coupling kinds on bitwise-identical initial data.
ComparisonResult compare_models(const Scenario& scenario,
                                const IntegratorConfig& config,
                                const DetectionThresholds& thresholds = DetectionThresholds{});

enum class SweepParameter {
    CouplingStrength,  // k
    InitialDiameter,   // target diameter of a random theta0 spec
    FrequencyDiameter, // target diameter of a random omega spec
};

const char* to_string(SweepParameter parameter);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

struct SweepPoint {
    double value = 0.0;
    std::optional<SyncReport> report; // empty when the run failed
    std::string error;                // failure reason, empty on success
};

/// One run_scenario per value, same seed throughout, results in input order.
/// Per-value failures are recorded in the corresponding SweepPoint instead of
/// aborting the sweep.
std::vector<SweepPoint> sweep(const Scenario& base, SweepParameter parameter,
                              const std::vector<double>& values,
                              const IntegratorConfig& config,
                              const DetectionThresholds& thresholds = DetectionThresholds{});

/// Built-in scenarios, one per studied regime.
const std::vector<Scenario>& catalog();

/// Catalog lookup by name (a few historical aliases resolve too).
/// Throws ConfigError listing the known names when nothing matches.
const Scenario& find_scenario(const std::string& name);

} // namespace syncarena
