#pragma once

#include "syncarena/experiments.hpp"
#include "syncarena/integrator.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace syncarena {

/// Columns: t, theta_1..theta_N, thetadot_1..thetadot_N. Values are written
/// as %.16e (17 significant digits), which round-trips doubles exactly.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory);

/// Side-by-side variant for model comparisons: t, then theta and thetadot
/// blocks per run, column names prefixed with the coupling kind.
void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonResult& comparison);

/// Reads a file produced by write_trajectory_csv. Restores times, phases and
/// velocities; run metadata (coupling, omega, config) is not stored in CSV
/// and is left default-constructed.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Full machine-readable run report: scenario echo (with seed), integrator
/// and threshold echo, materialized inputs, and per-run sync measurements,
/// hypothesis verdicts, bounds, and expectation outcome. The integrator echo
/// comes from the trajectory's stored effective config, and nothing
/// wall-clock dependent is included, so a rerun from the echoed scenario
/// reproduces the report byte for byte.
nlohmann::json run_report_json(const RunResult& result);

nlohmann::json comparison_report_json(const ComparisonResult& comparison);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// One plottable curve set extracted from a trajectory: D(Theta(t)) and
/// D(Theta_dot(t)) against the sample times.
struct DiameterSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> phase_diameter;
    std::vector<double> velocity_diameter;
};

DiameterSeries diameter_series(const Trajectory& trajectory, std::string label);

/// Two stacked panels (phase diameter, velocity diameter) with shared time
/// axis, one polyline per series. Pure function of its inputs: the bytes are
/// deterministic, no timestamps or generator metadata.
void write_diameters_svg(const std::filesystem::path& path,
                         const std::vector<DiameterSeries>& series);

/// Columns: value, phase_sync, freq_sync, phase_sync_time, freq_sync_time,
/// sync_frequency, error. Flags are 0/1, absent values empty, error quoted.
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points);

} // namespace syncarena
