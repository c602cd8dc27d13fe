#include "syncarena/io.hpp"

#include "syncarena/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

namespace syncarena {

namespace {

using nlohmann::json;

// %.16e (17 significant digits) round-trips IEEE doubles exactly.
std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string format_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path.string());
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ConfigError("malformed number '" + field + "' in " + path.string());
    }
    return v;
}

CouplingKind parse_coupling_kind(const std::string& name) {
    if (name == "classical") {
        return CouplingKind::Classical;
    }
    if (name == "strong_competition") {
        return CouplingKind::StrongCompetition;
    }
    throw ConfigError("unknown coupling kind '" + name +
                      "' (expected classical or strong_competition)");
}

json opt_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json spec_to_json(const VectorSpec& spec) {
    if (spec.values) {
        return json{{"values", *spec.values}};
    }
    json j{{"diameter", spec.target_diameter}};
    if (spec.shift_max_to) {
        j["shift_max_to"] = *spec.shift_max_to;
    }
    return j;
}

VectorSpec spec_from_json(const json& j, const char* which) {
    if (!j.is_object()) {
        throw ConfigError(std::string(which) + " spec must be an object with "
                          "either \"values\" or \"diameter\"");
    }
    if (j.contains("values")) {
        return VectorSpec::explicit_values(j.at("values").get<std::vector<double>>());
    }
    if (!j.contains("diameter")) {
        throw ConfigError(std::string(which) + " spec needs \"values\" or \"diameter\"");
    }
    std::optional<double> shift;
    if (j.contains("shift_max_to") && !j.at("shift_max_to").is_null()) {
        shift = j.at("shift_max_to").get<double>();
    }
    return VectorSpec::random(j.at("diameter").get<double>(), shift);
}

json expectation_to_json(const Expectation& e) {
    json j;
    j["guaranteed"] = e.guaranteed;
    j["note"] = e.note;
    j["phase_sync"] = e.phase_sync ? json(*e.phase_sync) : json(nullptr);
    j["freq_sync"] = e.freq_sync ? json(*e.freq_sync) : json(nullptr);
    j["sync_frequency"] = opt_json(e.sync_frequency);
    j["freq_tolerance"] = e.freq_tolerance;
    j["final_phase_diameter"] = opt_json(e.final_phase_diameter);
    j["diameter_tolerance"] = e.diameter_tolerance;
    j["final_circular_diameter_below"] = opt_json(e.final_circular_diameter_below);
    return j;
}

Expectation expectation_from_json(const json& j) {
    Expectation e;
    e.guaranteed = j.value("guaranteed", false);
    e.note = j.value("note", std::string{});
    if (j.contains("phase_sync") && !j.at("phase_sync").is_null()) {
        e.phase_sync = j.at("phase_sync").get<bool>();
    }
    if (j.contains("freq_sync") && !j.at("freq_sync").is_null()) {
        e.freq_sync = j.at("freq_sync").get<bool>();
    }
    if (j.contains("sync_frequency") && !j.at("sync_frequency").is_null()) {
        e.sync_frequency = j.at("sync_frequency").get<double>();
    }
    e.freq_tolerance = j.value("freq_tolerance", 1e-3);
    if (j.contains("final_phase_diameter") && !j.at("final_phase_diameter").is_null()) {
        e.final_phase_diameter = j.at("final_phase_diameter").get<double>();
    }
    e.diameter_tolerance = j.value("diameter_tolerance", 1e-2);
    if (j.contains("final_circular_diameter_below") &&
        !j.at("final_circular_diameter_below").is_null()) {
        e.final_circular_diameter_below =
            j.at("final_circular_diameter_below").get<double>();
    }
    return e;
}

json sync_report_json(const SyncReport& r) {
    json j;
    j["phase_sync_time"] = opt_json(r.phase_sync_time);
    j["freq_sync_time"] = opt_json(r.freq_sync_time);
    j["sync_frequency"] = opt_json(r.sync_frequency);
    j["well_ordering_time"] = opt_json(r.well_ordering_time);
    j["final_phase_diameter"] = r.final_phase_diameter;
    j["final_circular_diameter"] = r.final_circular_diameter;
    j["final_velocity_diameter"] = r.final_velocity_diameter;
    return j;
}

json verdict_json(const HypothesisVerdict& v) {
    json conditions = json::array();
    for (const ConditionCheck& c : v.conditions) {
        conditions.push_back(
            json{{"name", c.name}, {"holds", c.holds}, {"margin", c.margin}});
    }
    return json{{"theorem", to_string(v.theorem)},
                {"holds", v.holds},
                {"conditions", conditions}};
}

json run_json(const RunResult& r) {
    json j;
    j["coupling"] = to_string(r.kind);
    j["predicted_frequency"] = r.predicted_frequency;
    j["sync"] = sync_report_json(r.report);
    json hypotheses = json::array();
    for (const HypothesisVerdict& v : r.verdicts) {
        hypotheses.push_back(verdict_json(v));
    }
    j["hypotheses"] = hypotheses;
    json bounds;
    bounds["trapping_time"] = opt_json(r.trapping_time);
    bounds["trapping_guaranteed"] = r.trapping_guaranteed;
    bounds["t_star"] = opt_json(r.t_star);
    if (r.well_ordering) {
        json w;
        w["ok"] = r.well_ordering->ok;
        if (r.well_ordering->violation) {
            const OrderingViolation& v = *r.well_ordering->violation;
            w["violation"] = json{{"t", v.t}, {"i", v.i}, {"j", v.j}};
        } else {
            w["violation"] = nullptr;
        }
        bounds["well_ordering"] = w;
    } else {
        bounds["well_ordering"] = nullptr;
    }
    j["bounds"] = bounds;
    if (r.expectation) {
        j["expectation"] = json{{"pass", r.expectation->pass},
                                {"guaranteed", r.expectation->guaranteed},
                                {"failures", r.expectation->failures}};
    } else {
        j["expectation"] = nullptr;
    }
    return j;
}

json integrator_json(const IntegratorConfig& c) {
    json j;
    j["relative_tolerance"] = c.relative_tolerance;
    j["absolute_tolerance"] = c.absolute_tolerance;
    j["max_step"] = c.max_step;
    j["t_end"] = c.t_end;
    j["sample_interval"] = c.sample_interval;
    return j;
}

json thresholds_json(const DetectionThresholds& t) {
    json j;
    j["eps_phase"] = t.eps_phase;
    j["eps_freq"] = t.eps_freq;
    j["hold_window"] = t.hold_window;
    return j;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

double nice_step(double range, int target_ticks) {
    if (!(range > 0.0)) {
        return 1.0;
    }
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm < 1.5) {
        step = 1.0;
    } else if (norm < 3.5) {
        step = 2.0;
    } else if (norm < 7.5) {
        step = 5.0;
    }
    return step * mag;
}

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#8c564b", "#e377c2"};

struct PanelLayout {
    double x0;
    double y0;
    double w;
    double h;
};

void append_panel(std::string& out, const PanelLayout& p, const std::string& title,
                  const std::vector<DiameterSeries>& series, bool velocity,
                  double t_min, double t_max) {
    double y_max = 0.0;
    for (const DiameterSeries& s : series) {
        const std::vector<double>& ys = velocity ? s.velocity_diameter : s.phase_diameter;
        for (double y : ys) {
            y_max = std::max(y_max, y);
        }
    }
    if (y_max <= 0.0) {
        y_max = 1.0;
    }
    y_max *= 1.05;

    const double t_span = (t_max > t_min) ? (t_max - t_min) : 1.0;
    auto x_of = [&](double t) { return p.x0 + (t - t_min) / t_span * p.w; };
    auto y_of = [&](double y) { return p.y0 + p.h - y / y_max * p.h; };

    out += "<text x=\"" + format_coord(p.x0) + "\" y=\"" + format_coord(p.y0 - 10.0) +
           "\" font-size=\"15\" fill=\"#222\">" + xml_escape(title) + "</text>\n";

    // gridlines and ticks
    const double x_step = nice_step(t_span, 8);
    for (double t = std::ceil(t_min / x_step) * x_step; t <= t_max + 1e-9 * t_span;
         t += x_step) {
        const std::string x = format_coord(x_of(t));
        out += "<line x1=\"" + x + "\" y1=\"" + format_coord(p.y0) + "\" x2=\"" + x +
               "\" y2=\"" + format_coord(p.y0 + p.h) +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + x + "\" y=\"" + format_coord(p.y0 + p.h + 18.0) +
               "\" font-size=\"12\" fill=\"#444\" text-anchor=\"middle\">" +
               format_tick(t) + "</text>\n";
    }
    const double y_step = nice_step(y_max, 5);
    for (double y = 0.0; y <= y_max + 1e-9 * y_max; y += y_step) {
        const std::string yy = format_coord(y_of(y));
        out += "<line x1=\"" + format_coord(p.x0) + "\" y1=\"" + yy + "\" x2=\"" +
               format_coord(p.x0 + p.w) + "\" y2=\"" + yy +
               "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + format_coord(p.x0 - 8.0) + "\" y=\"" +
               format_coord(y_of(y) + 4.0) +
               "\" font-size=\"12\" fill=\"#444\" text-anchor=\"end\">" +
               format_tick(y) + "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const std::vector<double>& ys =
            velocity ? series[s].velocity_diameter : series[s].phase_diameter;
        std::string points;
        points.reserve(ys.size() * 14);
        for (std::size_t i = 0; i < ys.size(); ++i) {
            points += format_coord(x_of(series[s].t[i]));
            points += ',';
            points += format_coord(y_of(ys[i]));
            points += ' ';
        }
        out += "<polyline fill=\"none\" stroke=\"";
        out += palette[s % (sizeof(palette) / sizeof(palette[0]))];
        out += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    }

    // legend, top right inside the panel
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = p.y0 + 16.0 + 18.0 * static_cast<double>(s);
        const double lx = p.x0 + p.w - 190.0;
        out += "<line x1=\"" + format_coord(lx) + "\" y1=\"" + format_coord(ly - 4.0) +
               "\" x2=\"" + format_coord(lx + 26.0) + "\" y2=\"" +
               format_coord(ly - 4.0) + "\" stroke=\"";
        out += palette[s % (sizeof(palette) / sizeof(palette[0]))];
        out += "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + format_coord(lx + 32.0) + "\" y=\"" + format_coord(ly) +
               "\" font-size=\"12\" fill=\"#222\">" + xml_escape(series[s].label) +
               "</text>\n";
    }

    out += "<rect x=\"" + format_coord(p.x0) + "\" y=\"" + format_coord(p.y0) +
           "\" width=\"" + format_coord(p.w) + "\" height=\"" + format_coord(p.h) +
           "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
}

} // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory) {
    if (trajectory.samples.empty()) {
        throw DimensionError("write_trajectory_csv: trajectory has no samples");
    }
    std::ofstream out = open_for_write(path);
    const std::size_t n = trajectory.oscillator_count();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",theta_" << i;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",thetadot_" << i;
    }
    out << "\n";
    for (const TrajectorySample& sample : trajectory.samples) {
        out << format_full(sample.t);
        for (double v : sample.theta) {
            out << ',' << format_full(v);
        }
        for (double v : sample.theta_dot) {
            out << ',' << format_full(v);
        }
        out << "\n";
    }
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonResult& comparison) {
    if (comparison.runs.empty()) {
        throw DimensionError("write_comparison_csv: no runs");
    }
    const std::size_t sample_count = comparison.runs.front().trajectory.samples.size();
    for (const RunResult& run : comparison.runs) {
        if (run.trajectory.samples.size() != sample_count) {
            throw DimensionError("write_comparison_csv: runs sampled on different grids");
        }
    }
    std::ofstream out = open_for_write(path);
    const std::size_t n = comparison.runs.front().trajectory.oscillator_count();
    out << "t";
    for (const RunResult& run : comparison.runs) {
        for (std::size_t i = 1; i <= n; ++i) {
            out << ',' << to_string(run.kind) << "_theta_" << i;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            out << ',' << to_string(run.kind) << "_thetadot_" << i;
        }
    }
    out << "\n";
    for (std::size_t s = 0; s < sample_count; ++s) {
        out << format_full(comparison.runs.front().trajectory.samples[s].t);
        for (const RunResult& run : comparison.runs) {
            const TrajectorySample& sample = run.trajectory.samples[s];
            for (double v : sample.theta) {
                out << ',' << format_full(v);
            }
            for (double v : sample.theta_dot) {
                out << ',' << format_full(v);
            }
        }
        out << "\n";
    }
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open for reading: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("empty trajectory file: " + path.string());
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header.front() != "t" || header.size() % 2 == 0) {
        throw ConfigError("unexpected trajectory header in " + path.string());
    }
    const std::size_t n = (header.size() - 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (header[1 + i].rfind("theta_", 0) != 0 ||
            header[1 + n + i].rfind("thetadot_", 0) != 0) {
            throw ConfigError("unexpected trajectory header in " + path.string());
        }
    }

    Trajectory trajectory;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError("row width mismatch in " + path.string());
        }
        TrajectorySample sample;
        sample.t = parse_double(fields[0], path);
        sample.theta.resize(n);
        sample.theta_dot.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sample.theta[i] = parse_double(fields[1 + i], path);
            sample.theta_dot[i] = parse_double(fields[1 + n + i], path);
        }
        trajectory.samples.push_back(std::move(sample));
    }
    if (trajectory.samples.empty()) {
        throw ConfigError("trajectory file has no data rows: " + path.string());
    }
    return trajectory;
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
    json kinds = json::array();
    for (CouplingKind kind : scenario.kinds) {
        kinds.push_back(to_string(kind));
    }
    json j;
    j["name"] = scenario.name;
    j["description"] = scenario.description;
    j["n"] = scenario.n;
    j["kinds"] = kinds;
    j["k"] = scenario.k;
    j["omega"] = spec_to_json(scenario.omega_spec);
    j["theta0"] = spec_to_json(scenario.theta0_spec);
    j["seed"] = scenario.seed;
    j["t_end"] = scenario.t_end;
    j["delta"] = opt_json(scenario.delta);
    j["expected"] = scenario.expected ? expectation_to_json(*scenario.expected)
                                      : json(nullptr);
    return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
    try {
        Scenario s;
        s.name = j.at("name").get<std::string>();
        s.description = j.value("description", std::string{});
        s.n = j.at("n").get<std::size_t>();
        s.kinds.clear();
        if (j.contains("kinds")) {
            for (const json& kind : j.at("kinds")) {
                s.kinds.push_back(parse_coupling_kind(kind.get<std::string>()));
            }
        } else {
            s.kinds.push_back(CouplingKind::StrongCompetition);
        }
        s.k = j.at("k").get<double>();
        s.omega_spec = spec_from_json(j.at("omega"), "omega");
        s.theta0_spec = spec_from_json(j.at("theta0"), "theta0");
        s.seed = j.value("seed", std::uint64_t{0});
        s.t_end = j.value("t_end", 200.0);
        if (j.contains("delta") && !j.at("delta").is_null()) {
            s.delta = j.at("delta").get<double>();
        }
        if (j.contains("expected") && !j.at("expected").is_null()) {
            s.expected = expectation_from_json(j.at("expected"));
        }
        validate(s);
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad scenario json: ") + e.what());
    }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open for reading: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("failed to parse " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

nlohmann::json run_report_json(const RunResult& result) {
    json j;
    j["scenario"] = scenario_to_json(result.scenario);
    j["integrator"] = integrator_json(result.trajectory.config);
    j["thresholds"] = thresholds_json(result.report.thresholds);
    j["inputs"] = json{{"omega", result.omega.omegas},
                       {"theta0", result.theta0.phases}};
    j["runs"] = json::array({run_json(result)});
    return j;
}

nlohmann::json comparison_report_json(const ComparisonResult& comparison) {
    if (comparison.runs.empty()) {
        throw DimensionError("comparison_report_json: no runs");
    }
    json j;
    j["scenario"] = scenario_to_json(comparison.scenario);
    j["integrator"] = integrator_json(comparison.runs.front().trajectory.config);
    j["thresholds"] = thresholds_json(comparison.runs.front().report.thresholds);
    j["inputs"] = json{{"omega", comparison.omega.omegas},
                       {"theta0", comparison.theta0.phases}};
    json runs = json::array();
    for (const RunResult& run : comparison.runs) {
        runs.push_back(run_json(run));
    }
    j["runs"] = runs;
    return j;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << "\n";
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

DiameterSeries diameter_series(const Trajectory& trajectory, std::string label) {
    if (trajectory.samples.empty()) {
        throw DimensionError("diameter_series: trajectory has no samples");
    }
    DiameterSeries series;
    series.label = std::move(label);
    series.t.reserve(trajectory.samples.size());
    series.phase_diameter.reserve(trajectory.samples.size());
    series.velocity_diameter.reserve(trajectory.samples.size());
    for (const TrajectorySample& sample : trajectory.samples) {
        series.t.push_back(sample.t);
        series.phase_diameter.push_back(diameter(sample.theta));
        series.velocity_diameter.push_back(diameter(sample.theta_dot));
    }
    return series;
}

void write_diameters_svg(const std::filesystem::path& path,
                         const std::vector<DiameterSeries>& series) {
    if (series.empty()) {
        throw DimensionError("write_diameters_svg: no series");
    }
    double t_min = series.front().t.front();
    double t_max = t_min;
    for (const DiameterSeries& s : series) {
        if (s.t.empty() || s.t.size() != s.phase_diameter.size() ||
            s.t.size() != s.velocity_diameter.size()) {
            throw DimensionError("write_diameters_svg: series lengths disagree");
        }
        t_min = std::min(t_min, s.t.front());
        t_max = std::max(t_max, s.t.back());
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"760\" "
           "viewBox=\"0 0 960 760\" font-family=\"sans-serif\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"760\" fill=\"#ffffff\"/>\n";
    append_panel(svg, PanelLayout{70.0, 50.0, 850.0, 280.0},
                 "phase diameter D(theta)", series, false, t_min, t_max);
    append_panel(svg, PanelLayout{70.0, 420.0, 850.0, 280.0},
                 "velocity diameter D(theta_dot)", series, true, t_min, t_max);
    svg += "<text x=\"495\" y=\"745\" font-size=\"13\" fill=\"#444\" "
           "text-anchor=\"middle\">t</text>\n";
    svg += "</svg>\n";

    std::ofstream out = open_for_write(path);
    out << svg;
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepPoint>& points) {
    std::ofstream out = open_for_write(path);
    out << "value,phase_sync,freq_sync,phase_sync_time,freq_sync_time,"
           "sync_frequency,error\n";
    for (const SweepPoint& point : points) {
        out << format_full(point.value) << ',';
        if (point.report) {
            const SyncReport& r = *point.report;
            out << (r.phase_sync_time ? '1' : '0') << ','
                << (r.freq_sync_time ? '1' : '0') << ',';
            out << (r.phase_sync_time ? format_full(*r.phase_sync_time) : std::string{})
                << ',';
            out << (r.freq_sync_time ? format_full(*r.freq_sync_time) : std::string{})
                << ',';
            out << (r.sync_frequency ? format_full(*r.sync_frequency) : std::string{})
                << ',';
        } else {
            out << ",,,,,";
        }
        std::string error = point.error;
        if (error.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : error) {
                quoted += c;
                if (c == '"') {
                    quoted += '"';
                }
            }
            quoted += '"';
            error = quoted;
        }
        out << error << "\n";
    }
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

} // namespace syncarena
