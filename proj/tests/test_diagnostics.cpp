#include "doctest.h"

#include "syncarena/diagnostics.hpp"
#include "syncarena/experiments.hpp"
#include "syncarena/integrator.hpp"
#include "syncarena/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace syncarena;

namespace {

constexpr double pi = 3.14159265358979323846;

// Hand-built two-oscillator trajectory: phases (0, gap[s]) and velocities
// (0, vgap[s]) on an integer time grid. Lets the detection logic be tested
// against exactly known metric sequences.
Trajectory synthetic(const std::vector<double>& gap, const std::vector<double>& vgap) {
    REQUIRE(gap.size() == vgap.size());
    Trajectory traj;
    traj.coupling = {CouplingKind::StrongCompetition, 1.0};
    traj.omega = FrequencyProfile{{0.0, 0.0}};
    traj.config.t_end = static_cast<double>(gap.size() - 1);
    traj.config.sample_interval = 1.0;
    for (std::size_t s = 0; s < gap.size(); ++s) {
        traj.samples.push_back(
            {static_cast<double>(s), {0.0, gap[s]}, {0.0, vgap[s]}});
    }
    return traj;
}

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

TEST_CASE("diameter is max minus min") {
    CHECK(diameter({0.2, 1.5, -0.3}) == doctest::Approx(1.8).epsilon(1e-15));
    CHECK(diameter({4.2, 4.2, 4.2}) == 0.0);
    CHECK_THROWS_AS(diameter({}), DimensionError);

    std::mt19937_64 rng(9001);
    for (int c = 0; c < 120; ++c) {
        const std::size_t n = 1 + rng() % 8;
        std::vector<double> v(n);
        for (double& x : v) {
            x = (unit(rng) - 0.5) * 20.0;
        }
        const double d = diameter(v);
        CHECK(d >= 0.0);

        std::vector<double> shifted = v;
        const double c0 = (unit(rng) - 0.5) * 50.0;
        for (double& x : shifted) {
            x += c0;
        }
        CHECK(std::abs(diameter(shifted) - d) <= 1e-12);

        std::vector<double> scaled = v;
        const double factor = (unit(rng) - 0.5) * 6.0;
        for (double& x : scaled) {
            x *= factor;
        }
        CHECK(std::abs(diameter(scaled) - std::abs(factor) * d) <=
              1e-12 * (1.0 + std::abs(factor) * d));

        std::vector<double> shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(diameter(shuffled) == d);
    }
}

TEST_CASE("circular diameter is the smallest covering arc") {
    CHECK(circular_diameter(PhaseState{{0.0, 2.0 * pi}}) == 0.0);
    CHECK(circular_diameter(PhaseState{{1.0}}) == 0.0);
    const PhaseState ring{{0.0, pi / 3.0, 2.0 * pi / 3.0, pi, 4.0 * pi / 3.0,
                           5.0 * pi / 3.0}};
    CHECK(circular_diameter(ring) == doctest::Approx(5.0 * pi / 3.0).epsilon(1e-12));

    std::mt19937_64 rng(9002);
    for (int c = 0; c < 120; ++c) {
        const std::size_t n = 2 + rng() % 8;
        std::vector<double> v(n);
        for (double& x : v) {
            x = (unit(rng) - 0.5) * 30.0;
        }
        const double cd = circular_diameter(PhaseState{v});
        CHECK(cd >= 0.0);
        CHECK(cd < 2.0 * pi);

        // Rotation invariance on the circle.
        std::vector<double> rotated = v;
        const double c0 = (unit(rng) - 0.5) * 40.0;
        for (double& x : rotated) {
            x += c0;
        }
        CHECK(std::abs(circular_diameter(PhaseState{rotated}) - cd) <= 1e-9);

        // Lifting one phase by a full turn changes nothing.
        std::vector<double> lifted = v;
        lifted[rng() % n] += 2.0 * pi;
        CHECK(std::abs(circular_diameter(PhaseState{lifted}) - cd) <= 1e-9);
    }
}

TEST_CASE("circular diameter equals linear diameter inside a half circle") {
    std::mt19937_64 rng(9003);
    for (int c = 0; c < 120; ++c) {
        const std::size_t n = 2 + rng() % 8;
        const double base = (unit(rng) - 0.5) * 20.0;
        std::vector<double> v(n);
        v[0] = base;
        for (std::size_t i = 1; i < n; ++i) {
            v[i] = base + unit(rng) * (pi - 0.01);
        }
        const double d = diameter(v);
        const double cd = circular_diameter(PhaseState{v});
        CHECK(std::abs(cd - d) <= 1e-9);
        CHECK(cd <= d + 1e-12);
    }
}

TEST_CASE("order parameter measures phasor alignment") {
    CHECK(order_parameter(PhaseState{{0.7, 0.7, 0.7, 0.7}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const PhaseState ring{{0.0, pi / 3.0, 2.0 * pi / 3.0, pi, 4.0 * pi / 3.0,
                           5.0 * pi / 3.0}};
    CHECK(order_parameter(ring) <= 1e-12);
    CHECK(order_parameter(PhaseState{{0.0, pi}}) <= 1e-12);

    std::mt19937_64 rng(9004);
    for (int c = 0; c < 120; ++c) {
        const std::size_t n = 1 + rng() % 8;
        std::vector<double> v(n);
        for (double& x : v) {
            x = (unit(rng) - 0.5) * 30.0;
        }
        const double r = order_parameter(PhaseState{v});
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        std::vector<double> rotated = v;
        for (double& x : rotated) {
            x += 1.234;
        }
        CHECK(std::abs(order_parameter(PhaseState{rotated}) - r) <= 1e-9);
    }
}

TEST_CASE("detect_sync finds the earliest held crossing") {
    // Phase gap drops below 1e-3 at t=37 and stays; velocity gap at t=52.
    std::vector<double> gap(101), vgap(101);
    for (std::size_t s = 0; s <= 100; ++s) {
        gap[s] = s < 37 ? 1.0 : 1e-4;
        vgap[s] = s < 52 ? 0.5 : 1e-4;
    }
    const Trajectory traj = synthetic(gap, vgap);
    const SyncReport report = detect_sync(traj, 1e-3, 1e-3, 10.0);
    REQUIRE(report.phase_sync_time.has_value());
    CHECK(*report.phase_sync_time == 37.0);
    REQUIRE(report.freq_sync_time.has_value());
    CHECK(*report.freq_sync_time == 52.0);
    REQUIRE(report.sync_frequency.has_value());
    CHECK(*report.sync_frequency == doctest::Approx(5e-5).epsilon(1e-12));
    CHECK(report.final_phase_diameter == 1e-4);
    CHECK(report.final_velocity_diameter == 1e-4);
}

TEST_CASE("a late recrossing resets the detection point") {
    // Below threshold from t=20, pops back above at t=60, below again after.
    std::vector<double> gap(101, 1e-4), vgap(101, 1e-6);
    for (std::size_t s = 0; s < 20; ++s) {
        gap[s] = 2.0;
    }
    gap[60] = 0.5;
    const SyncReport report = detect_sync(synthetic(gap, vgap), 1e-3, 1e-3, 10.0);
    REQUIRE(report.phase_sync_time.has_value());
    CHECK(*report.phase_sync_time == 61.0);
}

TEST_CASE("detection requires the full hold window before t_end") {
    std::vector<double> gap(101, 1.0), vgap(101, 1e-6);
    for (std::size_t s = 95; s <= 100; ++s) {
        gap[s] = 1e-4; // only 5 time units below threshold
    }
    const SyncReport report = detect_sync(synthetic(gap, vgap), 1e-3, 1e-3, 10.0);
    CHECK_FALSE(report.phase_sync_time.has_value());
    CHECK(report.freq_sync_time.has_value());
}

TEST_CASE("vacuously large thresholds detect at the start") {
    std::vector<double> gap(101), vgap(101);
    std::mt19937_64 rng(9005);
    for (std::size_t s = 0; s <= 100; ++s) {
        gap[s] = unit(rng) * 3.0;
        vgap[s] = unit(rng) * 3.0;
    }
    const Trajectory traj = synthetic(gap, vgap);
    const SyncReport report = detect_sync(traj, 1e9, 1e9, 10.0);
    REQUIRE(report.phase_sync_time.has_value());
    CHECK(*report.phase_sync_time == traj.t_start());
    REQUIRE(report.freq_sync_time.has_value());
    CHECK(*report.freq_sync_time == traj.t_start());
    REQUIRE(report.sync_frequency.has_value());
    CHECK(*report.sync_frequency ==
          doctest::Approx((0.0 + vgap.back()) / 2.0).epsilon(1e-12));
}

TEST_CASE("detect_sync validates its inputs") {
    const Trajectory traj = synthetic({1.0, 0.5, 0.1}, {0.1, 0.1, 0.1});
    CHECK_THROWS_AS(detect_sync(traj, 1e-3, 1e-3, 10.0), ConfigError); // span 2 < 10
    CHECK_THROWS_AS(detect_sync(traj, 0.0, 1e-3, 1.0), ConfigError);
    CHECK_THROWS_AS(detect_sync(traj, 1e-3, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(detect_sync(Trajectory{}, 1e-3, 1e-3, 1.0), DimensionError);
}

TEST_CASE("detection on a simulated contraction run") {
    const Trajectory traj = integrate_adaptive(
        PhaseState{{0.0, 0.5, 1.0}}, FrequencyProfile{{0.0, 0.0, 0.0}},
        {CouplingKind::StrongCompetition, 1.0},
        IntegratorConfig{1e-5, 1e-8, 0.1, 30.0, 0.1});
    const SyncReport report = detect_sync(traj, 1e-3, 1e-3, 10.0);
    CHECK(report.phase_sync_time.has_value());
    CHECK(report.freq_sync_time.has_value());
    CHECK(report.final_circular_diameter < 1e-3);
    // Report invariants: all times inside the span, frequency only with sync.
    CHECK(*report.phase_sync_time >= traj.t_start());
    CHECK(*report.phase_sync_time <= traj.t_final());
    CHECK(report.sync_frequency.has_value() == report.freq_sync_time.has_value());
}

TEST_CASE("larger thresholds never delay detection") {
    std::mt19937_64 rng(9006);
    for (int c = 0; c < 150; ++c) {
        const std::size_t len = 40 + rng() % 40;
        std::vector<double> gap(len), vgap(len);
        const std::size_t settle = 5 + rng() % (len / 2);
        for (std::size_t s = 0; s < len; ++s) {
            if (s < settle) {
                gap[s] = 1e-4 + unit(rng) * 2.5;
                vgap[s] = 1e-4 + unit(rng) * 2.5;
            } else { // geometric decay toward zero after the settle point
                gap[s] = gap[settle - 1] * std::pow(0.5, double(s - settle + 1));
                vgap[s] = vgap[settle - 1] * std::pow(0.5, double(s - settle + 1));
            }
        }
        const Trajectory traj = synthetic(gap, vgap);
        const double eps_lo = 1e-4 + unit(rng) * 1.0;
        const double eps_hi = eps_lo + unit(rng) * 2.0 + 1e-6;
        const double hold = 5.0;
        const SyncReport lo = detect_sync(traj, eps_lo, eps_lo, hold);
        const SyncReport hi = detect_sync(traj, eps_hi, eps_hi, hold);
        if (lo.phase_sync_time) {
            REQUIRE(hi.phase_sync_time.has_value());
            CHECK(*hi.phase_sync_time <= *lo.phase_sync_time);
        }
        if (lo.freq_sync_time) {
            REQUIRE(hi.freq_sync_time.has_value());
            CHECK(*hi.freq_sync_time <= *lo.freq_sync_time);
        }
    }
}

TEST_CASE("phase diameter contracts into the sector and stays there") {
    // A coupling-dominated instance: k sin(delta) well above the frequency
    // spread, initial arc inside pi - delta. While the diameter is at least
    // delta its one-sided derivative is below -(k sin(delta) - D(Omega)), so
    // the sampled diameter decreases monotonically until the first sample
    // inside the sector and never leaves the sector afterwards. (Inside the
    // sector it is NOT monotone: it can undershoot the locked spread and
    // relax back up, which is why the assertion splits at the crossing.)
    const double delta = pi / 6.0;
    const std::vector<double> omega =
        generate_initial_conditions(606, 6, 0.5, 0.0);
    const std::vector<double> theta0 =
        generate_initial_conditions(607, 6, pi - delta - 0.1);
    const double k = 1.5; // k sin(delta) = 0.75 > 0.5
    const double t0 = trapping_time_T0(k, delta, 0.5);
    const Trajectory traj = integrate_adaptive(
        PhaseState{theta0}, FrequencyProfile{omega},
        {CouplingKind::StrongCompetition, k},
        IntegratorConfig{1e-5, 1e-8, 0.1, t0 + 30.0, 0.1});

    std::size_t first_inside = traj.samples.size();
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
        if (diameter(traj.samples[s].theta) < delta) {
            first_inside = s;
            break;
        }
    }
    REQUIRE(first_inside < traj.samples.size());
    double previous = diameter(traj.samples[0].theta);
    for (std::size_t s = 1; s <= first_inside; ++s) {
        const double current = diameter(traj.samples[s].theta);
        CHECK(current <= previous + 1e-6);
        previous = current;
    }
    for (std::size_t s = first_inside; s < traj.samples.size(); ++s) {
        CHECK(diameter(traj.samples[s].theta) <= delta + 1e-6);
    }
}

TEST_CASE("well-ordering check flags reversed pairs and respects tolerance") {
    Trajectory traj;
    traj.omega = FrequencyProfile{{1.0, 0.0}};
    traj.samples.push_back({0.0, {0.0, 1.0}, {1.0, 0.0}});
    traj.samples.push_back({1.0, {1.5, 1.2}, {1.0, 0.0}});
    const WellOrderingResult bad =
        check_well_ordering(traj, traj.omega, 0.0);
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violation.has_value());
    CHECK(bad.violation->t == 0.0);
    CHECK(bad.violation->i == 0);
    CHECK(bad.violation->j == 1);

    // Checking only from t=1 skips the early violation.
    CHECK(check_well_ordering(traj, traj.omega, 1.0).ok);

    // A deficit inside the tolerance is not a violation.
    Trajectory close;
    close.omega = FrequencyProfile{{1.0, 0.0}};
    close.samples.push_back({0.0, {1.0 - 1e-7, 1.0}, {1.0, 0.0}});
    CHECK(check_well_ordering(close, close.omega, 0.0).ok);
    close.samples[0].theta[0] = 1.0 - 1e-5;
    CHECK_FALSE(check_well_ordering(close, close.omega, 0.0).ok);

    CHECK_THROWS_AS(check_well_ordering(traj, traj.omega, 5.0), ConfigError);
    CHECK_THROWS_AS(check_well_ordering(Trajectory{}, traj.omega, 0.0),
                    DimensionError);
}

TEST_CASE("identical frequencies are well-ordered vacuously") {
    std::mt19937_64 rng(9007);
    Trajectory traj;
    traj.omega = FrequencyProfile{{0.3, 0.3, 0.3}};
    for (std::size_t s = 0; s < 50; ++s) {
        std::vector<double> theta{unit(rng) * 10.0, unit(rng) * 10.0,
                                  unit(rng) * 10.0};
        traj.samples.push_back({static_cast<double>(s), theta, {0.0, 0.0, 0.0}});
    }
    CHECK(check_well_ordering(traj, traj.omega, 0.0).ok);
}

TEST_CASE("group_by_frequency sorts distinct values descending") {
    {
        const std::vector<FrequencyGroup> groups =
            group_by_frequency(FrequencyProfile{{0.0, 0.0, -1.0}});
        REQUIRE(groups.size() == 2);
        CHECK(groups[0].omega == 0.0);
        CHECK(groups[0].indices == std::vector<std::size_t>{0, 1});
        CHECK(groups[1].omega == -1.0);
        CHECK(groups[1].indices == std::vector<std::size_t>{2});
    }
    {
        const std::vector<FrequencyGroup> groups =
            group_by_frequency(FrequencyProfile{{2.5, 2.5, 2.5, 2.5}});
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].indices.size() == 4);
    }
    {
        const std::vector<FrequencyGroup> groups =
            group_by_frequency(FrequencyProfile{{3.0, 1.0, 2.0}});
        REQUIRE(groups.size() == 3);
        CHECK(groups[0].omega == 3.0);
        CHECK(groups[1].omega == 2.0);
        CHECK(groups[2].omega == 1.0);
    }
    CHECK_THROWS_AS(group_by_frequency(FrequencyProfile{{}}), DimensionError);

    // Sizes always partition N.
    std::mt19937_64 rng(9008);
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = 1 + rng() % 10;
        std::vector<double> w(n);
        for (double& x : w) {
            x = static_cast<double>(rng() % 4); // collisions likely
        }
        const std::vector<FrequencyGroup> groups =
            group_by_frequency(FrequencyProfile{w});
        std::size_t total = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            total += groups[g].indices.size();
            if (g > 0) {
                CHECK(groups[g].omega < groups[g - 1].omega);
            }
        }
        CHECK(total == n);
    }
}
