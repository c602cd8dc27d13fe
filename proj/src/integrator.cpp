// Embedded Dormand-Prince 5(4) pair with the quartic dense output of
// Hairer, Norsett & Wanner, "Solving Ordinary Differential Equations I"
// (DOPRI5). Coefficients are the published rationals.

#include "syncarena/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace syncarena {

namespace {

// Runge-Kutta matrix
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0;
constexpr double a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0;
constexpr double a42 = -56.0 / 15.0;
constexpr double a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0;
constexpr double a52 = -25360.0 / 2187.0;
constexpr double a53 = 64448.0 / 6561.0;
constexpr double a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0;
constexpr double a62 = -355.0 / 33.0;
constexpr double a63 = 46732.0 / 5247.0;
constexpr double a64 = 49.0 / 176.0;
constexpr double a65 = -5103.0 / 18656.0;

// Fifth-order weights (also the seventh stage row; FSAL)
constexpr double b1 = 35.0 / 384.0;
constexpr double b3 = 500.0 / 1113.0;
constexpr double b4 = 125.0 / 192.0;
constexpr double b5 = -2187.0 / 6784.0;
constexpr double b6 = 11.0 / 84.0;

// Embedded error weights b - bhat
constexpr double e1 = 71.0 / 57600.0;
constexpr double e3 = -71.0 / 16695.0;
constexpr double e4 = 71.0 / 1920.0;
constexpr double e5 = -17253.0 / 339200.0;
constexpr double e6 = 22.0 / 525.0;
constexpr double e7 = -1.0 / 40.0;

// Dense output coefficients
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double step_safety = 0.9;
constexpr double step_shrink_limit = 0.2;
constexpr double step_grow_limit = 10.0;
constexpr double min_step = 1e-12;

double scaled_rms(const std::vector<double>& v, const std::vector<double>& scale) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = v[i] / scale[i];
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

// Classic starting-step heuristic from Hairer's HINIT.
double initial_step(const std::vector<double>& y, const std::vector<double>& f0,
                    const FrequencyProfile& omega, const CouplingSpec& coupling,
                    const IntegratorConfig& config) {
    const std::size_t n = y.size();
    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        scale[i] = config.absolute_tolerance + config.relative_tolerance * std::abs(y[i]);
    }
    const double d0 = scaled_rms(y, scale);
    const double d1n = scaled_rms(f0, scale);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * (d0 / d1n);
    h0 = std::min({h0, config.max_step, config.t_end});

    std::vector<double> y1(n);
    for (std::size_t i = 0; i < n; ++i) {
        y1[i] = y[i] + h0 * f0[i];
    }
    const std::vector<double> f1 = rhs(PhaseState{y1}, omega, coupling);
    std::vector<double> df(n);
    for (std::size_t i = 0; i < n; ++i) {
        df[i] = f1[i] - f0[i];
    }
    const double d2 = scaled_rms(df, scale) / h0;

    const double dm = std::max(d1n, d2);
    const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, config.max_step, config.t_end});
}

} // namespace

void validate(const IntegratorConfig& config) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(config.relative_tolerance) || !positive(config.absolute_tolerance)) {
        throw ConfigError("integrator tolerances must be positive");
    }
    if (!positive(config.max_step)) {
        throw ConfigError("max_step must be positive");
    }
    if (!positive(config.t_end)) {
        throw ConfigError("t_end must be positive");
    }
    if (!positive(config.sample_interval) || config.sample_interval > config.t_end) {
        throw ConfigError("sample_interval must be positive and no larger than t_end");
    }
}

Trajectory integrate_adaptive(const PhaseState& state0, const FrequencyProfile& omega,
                              const CouplingSpec& coupling, const IntegratorConfig& config) {
    validate(state0);
    validate(omega);
    validate(coupling);
    validate(config);
    const std::size_t n = state0.size();
    if (omega.size() != n) {
        throw DimensionError("integrate_adaptive: state/omega length mismatch");
    }

    Trajectory trajectory;
    trajectory.coupling = coupling;
    trajectory.omega = omega;
    trajectory.config = config;

    auto eval = [&](const std::vector<double>& y) { return rhs(PhaseState{y}, omega, coupling); };
    auto emit = [&](double t, std::vector<double> theta) {
        std::vector<double> theta_dot = eval(theta);
        trajectory.samples.push_back({t, std::move(theta), std::move(theta_dot)});
    };

    const double t_end = config.t_end;
    const double dt = config.sample_interval;
    const double grid_fuzz = 1e-9 * std::max(1.0, t_end);

    std::vector<double> y = state0.phases;
    std::vector<double> k1 = eval(y);
    emit(0.0, y);
    std::size_t grid_index = 1;

    std::vector<double> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ystage(n), ynew(n), yerr(n);
    std::vector<double> rcont1(n), rcont2(n), rcont3(n), rcont4(n), rcont5(n);

    double t = 0.0;
    double h = initial_step(y, k1, omega, coupling, config);
    bool rejected = false;

    while (t < t_end) {
        h = std::min(h, config.max_step);
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (h < min_step) {
            throw IntegrationError("step size underflow at t=" + std::to_string(t) +
                                   "; error control failed for this system");
        }

        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * a21 * k1[i];
        }
        k2 = eval(ystage);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        }
        k3 = eval(ystage);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        }
        k4 = eval(ystage);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        }
        k5 = eval(ystage);
        for (std::size_t i = 0; i < n; ++i) {
            ystage[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        }
        k6 = eval(ystage);
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        k7 = eval(ynew);

        double err_acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
            const double sk = config.absolute_tolerance +
                              config.relative_tolerance * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = yerr[i] / sk;
            err_acc += q * q;
        }
        const double err = std::sqrt(err_acc / static_cast<double>(n));

        if (err <= 1.0) {
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                rcont1[i] = y[i];
                rcont2[i] = ydiff;
                rcont3[i] = bspl;
                rcont4[i] = ydiff - h * k7[i] - bspl;
                rcont5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
            }
            while (grid_index * dt <= t + h + grid_fuzz && grid_index * dt <= t_end + grid_fuzz) {
                const double tg = std::min(grid_index * dt, t_end);
                const double theta_frac = std::clamp((tg - t) / h, 0.0, 1.0);
                std::vector<double> yg(n);
                for (std::size_t i = 0; i < n; ++i) {
                    yg[i] = rcont1[i] +
                            theta_frac *
                                (rcont2[i] +
                                 (1.0 - theta_frac) *
                                     (rcont3[i] +
                                      theta_frac * (rcont4[i] + (1.0 - theta_frac) * rcont5[i])));
                }
                emit(tg, std::move(yg));
                ++grid_index;
            }

            t = last ? t_end : t + h;
            y.swap(ynew);
            k1.swap(k7);

            double fac = step_safety * std::pow(err, -0.2);
            fac = std::clamp(fac, step_shrink_limit, step_grow_limit);
            if (rejected) {
                fac = std::min(fac, 1.0);
            }
            h *= fac;
            rejected = false;
        } else {
            rejected = true;
            const double fac = std::clamp(step_safety * std::pow(err, -0.2), step_shrink_limit, 1.0);
            h *= fac;
        }
    }

    // Grids that do not divide t_end still end with an exact t_end sample.
    if (trajectory.samples.back().t < t_end - grid_fuzz) {
        emit(t_end, y);
    }
    return trajectory;
}

Trajectory integrate_euler_oracle(const PhaseState& state0, const FrequencyProfile& omega,
                                  const CouplingSpec& coupling, double step, double t_end,
                                  std::size_t record_every) {
    validate(state0);
    validate(omega);
    validate(coupling);
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ConfigError("euler oracle step must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("euler oracle t_end must be positive");
    }
    if (record_every == 0) {
        throw ConfigError("record_every must be at least 1");
    }
    const std::size_t n = state0.size();
    if (omega.size() != n) {
        throw DimensionError("integrate_euler_oracle: state/omega length mismatch");
    }

    Trajectory trajectory;
    trajectory.coupling = coupling;
    trajectory.omega = omega;
    trajectory.config = IntegratorConfig{0.0, 0.0, step, t_end, step};

    auto eval = [&](const std::vector<double>& y) { return rhs(PhaseState{y}, omega, coupling); };
    auto emit = [&](double t, const std::vector<double>& theta) {
        trajectory.samples.push_back({t, theta, eval(theta)});
    };

    std::vector<double> y = state0.phases;
    emit(0.0, y);

    // Step sizes come from grid differences so the walked time hits the grid
    // values bit-exactly; the last step is shortened to land on t_end.
    const double fuzz = 1e-9 * std::max(1.0, t_end);
    auto total = static_cast<std::size_t>(std::ceil(t_end / step - fuzz));
    if (total == 0) {
        total = 1;
    }
    double t = 0.0;
    for (std::size_t j = 1; j <= total; ++j) {
        const double t_next = (j == total) ? t_end : static_cast<double>(j) * step;
        const double h = t_next - t;
        const std::vector<double> f = eval(y);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h * f[i];
        }
        t = t_next;
        if (j % record_every == 0 || j == total) {
            emit(t, y);
        }
    }
    return trajectory;
}

} // namespace syncarena
