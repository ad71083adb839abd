#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vectorfield.hpp"

namespace liesup {

enum class Method { RK4Fixed, RKF45 };

struct IntegratorConfig {
    Method method = Method::RKF45;
    double step = 1e-3;  // RK4 step; initial step for RKF45
    double rtol = 1e-10;
    double atol = 1e-12;
    double min_step = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;
    double overflow = 1e8;  // |state|_inf above this is a blow-up

    void validate() const {
        if (!(step > 0.0)) throw DomainError("integrator step must be positive");
        if (!(rtol > 0.0) || !(atol >= 0.0)) throw DomainError("integrator tolerances must be positive");
        if (!(min_step > 0.0) || !(max_step >= min_step)) throw DomainError("invalid integrator step bounds");
        if (max_steps < 1) throw DomainError("max_steps must be at least 1");
        if (!(overflow > 0.0)) throw DomainError("overflow threshold must be positive");
    }
};

enum class Trigger { StateOverflow, StepUnderflow, RhsError };

inline const char* trigger_name(Trigger t) {
    switch (t) {
        case Trigger::StateOverflow: return "StateOverflow";
        case Trigger::StepUnderflow: return "StepUnderflow";
        case Trigger::RhsError: return "RhsError";
    }
    return "";
}

struct SingularityEvent {
    double time = 0.0;
    Trigger trigger = Trigger::StateOverflow;
    std::string detail;
};

enum class Status { Completed, Singular, MaxStepsReached };

/// States at accepted steps, one row per time.
class Trajectory {
public:
    explicit Trajectory(std::size_t dimension = 0) : dimension_(dimension) {}

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    double time(std::size_t i) const { return times_.at(i); }
    std::span<const double> state(std::size_t i) const {
        return std::span<const double>(states_).subspan(i * dimension_, dimension_);
    }
    std::span<const double> final_state() const { return state(size() - 1); }

    Status status() const noexcept { return status_; }
    bool completed() const noexcept { return status_ == Status::Completed; }
    const std::optional<SingularityEvent>& event() const noexcept { return event_; }

    void append(double t, std::span<const double> x) {
        if (x.size() != dimension_) throw DimensionMismatch("trajectory row has wrong dimension");
        if (!times_.empty() && !(t > times_.back())) throw DomainError("trajectory times must be strictly increasing");
        times_.push_back(t);
        states_.insert(states_.end(), x.begin(), x.end());
    }

    void set_status(Status s, std::optional<SingularityEvent> e = std::nullopt) {
        status_ = s;
        event_ = std::move(e);
    }

private:
    std::size_t dimension_;
    std::vector<double> times_;
    std::vector<double> states_;
    Status status_ = Status::Completed;
    std::optional<SingularityEvent> event_;
};

namespace detail {

struct Outcome {
    Status status = Status::Completed;
    std::optional<SingularityEvent> event;
};

inline double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// Fehlberg 4(5) tableau.
struct Fehlberg {
    static constexpr std::array<double, 6> c{0.0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 1.0 / 2};
    static constexpr std::array<std::array<double, 5>, 6> a{{
        {0, 0, 0, 0, 0},
        {1.0 / 4, 0, 0, 0, 0},
        {3.0 / 32, 9.0 / 32, 0, 0, 0},
        {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
        {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104, 0},
        {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
    }};
    static constexpr std::array<double, 6> b5{16.0 / 135, 0, 6656.0 / 12825, 28561.0 / 56430, -9.0 / 50, 2.0 / 55};
    static constexpr std::array<double, 6> b4{25.0 / 216, 0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0};
};

// Advances (t, x) to `target`; `on_accept` sees every accepted step. `h` carries
// the adaptive step size across calls.
template <OdeRhs R, class OnAccept>
Outcome advance(const R& rhs, const IntegratorConfig& cfg, double& t, std::vector<double>& x, double target, double& h,
                std::size_t& steps, OnAccept&& on_accept) {
    const std::size_t n = x.size();
    std::array<std::vector<double>, 6> k;
    for (auto& v : k) v.assign(n, 0.0);
    std::vector<double> tmp(n), x5(n), x4(n);

    auto eval = [&](double tt, const std::vector<double>& xx, std::vector<double>& out) -> std::optional<std::string> {
        try {
            rhs.evaluate(tt, xx, out);
        } catch (const DomainError& e) {
            return std::string(e.what());
        }
        if (!all_finite(out)) return std::string("non-finite right-hand side");
        return std::nullopt;
    };
    auto singular = [&](Trigger trig, double when, std::string why) {
        return Outcome{Status::Singular, SingularityEvent{when, trig, std::move(why)}};
    };

    while (t < target) {
        if (steps >= cfg.max_steps) return Outcome{Status::MaxStepsReached, std::nullopt};
        const double remaining = target - t;
        double step = cfg.method == Method::RK4Fixed ? std::min(cfg.step, remaining) : std::min({h, remaining, cfg.max_step});
        // Avoid leaving a sliver shorter than rounding noise before the target.
        if (remaining - step < 1e-14 * std::max(1.0, std::abs(target))) step = remaining;

        if (cfg.method == Method::RK4Fixed) {
            static constexpr std::array<double, 4> ci{0.0, 0.5, 0.5, 1.0};
            for (std::size_t s = 0; s < 4; ++s) {
                for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + (s == 0 ? 0.0 : ci[s] * step * k[s - 1][i]);
                if (auto err = eval(t + ci[s] * step, s == 0 ? x : tmp, k[s])) return singular(Trigger::RhsError, t, *err);
            }
            for (std::size_t i = 0; i < n; ++i) x[i] += step / 6.0 * (k[0][i] + 2 * k[1][i] + 2 * k[2][i] + k[3][i]);
            t = (step == remaining) ? target : t + step;
        } else {
            bool retry = false;
            for (std::size_t s = 0; s < 6 && !retry; ++s) {
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < s; ++j) acc += Fehlberg::a[s][j] * k[j][i];
                    tmp[i] = x[i] + step * acc;
                }
                if (auto err = eval(t + Fehlberg::c[s] * step, tmp, k[s])) {
                    // A failed stage on a long step may just overshoot a singular point; retry shorter.
                    if (step * 0.25 >= cfg.min_step) {
                        h = step * 0.25;
                        retry = true;
                        break;
                    }
                    return singular(Trigger::RhsError, t, *err);
                }
            }
            if (retry) continue;
            {
                double err_norm = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double s5 = 0.0, s4 = 0.0;
                    for (std::size_t j = 0; j < 6; ++j) {
                        s5 += Fehlberg::b5[j] * k[j][i];
                        s4 += Fehlberg::b4[j] * k[j][i];
                    }
                    x5[i] = x[i] + step * s5;
                    x4[i] = x[i] + step * s4;
                    const double scale = cfg.atol + cfg.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
                    err_norm = std::max(err_norm, std::abs(x5[i] - x4[i]) / scale);
                }
                if (!std::isfinite(err_norm)) err_norm = 1e10;
                const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
                if (err_norm > 1.0) {
                    h = step * factor;
                    if (h < cfg.min_step) {
                        return singular(Trigger::StepUnderflow, t, "adaptive step fell below " + std::to_string(cfg.min_step));
                    }
                    continue;
                }
                x.swap(x5);
                t = (step == remaining) ? target : t + step;
                // Keep the step proposal unaffected by the truncated final step of a segment.
                if (step == remaining && step < h) {
                    h = std::max(h, step * factor);
                } else {
                    h = step * factor;
                }
            }
        }
        ++steps;
        if (!all_finite(x) || inf_norm(x) > cfg.overflow) {
            return singular(Trigger::StateOverflow, t, "state norm exceeded " + std::to_string(cfg.overflow));
        }
        on_accept(t, x);
    }
    return {};
}

}  // namespace detail

/// Integrates from x0 over [t0, t1], recording every accepted step.
/// Blow-up and right-hand-side failures end the run with Singular status and
/// the last valid state as the final row.
template <OdeRhs R>
Trajectory integrate(const R& rhs, std::span<const double> x0, double t0, double t1, const IntegratorConfig& cfg) {
    cfg.validate();
    if (x0.size() != rhs.dimension()) throw DimensionMismatch("initial state does not match system dimension");
    if (!(t0 < t1)) throw DomainError("integration span must satisfy t0 < t1");
    Trajectory traj(x0.size());
    traj.append(t0, x0);
    std::vector<double> x(x0.begin(), x0.end());
    double t = t0, h = std::min(cfg.step, t1 - t0);
    std::size_t steps = 0;
    auto out = detail::advance(rhs, cfg, t, x, t1, h, steps, [&](double tt, const std::vector<double>& xx) { traj.append(tt, xx); });
    traj.set_status(out.status, out.event);
    return traj;
}

/// Integrates through the given increasing grid, recording exactly one row per node.
template <OdeRhs R>
Trajectory integrate_on_grid(const R& rhs, std::span<const double> x0, std::span<const double> grid, const IntegratorConfig& cfg) {
    cfg.validate();
    if (x0.size() != rhs.dimension()) throw DimensionMismatch("initial state does not match system dimension");
    if (grid.empty()) throw DomainError("empty integration grid");
    Trajectory traj(x0.size());
    traj.append(grid[0], x0);
    std::vector<double> x(x0.begin(), x0.end());
    double t = grid[0], h = cfg.step;
    std::size_t steps = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        auto out = detail::advance(rhs, cfg, t, x, grid[i], h, steps, [](double, const std::vector<double>&) {});
        if (out.status != Status::Completed) {
            traj.set_status(out.status, out.event);
            return traj;
        }
        traj.append(grid[i], x);
    }
    return traj;
}

/// CSV with header `t,x0,...,x{n-1}` and 17 significant digits.
inline void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t";
    for (std::size_t i = 0; i < traj.dimension(); ++i) os << ",x" << i;
    os << "\n";
    char buf[40];
    for (std::size_t r = 0; r < traj.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.time(r));
        os << buf;
        for (double v : traj.state(r)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << ',' << buf;
        }
        os << "\n";
    }
}

using JointFunction = std::function<double(std::span<const double>)>;

/// max_t |psi(joint(t)) - psi(joint(t0))| over trajectories sharing a time grid.
inline double first_integral_drift(const std::vector<Trajectory>& trajs, const JointFunction& psi) {
    if (trajs.empty()) return 0.0;
    const auto& grid = trajs.front().times();
    std::size_t total = 0;
    for (const auto& tr : trajs) {
        if (tr.times() != grid) throw DimensionMismatch("first_integral_drift: trajectories do not share a time grid");
        total += tr.dimension();
    }
    std::vector<double> joint(total);
    double psi0 = 0.0, drift = 0.0;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        std::size_t off = 0;
        for (const auto& tr : trajs) {
            auto s = tr.state(r);
            std::copy(s.begin(), s.end(), joint.begin() + static_cast<std::ptrdiff_t>(off));
            off += s.size();
        }
        const double v = psi(joint);
        if (r == 0) psi0 = v;
        drift = std::max(drift, std::abs(v - psi0));
    }
    return drift;
}

/// W(t) = x1 p2 - p1 x2 at every node of two (x, p) trajectories on a shared grid.
inline std::vector<double> wronskian(const Trajectory& a, const Trajectory& b) {
    if (a.dimension() != 2 || b.dimension() != 2) throw DimensionMismatch("wronskian needs two-dimensional (x, p) trajectories");
    if (a.times() != b.times()) throw DimensionMismatch("wronskian: trajectories do not share a time grid");
    std::vector<double> w(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        auto s = a.state(r), u = b.state(r);
        w[r] = s[0] * u[1] - s[1] * u[0];
    }
    return w;
}

/// Splits a trajectory of a joint system into per-factor trajectories.
inline std::vector<Trajectory> split(const Trajectory& joint, const std::vector<std::size_t>& dims) {
    std::vector<Trajectory> out;
    std::size_t off = 0;
    for (auto d : dims) {
        Trajectory tr(d);
        for (std::size_t r = 0; r < joint.size(); ++r) tr.append(joint.time(r), joint.state(r).subspan(off, d));
        tr.set_status(joint.status(), joint.event());
        out.push_back(std::move(tr));
        off += d;
    }
    if (off != joint.dimension()) throw DimensionMismatch("split dimensions do not add up to the joint dimension");
    return out;
}

}  // namespace liesup
