#include "integrator.hpp"

#include <algorithm>
#include <cmath>

namespace r3flow::detail {

namespace {

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms, std::size_t dim)
{
    State out = y;
    for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (const auto& [c, k] : terms) {
            acc += c * (*k)[i];
        }
        out[i] += h * acc;
    }
    return out;
}

bool finite(const State& y, std::size_t dim)
{
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(y[i])) {
            return false;
        }
    }
    return true;
}

double norm(const State& y, std::size_t dim)
{
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        s += y[i] * y[i];
    }
    return std::sqrt(s);
}

State rk4_step(const OdeSystem& sys, const State& y, double h)
{
    const std::size_t d = sys.dim;
    const State k1 = sys.rhs(y);
    const State k2 = sys.rhs(axpy(y, h, {{0.5, &k1}}, d));
    const State k3 = sys.rhs(axpy(y, h, {{0.5, &k2}}, d));
    const State k4 = sys.rhs(axpy(y, h, {{1.0, &k3}}, d));
    return axpy(y, h, {{1.0 / 6.0, &k1}, {2.0 / 6.0, &k2}, {2.0 / 6.0, &k3}, {1.0 / 6.0, &k4}}, d);
}

struct Rkf45Trial {
    State y5;
    State err;
};

// Fehlberg 4(5) pair; the fifth-order solution is propagated.
Rkf45Trial rkf45_step(const OdeSystem& sys, const State& y, double h)
{
    const std::size_t d = sys.dim;
    const State k1 = sys.rhs(y);
    const State k2 = sys.rhs(axpy(y, h, {{1.0 / 4.0, &k1}}, d));
    const State k3 = sys.rhs(axpy(y, h, {{3.0 / 32.0, &k1}, {9.0 / 32.0, &k2}}, d));
    const State k4 =
        sys.rhs(axpy(y, h, {{1932.0 / 2197.0, &k1}, {-7200.0 / 2197.0, &k2}, {7296.0 / 2197.0, &k3}}, d));
    const State k5 = sys.rhs(
        axpy(y, h, {{439.0 / 216.0, &k1}, {-8.0, &k2}, {3680.0 / 513.0, &k3}, {-845.0 / 4104.0, &k4}}, d));
    const State k6 = sys.rhs(axpy(
        y, h,
        {{-8.0 / 27.0, &k1}, {2.0, &k2}, {-3544.0 / 2565.0, &k3}, {1859.0 / 4104.0, &k4}, {-11.0 / 40.0, &k5}},
        d));
    Rkf45Trial out;
    out.y5 = axpy(y, h,
                  {{16.0 / 135.0, &k1},
                   {6656.0 / 12825.0, &k3},
                   {28561.0 / 56430.0, &k4},
                   {-9.0 / 50.0, &k5},
                   {2.0 / 55.0, &k6}},
                  d);
    const State zero{};
    out.err = axpy(zero, h,
                   {{16.0 / 135.0 - 25.0 / 216.0, &k1},
                    {6656.0 / 12825.0 - 1408.0 / 2565.0, &k3},
                    {28561.0 / 56430.0 - 2197.0 / 4104.0, &k4},
                    {-9.0 / 50.0 + 1.0 / 5.0, &k5},
                    {2.0 / 55.0, &k6}},
                   d);
    return out;
}

class Runner {
public:
    Runner(const OdeSystem& sys, const Observer& obs) : sys_(sys), obs_(obs)
    {
    }

    // Returns true when the run must stop.
    bool accept(double t, const State& y)
    {
        res_.samples.push_back({t, y});
        if (sys_.guard) {
            if (auto g = sys_.guard(y)) {
                res_.termination = *g;
                return true;
            }
        }
        if (sys_.detect_rest) {
            const State f = sys_.rhs(y);
            if (norm(f, sys_.dim) < kConvergedTol * (1.0 + norm(y, sys_.dim))) {
                if (++streak_ >= kConvergedStreak) {
                    res_.termination = Termination::FixedPointConverged;
                    return true;
                }
            }
            else {
                streak_ = 0;
            }
        }
        if (obs_) {
            if (auto o = obs_(res_.samples.back())) {
                res_.termination = *o;
                return true;
            }
        }
        return false;
    }

    bool admissible(const State& y) const
    {
        return finite(y, sys_.dim) && (!sys_.admissible || sys_.admissible(y));
    }

    OdeResult take() { return std::move(res_); }
    OdeResult& result() { return res_; }

private:
    const OdeSystem& sys_;
    const Observer& obs_;
    OdeResult res_;
    int streak_ = 0;
};

void run_rk4(const OdeSystem& sys, const State& y0, double t0, const IntegratorConfig& cfg, Runner& run)
{
    const double span = cfg.t_end - t0;
    const double dir = span < 0.0 ? -1.0 : 1.0;
    const double h = dir * cfg.step;
    State y = y0;
    for (std::size_t k = 1;; ++k) {
        if (k > cfg.max_steps) {
            run.result().termination = Termination::MaxSteps;
            return;
        }
        const double t_prev = t0 + static_cast<double>(k - 1) * h;
        double t = t0 + static_cast<double>(k) * h;
        bool last = false;
        if (dir * (t - cfg.t_end) >= -1e-12 * cfg.step) {
            t = cfg.t_end;
            last = true;
        }
        const State next = rk4_step(sys, y, t - t_prev);
        if (!run.admissible(next)) {
            run.result().termination = sys.breakdown;
            return;
        }
        y = next;
        if (run.accept(t, y)) {
            return;
        }
        if (last) {
            run.result().termination = Termination::ReachedTEnd;
            return;
        }
    }
}

void run_rkf45(const OdeSystem& sys, const State& y0, double t0, const IntegratorConfig& cfg, Runner& run)
{
    const double dir = cfg.t_end < t0 ? -1.0 : 1.0;
    double h = cfg.step;
    double t = t0;
    State y = y0;
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 20 * cfg.max_steps;
    while (dir * (cfg.t_end - t) > 0.0) {
        if (accepted >= cfg.max_steps || ++attempts > max_attempts) {
            run.result().termination = Termination::MaxSteps;
            return;
        }
        const double remaining = std::abs(cfg.t_end - t);
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        if (h < kMinStep || t + dir * h == t) {
            throw Error(Errc::StepUnderflow, "adaptive step collapsed at t = " + std::to_string(t));
        }
        const Rkf45Trial trial = rkf45_step(sys, y, dir * h);
        double err = 0.0;
        for (std::size_t i = 0; i < sys.dim; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(trial.y5[i]));
            err = std::max(err, std::abs(trial.err[i]) / sc);
        }
        if (!run.admissible(trial.y5)) {
            h *= 0.2;
            continue;
        }
        if (!(err <= 1.0)) {
            const double f = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.2;
            h *= std::clamp(f, 0.2, 1.0);
            continue;
        }
        t = last ? cfg.t_end : t + dir * h;
        y = trial.y5;
        ++accepted;
        if (run.accept(t, y)) {
            return;
        }
        const double f = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(f, 0.2, 5.0);
    }
    run.result().termination = Termination::ReachedTEnd;
}

} // namespace

OdeResult solve(const OdeSystem& sys, const State& y0, double t0, const IntegratorConfig& cfg, const Observer& observer)
{
    cfg.validate();
    Runner run(sys, observer);
    if (!run.admissible(y0)) {
        throw Error(Errc::InvalidState, "initial state is not admissible");
    }
    run.result().samples.push_back({t0, y0});
    if (sys.guard) {
        if (auto g = sys.guard(y0)) {
            run.result().termination = *g;
            return run.take();
        }
    }
    const State f0 = sys.rhs(y0);
    bool rest = true;
    for (std::size_t i = 0; i < sys.dim; ++i) {
        rest = rest && f0[i] == 0.0;
    }
    if (rest && sys.detect_rest) {
        run.result().termination = Termination::FixedPointConverged;
        return run.take();
    }
    if (cfg.t_end == t0) {
        run.result().termination = Termination::ReachedTEnd;
        return run.take();
    }
    if (cfg.method == Method::RK4Fixed) {
        run_rk4(sys, y0, t0, cfg, run);
    }
    else {
        run_rkf45(sys, y0, t0, cfg, run);
    }
    return run.take();
}

} // namespace r3flow::detail
