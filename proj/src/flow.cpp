#include "r3flow/flow.hpp"

#include <algorithm>
#include <cmath>

#include "integrator.hpp"
#include "r3flow/curvature.hpp"

namespace r3flow {

std::string_view to_string(Formulation f) noexcept
{
    switch (f) {
    case Formulation::QFlow: return "QFlow";
    case Formulation::AFlow: return "AFlow";
    case Formulation::MFlowScaled: return "MFlowScaled";
    case Formulation::MFlowAutonomous: return "MFlowAutonomous";
    }
    return "?";
}

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::RK4Fixed: return "RK4Fixed";
    case Method::RKF45Adaptive: return "RKF45Adaptive";
    }
    return "?";
}

std::string_view to_string(Termination t) noexcept
{
    switch (t) {
    case Termination::ReachedTEnd: return "ReachedTEnd";
    case Termination::ExtinctionFloor: return "ExtinctionFloor";
    case Termination::BlowUpCeiling: return "BlowUpCeiling";
    case Termination::FixedPointConverged: return "FixedPointConverged";
    case Termination::MaxSteps: return "MaxSteps";
    }
    return "?";
}

void IntegratorConfig::validate() const
{
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(step)) {
        throw Error(Errc::InvalidConfig, "step must be positive");
    }
    if (!positive(abs_tol) || !positive(rel_tol)) {
        throw Error(Errc::InvalidConfig, "tolerances must be positive");
    }
    if (!std::isfinite(t_end)) {
        throw Error(Errc::InvalidConfig, "t_end must be finite");
    }
    if (max_steps < 1) {
        throw Error(Errc::InvalidConfig, "max_steps must be at least 1");
    }
    if (!positive(q_floor) || !positive(m_ceiling)) {
        throw Error(Errc::InvalidConfig, "q_floor and m_ceiling must be positive");
    }
}

std::size_t dimension(Formulation f) noexcept
{
    return f == Formulation::MFlowAutonomous ? 2 : 3;
}

std::size_t Trajectory::dimension() const noexcept { return r3flow::dimension(formulation); }

Vec3 q_flow_rhs(const Vec3& lambda, const Vec3& q) noexcept
{
    const Vec3 a = structure_constants_from_metric(lambda, q);
    Vec3 dq{};
    for (int i = 0; i < 3; ++i) {
        const double aj = a[(i + 1) % 3];
        const double ak = a[(i + 2) % 3];
        dq[i] = q[i] * (-a[i] * a[i] + (aj - ak) * (aj - ak));
    }
    return dq;
}

Vec3 q_flow_rhs(const MetricState& s) { return q_flow_rhs(s.lambda(), s.q()); }

Vec3 a_flow_rhs(const Vec3& a) noexcept
{
    const Vec3 k = sectional_curvatures(a);
    return {2.0 * k[0] * a[0], 2.0 * k[1] * a[1], 2.0 * k[2] * a[2]};
}

Vec3 a_flow_rhs(const StructureConstants& a) { return a_flow_rhs(a.values()); }

Point2 m_flow_rhs(Point2 p, double a1_sq, bool autonomous) noexcept
{
    const double s = autonomous ? 1.0 : scaled_speed(a1_sq);
    const double m2 = p.m2;
    const double m3 = p.m3;
    return {s * (m2 * (1.0 - m2) * (1.0 + m2 - m3)), s * (m3 * (1.0 - m3) * (1.0 - m2 + m3))};
}

namespace {

using detail::OdeSystem;
using detail::State;

double max_abs(const State& y, std::size_t dim)
{
    double m = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        m = std::max(m, std::abs(y[i]));
    }
    return m;
}

OdeSystem q_system(const Vec3& lambda, const IntegratorConfig& cfg)
{
    OdeSystem sys;
    sys.dim = 3;
    sys.rhs = [lambda](const State& q) { return q_flow_rhs(lambda, q); };
    sys.admissible = [](const State& q) { return q[0] > 0.0 && q[1] > 0.0 && q[2] > 0.0; };
    sys.guard = [floor = cfg.q_floor](const State& q) -> std::optional<Termination> {
        if (std::min({q[0], q[1], q[2]}) < floor) {
            return Termination::ExtinctionFloor;
        }
        return std::nullopt;
    };
    sys.breakdown = Termination::ExtinctionFloor;
    return sys;
}

OdeSystem ceiling_system(std::size_t dim, std::function<State(const State&)> rhs, const IntegratorConfig& cfg)
{
    OdeSystem sys;
    sys.dim = dim;
    sys.rhs = std::move(rhs);
    sys.guard = [dim, ceiling = cfg.m_ceiling](const State& y) -> std::optional<Termination> {
        if (max_abs(y, dim) > ceiling) {
            return Termination::BlowUpCeiling;
        }
        return std::nullopt;
    };
    return sys;
}

State scaled_chart_rhs(const State& y)
{
    const double a1 = y[2];
    const Point2 dm = m_flow_rhs({y[0], y[1]}, a1 * a1, false);
    const Vec3 k = sectional_curvatures({a1, y[0] * a1, y[1] * a1});
    return {dm.m2, dm.m3, 2.0 * k[0] * a1};
}

Trajectory wrap(Formulation f, detail::OdeResult r)
{
    Trajectory t;
    t.formulation = f;
    t.samples = std::move(r.samples);
    t.termination = r.termination;
    return t;
}

[[noreturn]] void mismatch(Formulation f)
{
    throw Error(Errc::InvalidState, "initial state does not match formulation " + std::string(to_string(f)));
}

} // namespace

Trajectory integrate(Formulation formulation, const InitialState& initial, const IntegratorConfig& cfg)
{
    cfg.validate();
    switch (formulation) {
    case Formulation::QFlow: {
        const auto* s = std::get_if<MetricState>(&initial);
        if (!s) {
            mismatch(formulation);
        }
        return wrap(formulation, detail::solve(q_system(s->lambda(), cfg), s->q(), s->t(), cfg));
    }
    case Formulation::AFlow: {
        const auto* a = std::get_if<StructureConstants>(&initial);
        if (!a) {
            mismatch(formulation);
        }
        auto sys = ceiling_system(3, [](const State& y) { return a_flow_rhs(y); }, cfg);
        return wrap(formulation, detail::solve(sys, a->values(), 0.0, cfg));
    }
    case Formulation::MFlowScaled: {
        const auto* s = std::get_if<ScaledChartState>(&initial);
        if (!s) {
            mismatch(formulation);
        }
        auto sys = ceiling_system(3, scaled_chart_rhs, cfg);
        return wrap(formulation, detail::solve(sys, {s->m2, s->m3, s->a1}, 0.0, cfg));
    }
    case Formulation::MFlowAutonomous: {
        const auto* p = std::get_if<Point2>(&initial);
        if (!p) {
            mismatch(formulation);
        }
        auto rhs = [](const State& y) {
            const Point2 d = m_flow_rhs({y[0], y[1]}, 0.0, true);
            return State{d.m2, d.m3, 0.0};
        };
        return wrap(formulation, detail::solve(ceiling_system(2, rhs, cfg), {p->m2, p->m3, 0.0}, 0.0, cfg));
    }
    }
    mismatch(formulation);
}

CrossCheckReport cross_check_formulations(const MetricState& s0, const IntegratorConfig& cfg)
{
    if (s0.lambda()[0] == 0.0) {
        throw Error(Errc::ChartUndefined, "lambda1 = 0 gives a1 = 0 along the whole flow");
    }
    IntegratorConfig rk = cfg;
    rk.method = Method::RK4Fixed;
    const Trajectory tr = integrate(Formulation::QFlow, s0, rk);
    const auto& smp = tr.samples;
    const std::size_t n = smp.size();

    std::vector<Point2> m(n);
    std::vector<double> a1_sq(n);
    std::vector<double> speed(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 q{smp[k].y[0], smp[k].y[1], smp[k].y[2]};
        const Vec3 a = structure_constants_from_metric(s0.lambda(), q);
        if (a[0] == 0.0) {
            throw Error(Errc::ChartUndefined, "a1 vanished along the flow");
        }
        m[k] = {a[1] / a[0], a[2] / a[0]};
        a1_sq[k] = a[0] * a[0];
        const Vec3 dq = q_flow_rhs(s0.lambda(), q);
        speed[k] = std::max({std::abs(dq[0] / q[0]), std::abs(dq[1] / q[1]), std::abs(dq[2] / q[2])});
    }

    CrossCheckReport rep;
    rep.termination = tr.termination;
    rep.t_final = tr.back().t;
    const double h = smp.size() > 1 ? smp[1].t - smp[0].t : cfg.step;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        bool uniform = true;
        double local_speed = 0.0;
        for (std::size_t j = k - 2; j <= k + 2; ++j) {
            if (j > k - 2 && std::abs((smp[j].t - smp[j - 1].t) - h) > 1e-9 * std::abs(h)) {
                uniform = false;
            }
            local_speed = std::max(local_speed, speed[j]);
        }
        if (!uniform) {
            continue;
        }
        if (std::abs(h) * local_speed > kCrossCheckResolution) {
            ++rep.samples_unresolved;
            continue;
        }
        auto fd = [&](double Point2::*c) {
            return (m[k - 2].*c - 8.0 * (m[k - 1].*c) + 8.0 * (m[k + 1].*c) - m[k + 2].*c) / (12.0 * h);
        };
        const Point2 rhs = m_flow_rhs(m[k], a1_sq[k], false);
        const double r = std::hypot(fd(&Point2::m2) - rhs.m2, fd(&Point2::m3) - rhs.m3);
        rep.max_residual = std::max(rep.max_residual, r);
        ++rep.samples_checked;
    }
    return rep;
}

} // namespace r3flow
