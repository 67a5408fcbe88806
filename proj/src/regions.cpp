#include "r3flow/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace r3flow {

std::string_view to_string(FixedPointTag t) noexcept
{
    switch (t) {
    case FixedPointTag::P1: return "p1";
    case FixedPointTag::P2: return "p2";
    case FixedPointTag::P3: return "p3";
    case FixedPointTag::P4: return "p4";
    }
    return "?";
}

std::string_view to_string(Region r) noexcept
{
    switch (r) {
    case Region::P1: return "P1";
    case Region::P2: return "P2";
    case Region::P3: return "P3";
    case Region::P4: return "P4";
    case Region::T12: return "T12";
    case Region::T13: return "T13";
    case Region::T13p: return "T13p";
    case Region::T14: return "T14";
    case Region::T23: return "T23";
    case Region::T34: return "T34";
    case Region::B14: return "B14";
    case Region::B13: return "B13";
    case Region::B13p: return "B13p";
    }
    return "?";
}

Point2 location(FixedPointTag t) noexcept
{
    switch (t) {
    case FixedPointTag::P1: return {0.0, 0.0};
    case FixedPointTag::P2: return {0.0, -1.0};
    case FixedPointTag::P3: return {1.0, 0.0};
    case FixedPointTag::P4: return {1.0, 1.0};
    }
    return {};
}

RegionLabel region_label(Region r)
{
    using F = FixedPointTag;
    switch (r) {
    case Region::P1: return {r, F::P1, F::P1, "Heisenberg soliton"};
    case Region::P2: return {r, F::P2, F::P2, "E(1,1) soliton"};
    case Region::P3: return {r, F::P3, F::P3, "flat metric"};
    case Region::P4: return {r, F::P4, F::P4, "round metric"};
    case Region::T12: return {r, F::P1, F::P2, "E(1,1) metrics, submersions over R"};
    case Region::T13: return {r, F::P1, F::P3, "E(2) metrics, submersions over R"};
    case Region::T13p: return {r, F::P1, F::P3, "SL(2,R) metrics, submersions over the hyperbolic plane"};
    case Region::T14: return {r, F::P1, F::P4, "Berger spheres, fibers larger than round"};
    case Region::T23: return {r, F::P2, F::P3, "SL(2,R) metrics on the separatrix"};
    case Region::T34: return {r, F::P3, F::P4, "Berger spheres, fibers smaller than round"};
    case Region::B14: return {r, F::P1, F::P4, "SU(2) metrics"};
    case Region::B13: return {r, F::P1, F::P3, "SL(2,R) metrics above the separatrix"};
    case Region::B13p: return {r, F::P1, F::P3, "SL(2,R) metrics below the separatrix"};
    }
    return {};
}

namespace {

constexpr std::array<FixedPointTag, 4> kTags = {FixedPointTag::P1, FixedPointTag::P2, FixedPointTag::P3,
                                                FixedPointTag::P4};

double segment_distance(Point2 p, Point2 a, Point2 b)
{
    const double dx = b.m2 - a.m2;
    const double dy = b.m3 - a.m3;
    const double len2 = dx * dx + dy * dy;
    double s = len2 > 0.0 ? ((p.m2 - a.m2) * dx + (p.m3 - a.m3) * dy) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(p, {a.m2 + s * dx, a.m3 + s * dy});
}

double polyline_distance(Point2 p, const std::vector<Point2>& line)
{
    double d = INFINITY;
    for (std::size_t i = 1; i < line.size(); ++i) {
        d = std::min(d, segment_distance(p, line[i - 1], line[i]));
    }
    return d;
}

struct CurveDistance {
    Region tag;
    double d;
};

std::array<CurveDistance, 6> curve_distances(Point2 p, const Separatrix& sep)
{
    const double below = p.m3 < 0.0 ? std::abs(p.m2 - 1.0) : std::hypot(p.m2 - 1.0, p.m3);
    return {{
        {Region::T12, segment_distance(p, {0.0, -1.0}, {0.0, 0.0})},
        {Region::T13, segment_distance(p, {0.0, 0.0}, {1.0, 0.0})},
        {Region::T13p, below},
        {Region::T14, segment_distance(p, {0.0, 0.0}, {1.0, 1.0})},
        {Region::T34, segment_distance(p, {1.0, 0.0}, {1.0, 1.0})},
        {Region::T23, polyline_distance(p, sep.dense())},
    }};
}

std::optional<FixedPointTag> empirical_limit(const Trajectory& tr)
{
    const auto& s = tr.samples;
    const Point2 last{s.back().y[0], s.back().y[1]};
    std::optional<FixedPointTag> best;
    double best_d = kLimitTol;
    for (FixedPointTag t : kTags) {
        const double d = compactified_distance(last, t);
        if (d < best_d) {
            best_d = d;
            best = t;
        }
    }
    if (!best || s.size() < 2) {
        return best;
    }
    const std::size_t k = s.size() - 1 - std::max<std::size_t>(1, (s.size() - 1) / 10);
    const double earlier = compactified_distance({s[k].y[0], s[k].y[1]}, *best);
    if (best_d > earlier) {
        return std::nullopt;
    }
    return best;
}

} // namespace

double compactified_distance(Point2 p, FixedPointTag target) noexcept
{
    const double chart = distance(p, location(target));
    if (target != FixedPointTag::P1) {
        return chart;
    }
    return std::min(chart, 1.0 / std::max(1.0, std::abs(p.m3)));
}

double boundary_distance(Point2 p, const Separatrix& sep)
{
    double d = INFINITY;
    for (FixedPointTag t : kTags) {
        d = std::min(d, distance(p, location(t)));
    }
    for (const CurveDistance& c : curve_distances(p, sep)) {
        d = std::min(d, c.d);
    }
    return d;
}

RegionLabel classify_region(const ModuliPoint& p, const Separatrix& sep, double tol)
{
    if (p.is_infinity()) {
        return region_label(Region::P1);
    }
    if (!is_canonical(p)) {
        throw Error(Errc::OutOfDomain, "classify_region expects a canonical point");
    }
    const Point2 q = p.point();
    static constexpr std::array<Region, 4> kPoints = {Region::P1, Region::P2, Region::P3, Region::P4};
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        if (distance(q, location(kTags[i])) < tol) {
            return region_label(kPoints[i]);
        }
    }
    std::optional<Region> hit;
    for (const CurveDistance& c : curve_distances(q, sep)) {
        if (c.d < tol) {
            if (hit) {
                throw Error(Errc::AmbiguousNearBoundary, std::string("point is within tolerance of ") +
                                                             std::string(to_string(*hit)) + " and " +
                                                             std::string(to_string(c.tag)));
            }
            hit = c.tag;
        }
    }
    if (hit) {
        return region_label(*hit);
    }
    if (q.m3 > 0.0) {
        return region_label(Region::B14);
    }
    return region_label(q.m3 > sep.value_at(q.m2) ? Region::B13 : Region::B13p);
}

IntegratorConfig default_limit_config()
{
    IntegratorConfig cfg;
    cfg.method = Method::RKF45Adaptive;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-10;
    cfg.t_end = 1e4;
    cfg.m_ceiling = kLimitCeiling;
    return cfg;
}

LimitVerdict verify_limits(const ModuliPoint& p, const Separatrix& sep, const IntegratorConfig& cfg)
{
    LimitVerdict v;
    v.predicted = classify_region(p, sep);
    const Point2 start = p.point();
    IntegratorConfig run = cfg;
    run.t_end = std::abs(cfg.t_end);
    const Trajectory fwd = integrate(Formulation::MFlowAutonomous, start, run);
    run.t_end = -std::abs(cfg.t_end);
    const Trajectory bwd = integrate(Formulation::MFlowAutonomous, start, run);
    v.forward_termination = fwd.termination;
    v.backward_termination = bwd.termination;
    v.observed_omega = empirical_limit(fwd);
    v.observed_alpha = empirical_limit(bwd);
    v.matches = v.observed_alpha == v.predicted.alpha_limit && v.observed_omega == v.predicted.omega_limit;
    return v;
}

} // namespace r3flow
