#include "r3flow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "integrator.hpp"

namespace r3flow {

namespace {

constexpr Point2 kSaddle{0.0, -1.0};
constexpr Point2 kFlat{1.0, 0.0};
constexpr double kLegSpan = 1e13;
// Overshoot of the invariant lines m2 = 1 and m3 = 0 tolerated, in units of tol.
constexpr double kStripSlack = 100.0;

double slope_at(Point2 p)
{
    const Point2 f = m_flow_rhs(p, 0.0, true);
    return f.m3 / f.m2;
}

std::vector<Point2> trace_leg(Point2 seed, double tol, bool forward)
{
    detail::OdeSystem sys;
    sys.dim = 2;
    sys.rhs = [](const detail::State& y) {
        const Point2 d = m_flow_rhs({y[0], y[1]}, 0.0, true);
        return detail::State{d.m2, d.m3, 0.0};
    };
    sys.detect_rest = false;

    IntegratorConfig cfg;
    cfg.method = Method::RKF45Adaptive;
    cfg.abs_tol = tol;
    cfg.rel_tol = tol;
    cfg.t_end = forward ? kLegSpan : -kLegSpan;
    cfg.max_steps = 2'000'000;

    const Point2 target = forward ? kFlat : kSaddle;
    double best = distance(seed, target);
    bool receding = false;
    auto observer = [&](const Sample& s) -> std::optional<Termination> {
        const Point2 p{s.y[0], s.y[1]};
        if (p.m2 < 0.0 || p.m2 > 1.0 + kStripSlack * tol || p.m3 > kStripSlack * tol) {
            throw Error(Errc::TraceDiverged, "separatrix left the strip 0 <= m2 <= 1, m3 <= 0");
        }
        const double d = distance(p, target);
        if (d < tol) {
            return Termination::FixedPointConverged;
        }
        if (!forward && d > best) {
            receding = true;
            return Termination::FixedPointConverged;
        }
        best = std::min(best, d);
        return std::nullopt;
    };
    detail::OdeResult r = detail::solve(sys, {seed.m2, seed.m3, 0.0}, 0.0, cfg, observer);
    if (receding) {
        r.samples.pop_back();
    }
    std::vector<Point2> out;
    out.reserve(r.samples.size());
    for (const Sample& s : r.samples) {
        out.push_back({s.y[0], s.y[1]});
    }
    return out;
}

std::vector<Point2> resample(const std::vector<Point2>& dense, std::size_t n)
{
    std::vector<double> arc(dense.size(), 0.0);
    for (std::size_t i = 1; i < dense.size(); ++i) {
        arc[i] = arc[i - 1] + distance(dense[i - 1], dense[i]);
    }
    std::vector<Point2> out;
    out.reserve(n);
    std::size_t seg = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = arc.back() * static_cast<double>(k) / static_cast<double>(n - 1);
        while (seg + 1 < dense.size() && arc[seg] < s) {
            ++seg;
        }
        const double len = arc[seg] - arc[seg - 1];
        const double w = len > 0.0 ? std::clamp((s - arc[seg - 1]) / len, 0.0, 1.0) : 1.0;
        out.push_back({dense[seg - 1].m2 + w * (dense[seg].m2 - dense[seg - 1].m2),
                       dense[seg - 1].m3 + w * (dense[seg].m3 - dense[seg - 1].m3)});
    }
    out.front() = dense.front();
    out.back() = dense.back();
    return out;
}

} // namespace

double separatrix_taylor_seed(double m2)
{
    if (!(m2 >= 0.0 && m2 <= kSeparatrixSeedMax)) {
        throw Error(Errc::OutOfSeedRange, "Taylor seed is used only on [0, 0.2]");
    }
    double acc = 0.0;
    for (auto it = kSeparatrixTaylor.rbegin(); it != kSeparatrixTaylor.rend(); ++it) {
        acc = acc * m2 + *it;
    }
    return acc;
}

Separatrix::Separatrix(std::vector<Point2> samples, std::vector<Point2> dense, double trace_tol,
                       double backward_gap, double forward_gap)
    : samples_(std::move(samples)),
      dense_(std::move(dense)),
      trace_tol_(trace_tol),
      backward_gap_(backward_gap),
      forward_gap_(forward_gap)
{
    for (const Point2& p : dense_) {
        if (p.m2 <= 0.0 || p.m2 >= 1.0) {
            continue;
        }
        if (!nodes_.empty() && p.m2 <= nodes_.back().m2) {
            continue;
        }
        nodes_.push_back(p);
        slopes_.push_back(slope_at(p));
    }
}

double Separatrix::value_at(double m2) const
{
    if (!(m2 >= 0.0 && m2 <= 1.0)) {
        throw Error(Errc::OutOfDomain, "separatrix is defined for 0 <= m2 <= 1");
    }
    if (m2 == 1.0) {
        return 0.0;
    }
    if (nodes_.empty() || m2 <= nodes_.front().m2) {
        return separatrix_taylor_seed(std::min(m2, kSeparatrixSeedMax));
    }
    if (m2 >= nodes_.back().m2) {
        return nodes_.back().m3;
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), m2,
                                     [](double x, const Point2& p) { return x < p.m2; });
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    const Point2& p0 = nodes_[i - 1];
    const Point2& p1 = nodes_[i];
    const double h = p1.m2 - p0.m2;
    const double s = (m2 - p0.m2) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0.m3 + (s3 - 2 * s2 + s) * h * slopes_[i - 1] + (-2 * s3 + 3 * s2) * p1.m3 +
           (s3 - s2) * h * slopes_[i];
}

Separatrix trace_separatrix(std::size_t n_samples, double tol)
{
    if (n_samples < 16) {
        throw Error(Errc::InvalidConfig, "at least 16 separatrix samples are required");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw Error(Errc::InvalidConfig, "trace tolerance must be positive");
    }
    const Point2 seed{kSeparatrixSeedPoint, separatrix_taylor_seed(kSeparatrixSeedPoint)};
    std::vector<Point2> back = trace_leg(seed, tol, false);
    const std::vector<Point2> fwd = trace_leg(seed, tol, true);

    std::reverse(back.begin(), back.end());
    std::vector<Point2> dense = std::move(back);
    dense.insert(dense.end(), fwd.begin() + 1, fwd.end());

    for (std::size_t i = 1; i < dense.size(); ++i) {
        if (dense[i].m3 <= dense[i - 1].m3 || dense[i].m2 < dense[i - 1].m2 - kStripSlack * tol) {
            throw Error(Errc::TraceDiverged, "separatrix lost monotonicity");
        }
    }
    const double gap_back = distance(dense.front(), kSaddle);
    const double gap_fwd = distance(dense.back(), kFlat);
    // Near (1,0) the curve hugs m2 = 1 and m2 rounds to 1.0; resample the part
    // that is still resolved and keep the traced endpoint.
    std::vector<Point2> resolved;
    for (const Point2& p : dense) {
        if (p.m2 < 1.0 && (resolved.empty() || p.m2 > resolved.back().m2)) {
            resolved.push_back(p);
        }
    }
    std::vector<Point2> samples = resample(resolved, n_samples - 1);
    samples.push_back(dense.back());
    return Separatrix(std::move(samples), std::move(dense), tol, gap_back, gap_fwd);
}

} // namespace r3flow
