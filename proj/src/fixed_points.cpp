#include "r3flow/dynamics.hpp"

#include <cmath>

namespace r3flow {

std::string_view to_string(Stability s) noexcept
{
    switch (s) {
    case Stability::Unstable: return "Unstable";
    case Stability::Stable: return "Stable";
    case Stability::Saddle: return "Saddle";
    case Stability::Degenerate: return "Degenerate";
    }
    return "?";
}

Mat2 linearization(Point2 p) noexcept
{
    const double m2 = p.m2;
    const double m3 = p.m3;
    return {{{2.0 * m2 * m3 - m3 - 3.0 * m2 * m2 + 1.0, m2 * (m2 - 1.0)},
             {m3 * (m3 - 1.0), 2.0 * m2 * m3 - m2 - 3.0 * m3 * m3 + 1.0}}};
}

namespace {

Vec2 unit_kernel(const Mat2& j, double ev)
{
    const double a = j[0][0] - ev;
    const double b = j[0][1];
    const double c = j[1][0];
    const double d = j[1][1] - ev;
    Vec2 v = std::hypot(a, b) >= std::hypot(c, d) ? Vec2{-b, a} : Vec2{d, -c};
    const double n = std::hypot(v[0], v[1]);
    v = {v[0] / n, v[1] / n};
    const double lead = v[0] != 0.0 ? v[0] : v[1];
    if (lead < 0.0) {
        v = {-v[0], -v[1]};
    }
    return {v[0] + 0.0, v[1] + 0.0};
}

FixedPointReport report(Point2 at, std::string note)
{
    FixedPointReport r;
    r.location = at;
    r.jacobian = linearization(at);
    const Mat2& j = r.jacobian;
    const double tr = j[0][0] + j[1][1];
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    r.eigenvalues = {tr / 2.0 + disc, tr / 2.0 - disc};
    const double hi = r.eigenvalues[0];
    const double lo = r.eigenvalues[1];
    if (hi == 0.0 || lo == 0.0) {
        r.stability = Stability::Degenerate;
    }
    else if (lo > 0.0) {
        r.stability = Stability::Unstable;
    }
    else if (hi < 0.0) {
        r.stability = Stability::Stable;
    }
    else {
        r.stability = Stability::Saddle;
    }
    if (disc > 0.0) {
        r.eigenvectors = std::array<Vec2, 2>{unit_kernel(j, hi), unit_kernel(j, lo)};
    }
    r.note = std::move(note);
    return r;
}

} // namespace

std::vector<FixedPointReport> fixed_points()
{
    return {
        report({0.0, 0.0}, "unstable node"),
        report({0.0, 1.0}, "degenerate; nearby points with m2 < 0 approach it"),
        report({0.0, -1.0}, "saddle; unstable direction (2,1)"),
        report({1.0, 0.0}, "degenerate; nearby points with m3 < 0 approach it"),
        report({-1.0, 0.0}, "saddle; unstable direction (1,2)"),
        report({1.0, 1.0}, "stable node"),
    };
}

} // namespace r3flow
