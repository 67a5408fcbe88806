#include "r3flow/curvature.hpp"

#include <algorithm>

namespace r3flow {

Vec3 mu(const Vec3& a) noexcept
{
    const double h = 0.5 * (a[0] + a[1] + a[2]);
    return {h - a[0], h - a[1], h - a[2]};
}

Vec3 mu(const StructureConstants& a) { return mu(a.values()); }

Vec3 sectional_curvatures(const Vec3& a) noexcept
{
    const Vec3 m = mu(a);
    const double p23 = m[1] * m[2];
    const double p13 = m[0] * m[2];
    const double p12 = m[0] * m[1];
    return {-p23 + p13 + p12, p23 - p13 + p12, p23 + p13 - p12};
}

CurvatureProfile curvature_profile(const Vec3& a) noexcept
{
    CurvatureProfile c;
    c.mu = mu(a);
    const auto& m = c.mu;
    c.ricci = {2.0 * m[1] * m[2], 2.0 * m[0] * m[2], 2.0 * m[0] * m[1]};
    c.sectional = sectional_curvatures(a);
    c.scalar = 2.0 * (m[1] * m[2] + m[0] * m[2] + m[0] * m[1]);
    c.ricci_norm_sq = c.ricci[0] * c.ricci[0] + c.ricci[1] * c.ricci[1] + c.ricci[2] * c.ricci[2];
    auto sq = [](double x) { return x * x; };
    c.d_ricci_norm_sq = 8.0 * (sq(m[0] - m[2]) * sq(sq(m[1])) + sq(m[0] - m[1]) * sq(sq(m[2])) +
                               sq(m[1] - m[2]) * sq(sq(m[0])));
    return c;
}

CurvatureProfile curvature_profile(const StructureConstants& a) { return curvature_profile(a.values()); }

Vec3 ricci_spectrum_sorted(const StructureConstants& a)
{
    Vec3 r = curvature_profile(a).ricci;
    std::sort(r.begin(), r.end());
    return r;
}

} // namespace r3flow
