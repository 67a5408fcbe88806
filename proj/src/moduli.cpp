#include "r3flow/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "r3flow/curvature.hpp"

namespace r3flow {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr Point2 kFlat{1.0, 0.0};

double clean(double x) { return x + 0.0; }

} // namespace

ModuliPoint canonicalize(const StructureConstants& a)
{
    const Vec3& v = a.values();
    const double hi = std::max({v[0], v[1], v[2]});
    const double lo = std::min({v[0], v[1], v[2]});
    const double first = std::abs(lo) > hi ? -1.0 : 1.0;
    for (double sign : {first, -first}) {
        Vec3 w{sign * v[0], sign * v[1], sign * v[2]};
        std::stable_sort(w.begin(), w.end(), std::greater<>());
        if (w[0] > 0.0 && w[1] >= 0.0) {
            const double m2 = clean(w[1] / w[0]);
            double m3 = clean(w[2] / w[0]);
            if (m2 == 0.0 && m3 < -1.0) {
                m3 = 1.0 / m3;
            }
            return ModuliPoint::coords(m2, m3);
        }
    }
    throw Error(Errc::AbelianInput, "no sign and permutation reaches the chart domain");
}

bool in_chart_domain(Point2 p, double slack) noexcept
{
    return p.m2 >= -slack && p.m2 <= 1.0 + slack && p.m3 <= p.m2 + slack;
}

bool is_canonical(const ModuliPoint& p) noexcept
{
    if (p.is_infinity()) {
        return false;
    }
    const Point2 q = p.point();
    if (!in_chart_domain(q)) {
        return false;
    }
    return q.m2 != 0.0 || (q.m3 >= -1.0 && q.m3 <= 0.0);
}

NuTriple nu(const ModuliPoint& p)
{
    const Point2 q = p.point();
    return {q.m2 + q.m3 - 1.0, 1.0 + q.m3 - q.m2, 1.0 + q.m2 - q.m3};
}

std::string_view to_string(PartitionCell c) noexcept
{
    switch (c) {
    case PartitionCell::S0: return "S0";
    case PartitionCell::S1: return "S1";
    case PartitionCell::S2: return "S2";
    case PartitionCell::Spp: return "S++";
    case PartitionCell::Smp: return "S-+";
    case PartitionCell::Smm: return "S--";
    }
    return "?";
}

PartitionCell partition_cell(const ModuliPoint& p)
{
    const NuTriple n = nu(p);
    if (n.nu1 == 0.0 && n.nu2 == 0.0) {
        return PartitionCell::S0;
    }
    if (n.nu1 == 0.0) {
        return PartitionCell::S1;
    }
    if (n.nu2 == 0.0) {
        return PartitionCell::S2;
    }
    if (n.nu1 > 0.0) {
        return PartitionCell::Spp;
    }
    if (n.nu2 > 0.0) {
        return PartitionCell::Smp;
    }
    return PartitionCell::Smm;
}

IsometryInvariants invariant_map(const ModuliPoint& p)
{
    const Point2 q = p.point();
    if (!in_chart_domain(q, kDomainSlack)) {
        throw Error(Errc::OutOfDomain, "point lies outside 0 <= m2 <= 1, m3 <= m2");
    }
    const NuTriple n = nu(p);
    const double n1 = n.nu1;
    const double n2 = n.nu2;
    const double n3 = n.nu3;
    IsometryInvariants out;
    switch (partition_cell(p)) {
    case PartitionCell::S0:
        throw Error(Errc::FlatPoint, "(1,0) is the flat metric");
    case PartitionCell::S1:
        out.ricci_direction = {0.0, 0.0, 1.0};
        out.drc_ratio = (n2 * n2 + n3 * n3) / (n2 * n3);
        return out;
    case PartitionCell::S2:
        out.ricci_direction = {-1.0, 0.0, 0.0};
        out.drc_ratio = (n1 * n1 + n3 * n3) / std::abs(n1 * n3);
        return out;
    case PartitionCell::Spp:
        out.ricci_direction = {n1 * n2, n1 * n3, n2 * n3};
        break;
    case PartitionCell::Smp:
        out.ricci_direction = {n1 * n3, n1 * n2, n2 * n3};
        break;
    case PartitionCell::Smm:
        out.ricci_direction = {n1 * n3, n2 * n3, n1 * n2};
        break;
    }
    const double nn = std::sqrt(n1 * n1 * n2 * n2 + n1 * n1 * n3 * n3 + n2 * n2 * n3 * n3);
    for (double& x : out.ricci_direction) {
        x /= nn;
    }
    auto sq = [](double x) { return x * x; };
    const double star =
        sq(n1 - n3) * sq(sq(n2)) + sq(n1 - n2) * sq(sq(n3)) + sq(n2 - n3) * sq(sq(n1));
    out.drc_ratio = star / (nn * nn * nn);
    return out;
}

IsometryInvariants isometry_invariants(const StructureConstants& a)
{
    const CurvatureProfile c = curvature_profile(a);
    const Vec3& v = a.values();
    const double scale = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
    const double rc = std::sqrt(c.ricci_norm_sq);
    IsometryInvariants out;
    if (rc <= 1e-12 * scale * scale) {
        out.is_flat = true;
        return out;
    }
    Vec3 r = c.ricci;
    std::sort(r.begin(), r.end());
    out.ricci_direction = {r[0] / rc, r[1] / rc, r[2] / rc};
    out.drc_ratio = c.d_ricci_norm_sq / (rc * rc * rc);
    return out;
}

double invariant_distance(const IsometryInvariants& x, const IsometryInvariants& y) noexcept
{
    if (x.is_flat || y.is_flat) {
        return x.is_flat == y.is_flat ? 0.0 : INFINITY;
    }
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        d = std::max(d, std::abs(x.ricci_direction[i] - y.ricci_direction[i]));
    }
    const double scale = std::max({1.0, std::abs(x.drc_ratio), std::abs(y.drc_ratio)});
    return std::max(d, std::abs(x.drc_ratio - y.drc_ratio) / scale);
}

double seam_distance(Point2 p, Point2 q, double tol) noexcept
{
    auto twins = [tol](Point2 x) {
        std::vector<Point2> out{x};
        if (x.m2 <= tol && x.m3 < 0.0) {
            out.push_back({x.m2, 1.0 / x.m3});
        }
        return out;
    };
    double d = INFINITY;
    for (Point2 a : twins(p)) {
        for (Point2 b : twins(q)) {
            d = std::min(d, distance(a, b));
        }
    }
    return d;
}

bool isometry_equivalent(const StructureConstants& a, const StructureConstants& b, double tol)
{
    const Point2 pa = canonicalize(a).point();
    const Point2 pb = canonicalize(b).point();
    const bool flat_a = distance(pa, kFlat) <= kDefaultEquivalenceTol;
    const bool flat_b = distance(pb, kFlat) <= kDefaultEquivalenceTol;
    if (flat_a || flat_b) {
        return flat_a && flat_b;
    }
    return seam_distance(pa, pb, tol) <= tol;
}

bool separating_check(const StructureConstants& a, const StructureConstants& b)
{
    const IsometryInvariants ia = invariant_map(canonicalize(a));
    const IsometryInvariants ib = invariant_map(canonicalize(b));
    return invariant_distance(ia, ib) <= kSeparatingTol;
}

} // namespace r3flow
