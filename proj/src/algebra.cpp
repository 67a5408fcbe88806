#include "r3flow/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace r3flow {

namespace {

void require_finite(const Vec3& v, const char* what)
{
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw Error(Errc::NonFinite, std::string(what) + " has a non-finite entry");
        }
    }
}

} // namespace

StructureConstants::StructureConstants(double a1, double a2, double a3) : StructureConstants(Vec3{a1, a2, a3}) {}

StructureConstants::StructureConstants(const Vec3& a) : a_(a)
{
    require_finite(a_, "structure constants");
    if (a_[0] == 0.0 && a_[1] == 0.0 && a_[2] == 0.0) {
        throw Error(Errc::AbelianInput, "structure constants (0,0,0) describe the abelian algebra");
    }
}

StructureConstants StructureConstants::scaled(double c) const
{
    return StructureConstants(c * a_[0], c * a_[1], c * a_[2]);
}

StructureConstants StructureConstants::permuted(const std::array<int, 3>& perm) const
{
    return StructureConstants(a_[perm[0]], a_[perm[1]], a_[perm[2]]);
}

MetricState::MetricState(const Vec3& lambda, const Vec3& q, double t) : lambda_(lambda), q_(q), t_(t)
{
    require_finite(lambda_, "lambda");
    require_finite(q_, "q");
    if (!std::isfinite(t_)) {
        throw Error(Errc::NonFinite, "time is not finite");
    }
    if (lambda_[0] == 0.0 && lambda_[1] == 0.0 && lambda_[2] == 0.0) {
        throw Error(Errc::AbelianInput, "lambda (0,0,0) describes the abelian algebra");
    }
    for (double qi : q_) {
        if (!(qi > 0.0)) {
            throw Error(Errc::InvalidState, "metric coefficients must be positive");
        }
    }
    require_finite(structure_constants_from_metric(lambda_, q_), "derived structure constants");
}

std::string_view to_string(BianchiClass c) noexcept
{
    switch (c) {
    case BianchiClass::SU2: return "SU2";
    case BianchiClass::SL2R: return "SL2R";
    case BianchiClass::E2: return "E2";
    case BianchiClass::E11: return "E11";
    case BianchiClass::H3: return "H3";
    }
    return "?";
}

std::string_view lie_algebra_name(BianchiClass c) noexcept
{
    switch (c) {
    case BianchiClass::SU2: return "su(2)";
    case BianchiClass::SL2R: return "sl(2,R)";
    case BianchiClass::E2: return "e(2)";
    case BianchiClass::E11: return "e(1,1)";
    case BianchiClass::H3: return "heisenberg";
    }
    return "?";
}

std::string_view lie_group_name(BianchiClass c) noexcept
{
    switch (c) {
    case BianchiClass::SU2: return "SU(2)";
    case BianchiClass::SL2R: return "SL(2,R)";
    case BianchiClass::E2: return "E(2)";
    case BianchiClass::E11: return "E(1,1)";
    case BianchiClass::H3: return "Heisenberg group";
    }
    return "?";
}

BianchiClass classify(const StructureConstants& a, double zero_tol)
{
    const Vec3& v = a.values();
    const double scale = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
    int pos = 0;
    int neg = 0;
    for (double x : v) {
        if (std::abs(x) < zero_tol * scale) {
            continue;
        }
        (x > 0.0 ? pos : neg) += 1;
    }
    // A global sign flip swaps pos and neg.
    const int hi = std::max(pos, neg);
    const int lo = std::min(pos, neg);
    if (hi == 3) {
        return BianchiClass::SU2;
    }
    if (hi == 2 && lo == 1) {
        return BianchiClass::SL2R;
    }
    if (hi == 2) {
        return BianchiClass::E2;
    }
    if (hi == 1 && lo == 1) {
        return BianchiClass::E11;
    }
    return BianchiClass::H3;
}

Vec3 structure_constants_from_metric(const Vec3& lambda, const Vec3& q) noexcept
{
    Vec3 a{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        a[i] = std::sqrt(q[i] / (q[j] * q[k])) * lambda[i];
    }
    return a;
}

StructureConstants structure_constants_from_metric(const MetricState& s)
{
    return StructureConstants(structure_constants_from_metric(s.lambda(), s.q()));
}

ModuliPoint moduli_coordinates(const StructureConstants& a)
{
    if (a[0] == 0.0) {
        throw Error(Errc::ChartUndefined, "a1 = 0; permute the frame first");
    }
    return ModuliPoint::coords(a[1] / a[0], a[2] / a[0]);
}

} // namespace r3flow
