#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "r3flow/types.hpp"

namespace r3flow {

/// Bracket coefficients (a1, a2, a3) in a Milnor frame:
/// [e2,e3] = a1 e1, [e3,e1] = a2 e2, [e1,e2] = a3 e3.
/// The abelian triple (0,0,0) is rejected.
class StructureConstants {
public:
    StructureConstants(double a1, double a2, double a3);
    explicit StructureConstants(const Vec3& a);

    double operator[](std::size_t i) const noexcept { return a_[i]; }
    const Vec3& values() const noexcept { return a_; }

    StructureConstants scaled(double c) const;
    /// Component i of the result is component perm[i] of this.
    StructureConstants permuted(const std::array<int, 3>& perm) const;

    friend bool operator==(const StructureConstants&, const StructureConstants&) = default;

private:
    Vec3 a_;
};

/// Fixed bracket coefficients lambda with evolving diagonal metric
/// coefficients q (metric fixed-frame formulation).
class MetricState {
public:
    MetricState(const Vec3& lambda, const Vec3& q, double t = 0.0);

    const Vec3& lambda() const noexcept { return lambda_; }
    const Vec3& q() const noexcept { return q_; }
    double t() const noexcept { return t_; }

private:
    Vec3 lambda_;
    Vec3 q_;
    double t_;
};

enum class BianchiClass { SU2, SL2R, E2, E11, H3 };

std::string_view to_string(BianchiClass c) noexcept;
std::string_view lie_algebra_name(BianchiClass c) noexcept;
std::string_view lie_group_name(BianchiClass c) noexcept;

inline constexpr double kDefaultZeroTolerance = 1e-12;

/// Isomorphism class from the sign pattern of (a1,a2,a3). Entries with
/// |a_i| < zero_tol * max|a_j| count as zero.
BianchiClass classify(const StructureConstants& a, double zero_tol = kDefaultZeroTolerance);

/// a_i = sqrt(q_i / (q_j q_k)) * lambda_i.
Vec3 structure_constants_from_metric(const Vec3& lambda, const Vec3& q) noexcept;
StructureConstants structure_constants_from_metric(const MetricState& s);

/// Raw chart (a2/a1, a3/a1). Throws Errc::ChartUndefined when a1 == 0; frame
/// relabeling is left to moduli::canonicalize.
ModuliPoint moduli_coordinates(const StructureConstants& a);

} // namespace r3flow
