#pragma once

#include <string_view>

#include "r3flow/algebra.hpp"

namespace r3flow {

/// Canonical representative in 0 <= m2 <= 1, m3 <= m2, with m3 in [-1, 0]
/// whenever m2 == 0. Never returns the point at infinity.
ModuliPoint canonicalize(const StructureConstants& a);

/// True when p lies in the closed chart domain 0 <= m2 <= 1, m3 <= m2.
bool in_chart_domain(Point2 p, double slack = 0.0) noexcept;
/// True when p is a canonical representative.
bool is_canonical(const ModuliPoint& p) noexcept;

struct NuTriple {
    double nu1{};
    double nu2{};
    double nu3{};
};

/// nu1 = m2 + m3 - 1, nu2 = 1 + m3 - m2, nu3 = 1 + m2 - m3.
NuTriple nu(const ModuliPoint& p);

enum class PartitionCell { S0, S1, S2, Spp, Smp, Smm };

std::string_view to_string(PartitionCell c) noexcept;

PartitionCell partition_cell(const ModuliPoint& p);

/// Complete invariants up to isometry and scaling away from the flat point.
struct IsometryInvariants {
    /// Ascending Ricci eigenvalues over |Rc|.
    Vec3 ricci_direction{};
    /// |D Rc|^2 / |Rc|^3.
    double drc_ratio{};
    bool is_flat = false;
};

/// Cellwise closed form in the nu variables. Throws Errc::FlatPoint at (1,0)
/// and Errc::OutOfDomain outside the chart domain.
IsometryInvariants invariant_map(const ModuliPoint& p);

/// The same invariants computed directly from the curvature of a.
IsometryInvariants isometry_invariants(const StructureConstants& a);

double invariant_distance(const IsometryInvariants& x, const IsometryInvariants& y) noexcept;

inline constexpr double kDefaultEquivalenceTol = 1e-9;

/// Chart distance between canonical points taking the seam identification
/// (0,m3) ~ (0,1/m3) into account for points within tol of m2 = 0.
double seam_distance(Point2 p, Point2 q, double tol = kDefaultEquivalenceTol) noexcept;

/// Equivalence up to isometry and scaling, decided on canonical points.
bool isometry_equivalent(const StructureConstants& a, const StructureConstants& b,
                         double tol = kDefaultEquivalenceTol);

inline constexpr double kSeparatingTol = 1e-9;

/// Compares the invariants of the canonical points of a and b. Throws
/// Errc::FlatPoint if either is flat.
bool separating_check(const StructureConstants& a, const StructureConstants& b);

} // namespace r3flow
