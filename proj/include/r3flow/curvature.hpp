#pragma once

#include "r3flow/algebra.hpp"

namespace r3flow {

/// Curvature of a unimodular metric Lie algebra, all in Milnor-frame order.
struct CurvatureProfile {
    Vec3 mu{};
    /// Ricci eigenvalues (2 mu2 mu3, 2 mu1 mu3, 2 mu1 mu2).
    Vec3 ricci{};
    /// K(e2^e3), K(e3^e1), K(e1^e2).
    Vec3 sectional{};
    double scalar{};
    double ricci_norm_sq{};
    double d_ricci_norm_sq{};
};

/// mu_i = (a1 + a2 + a3)/2 - a_i.
Vec3 mu(const Vec3& a) noexcept;
Vec3 mu(const StructureConstants& a);

Vec3 sectional_curvatures(const Vec3& a) noexcept;

CurvatureProfile curvature_profile(const Vec3& a) noexcept;
CurvatureProfile curvature_profile(const StructureConstants& a);

/// Ricci eigenvalues in ascending order.
Vec3 ricci_spectrum_sorted(const StructureConstants& a);

} // namespace r3flow
