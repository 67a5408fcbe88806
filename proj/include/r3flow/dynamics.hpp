#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "r3flow/flow.hpp"
#include "r3flow/moduli.hpp"

namespace r3flow {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Fixed points of the autonomous chart flow

enum class Stability { Unstable, Stable, Saddle, Degenerate };

std::string_view to_string(Stability s) noexcept;

struct FixedPointReport {
    Point2 location;
    Mat2 jacobian{};
    /// Descending order.
    Vec2 eigenvalues{};
    Stability stability{};
    /// Unit eigenvectors for eigenvalues[0], eigenvalues[1] when the spectrum
    /// is real and simple. Sign fixed so the first nonzero entry is positive.
    std::optional<std::array<Vec2, 2>> eigenvectors;
    std::string note;
};

/// Jacobian of the autonomous chart vector field.
Mat2 linearization(Point2 p) noexcept;

/// (0,0), (0,1), (0,-1), (1,0), (-1,0), (1,1).
std::vector<FixedPointReport> fixed_points();

// ---------------------------------------------------------------------------
// Separatrix T23: unstable manifold of (0,-1) inside 0 < m2 < 1

inline constexpr std::array<double, 8> kSeparatrixTaylor = {
    -1.0, 0.5, 0.0, 3.0 / 64.0, 3.0 / 128.0, 9.0 / 512.0, 57.0 / 4096.0, 1461.0 / 131072.0,
};
inline constexpr double kSeparatrixSeedMax = 0.2;
inline constexpr double kSeparatrixSeedPoint = 0.05;

/// Degree-7 Taylor polynomial of m3 = f(m2) at (0,-1). Throws
/// Errc::OutOfSeedRange outside [0, 0.2].
double separatrix_taylor_seed(double m2);

class Separatrix {
public:
    Separatrix(std::vector<Point2> samples, std::vector<Point2> dense, double trace_tol,
               double backward_gap, double forward_gap);

    /// Resampled polyline, ordered from (0,-1) to (1,0).
    const std::vector<Point2>& samples() const noexcept { return samples_; }
    /// Every accepted integration point, same ordering.
    const std::vector<Point2>& dense() const noexcept { return dense_; }
    const std::array<double, 8>& taylor_coeffs() const noexcept { return kSeparatrixTaylor; }
    double trace_tol() const noexcept { return trace_tol_; }
    /// Distance of the first sample to (0,-1) and of the last to (1,0).
    double backward_gap() const noexcept { return backward_gap_; }
    double forward_gap() const noexcept { return forward_gap_; }

    /// f(m2) for 0 < m2 < 1 by cubic Hermite interpolation of the dense
    /// points with slopes taken from the vector field.
    double value_at(double m2) const;

private:
    std::vector<Point2> samples_;
    std::vector<Point2> dense_;
    /// Strictly increasing-in-m2 subset of dense_ with dm3/dm2 slopes.
    std::vector<Point2> nodes_;
    std::vector<double> slopes_;
    double trace_tol_;
    double backward_gap_;
    double forward_gap_;
};

/// Seeds at m2 = 0.05 on the Taylor polynomial and integrates the autonomous
/// flow forward to (1,0) and backward to (0,-1) with tolerance tol. Throws
/// Errc::TraceDiverged if the path leaves the strip or loses monotonicity.
Separatrix trace_separatrix(std::size_t n_samples = 256, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Phase-space decomposition

enum class FixedPointTag { P1, P2, P3, P4 };

enum class Region { P1, P2, P3, P4, T12, T13, T13p, T14, T23, T34, B14, B13, B13p };

std::string_view to_string(FixedPointTag t) noexcept;
std::string_view to_string(Region r) noexcept;

Point2 location(FixedPointTag t) noexcept;

struct RegionLabel {
    Region tag{};
    FixedPointTag alpha_limit{};
    FixedPointTag omega_limit{};
    std::string geometry_note;
};

/// Label with limits and geometry note for a given piece.
RegionLabel region_label(Region r);

inline constexpr double kDefaultBandTol = 1e-4;

/// Assigns the piece of the decomposition containing the canonical point p.
/// Throws Errc::AmbiguousNearBoundary if p is within tol of two pieces and
/// Errc::OutOfDomain if p is not canonical.
RegionLabel classify_region(const ModuliPoint& p, const Separatrix& sep, double tol = kDefaultBandTol);

/// Smallest chart distance from p to a lower-dimensional piece (fixed point,
/// boundary trajectory or separatrix).
double boundary_distance(Point2 p, const Separatrix& sep);

/// Distance in the compactified chart, with infinity identified with p1
/// and measured as 1 / max(1, |m3|).
double compactified_distance(Point2 p, FixedPointTag target) noexcept;

inline constexpr double kLimitTol = 1e-3;
/// Chart ceiling for limit detection. Backward escape to infinity is cubic, so
/// larger ceilings fall below the time resolution of double precision.
inline constexpr double kLimitCeiling = 1e6;

struct LimitVerdict {
    RegionLabel predicted;
    std::optional<FixedPointTag> observed_alpha;
    std::optional<FixedPointTag> observed_omega;
    Termination forward_termination{};
    Termination backward_termination{};
    bool matches = false;
};

/// Integrates the autonomous chart flow to +cfg.t_end and -cfg.t_end and
/// compares the empirical limits with classify_region.
LimitVerdict verify_limits(const ModuliPoint& p, const Separatrix& sep, const IntegratorConfig& cfg);

/// Integration settings used by verify_limits unless the caller overrides them.
IntegratorConfig default_limit_config();

// ---------------------------------------------------------------------------
// Long-time asymptotics of the metric coefficients

enum class AsymptoticModel { LinearGrowth, ConstantLimit, ExponentialDecay };

std::string_view to_string(AsymptoticModel m) noexcept;

struct AsymptoticFit {
    /// Which series was fitted, e.g. "q1" or "lambda1*q1-lambda2*q2".
    std::string quantity;
    AsymptoticModel model{};
    std::map<std::string, double> constants;
    double residual = 0.0;
};

/// Fraction of the usable time window discarded as transient.
inline constexpr double kTransientFraction = 0.2;

/// Integrates the q-flow to cfg.t_end and fits the long-time model:
/// SL2R - linear growth of the two coefficients whose lambda share a sign and
/// a constant limit for the third; E2 - constant limits and exponential decay
/// of lambda_i q_i - lambda_j q_j. Throws Errc::WrongClass otherwise.
std::vector<AsymptoticFit> fit_asymptotics(const MetricState& s0, const IntegratorConfig& cfg);

struct DrcGrowthReport {
    /// Fitted exponential rate of |D Rc|^2 for the rescaled metric.
    double growth_rate = 0.0;
    /// Decay rate E3 of lambda_i q_i - lambda_j q_j used for the rescaling.
    double decay_rate = 0.0;
    double residual = 0.0;
    std::size_t samples = 0;
};

/// For E2 data: |D Rc|^2 of exp(-E3 t) q along the flow and its fitted
/// exponential growth rate. Throws Errc::WrongClass or Errc::DegenerateFlat.
DrcGrowthReport rescaled_drc_growth(const MetricState& s0, const IntegratorConfig& cfg);

} // namespace r3flow
