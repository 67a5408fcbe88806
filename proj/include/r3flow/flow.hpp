#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "r3flow/algebra.hpp"

namespace r3flow {

enum class Formulation {
    QFlow,           ///< metric coefficients q under fixed lambda
    AFlow,           ///< structure constants in an evolving orthonormal frame
    MFlowScaled,     ///< (m2, m3) at the true Ricci-flow speed, carrying a1
    MFlowAutonomous, ///< (m2, m3) with the positive speed factor dropped
};

enum class Method { RK4Fixed, RKF45Adaptive };

enum class Termination {
    ReachedTEnd,
    ExtinctionFloor,
    BlowUpCeiling,
    FixedPointConverged,
    MaxSteps,
};

std::string_view to_string(Formulation f) noexcept;
std::string_view to_string(Method m) noexcept;
std::string_view to_string(Termination t) noexcept;

struct IntegratorConfig {
    Method method = Method::RKF45Adaptive;
    /// Fixed step for RK4, initial step for RKF45. Always positive; the
    /// direction of integration comes from t_end.
    double step = 1e-3;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double t_end = 1.0;
    std::size_t max_steps = 1'000'000;
    /// QFlow stops once min q_i drops below this.
    double q_floor = 1e-9;
    /// AFlow and the chart flows stop once a coordinate exceeds this.
    double m_ceiling = 1e9;

    /// Throws Errc::InvalidConfig.
    void validate() const;
};

/// State of the scaled chart flow. a1 evolves by d(log a1)/dt = 2 K(e2^e3).
struct ScaledChartState {
    double m2{};
    double m3{};
    double a1{};
};

using InitialState = std::variant<MetricState, StructureConstants, ScaledChartState, Point2>;

/// One accepted state. Only the first dimension(formulation) entries of y are used.
struct Sample {
    double t{};
    std::array<double, 3> y{};
};

struct Trajectory {
    Formulation formulation{};
    std::vector<Sample> samples;
    Termination termination{};

    std::size_t dimension() const noexcept;
    const Sample& back() const { return samples.back(); }
};

std::size_t dimension(Formulation f) noexcept;

/// (dq1/dt, dq2/dt, dq3/dt) with d(log q1)/dt = -a1^2 + (a2 - a3)^2 and cyclically.
Vec3 q_flow_rhs(const Vec3& lambda, const Vec3& q) noexcept;
Vec3 q_flow_rhs(const MetricState& s);

/// da_i/dt = 2 K(e_j ^ e_k) a_i.
Vec3 a_flow_rhs(const Vec3& a) noexcept;
Vec3 a_flow_rhs(const StructureConstants& a);

/// Chart vector field s * (m2 (1-m2)(1+m2-m3), m3 (1-m3)(1-m2+m3)).
/// s = 1 when autonomous, otherwise s = 2 a1^2, which is the exact speed
/// of the ratios a2/a1, a3/a1 under Ricci flow.
Point2 m_flow_rhs(Point2 p, double a1_sq, bool autonomous) noexcept;

/// Speed factor of the scaled chart flow for a given a1^2.
inline constexpr double scaled_speed(double a1_sq) noexcept { return 2.0 * a1_sq; }

/// Integrate from the initial state (t0 = MetricState::t() or 0) to cfg.t_end.
/// t_end < t0 integrates backward. Throws Errc::InvalidState on a
/// formulation/state mismatch and Errc::StepUnderflow when the adaptive
/// step collapses.
Trajectory integrate(Formulation formulation, const InitialState& initial, const IntegratorConfig& cfg);

struct CrossCheckReport {
    double max_residual = 0.0;
    std::size_t samples_checked = 0;
    /// Samples where the fixed step does not resolve the flow
    /// (step * max |d log q_i/dt| > kCrossCheckResolution).
    std::size_t samples_unresolved = 0;
    Termination termination{};
    double t_final = 0.0;
};

inline constexpr double kCrossCheckResolution = 1e-2;

/// Integrates the q-flow with fixed-step RK4 (cfg.step, cfg.t_end), maps each
/// sample to (a2/a1, a3/a1) and compares a five-point centered difference of
/// the chart path with m_flow_rhs(., a1^2, scaled). Throws Errc::ChartUndefined
/// when lambda1 == 0.
CrossCheckReport cross_check_formulations(const MetricState& s0, const IntegratorConfig& cfg);

} // namespace r3flow
