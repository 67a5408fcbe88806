#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "r3flow/flow.hpp"

namespace r3flow::detail {

using State = std::array<double, 3>;

/// Autonomous first-order system in the first dim entries of State.
struct OdeSystem {
    std::size_t dim = 3;
    std::function<State(const State&)> rhs;
    /// False for states the right-hand side cannot be evaluated at.
    std::function<bool(const State&)> admissible;
    /// Termination triggered by an admissible state, if any.
    std::function<std::optional<Termination>(const State&)> guard;
    /// Reported when a fixed step lands on an inadmissible state.
    Termination breakdown = Termination::BlowUpCeiling;
    /// Stop with FixedPointConverged once the field stays negligible.
    bool detect_rest = true;
};

/// Called after every accepted sample; a returned value stops the run.
using Observer = std::function<std::optional<Termination>(const Sample&)>;

struct OdeResult {
    std::vector<Sample> samples;
    Termination termination = Termination::ReachedTEnd;
};

inline constexpr double kMinStep = 1e-14;
inline constexpr int kConvergedStreak = 10;
inline constexpr double kConvergedTol = 1e-12;

/// Integrates from (t0, y0) to cfg.t_end with cfg.method. Throws
/// Errc::StepUnderflow if the adaptive step collapses.
OdeResult solve(const OdeSystem& sys, const State& y0, double t0, const IntegratorConfig& cfg,
                const Observer& observer = {});

} // namespace r3flow::detail
