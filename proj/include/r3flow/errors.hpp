#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace r3flow {

enum class Errc {
    AbelianInput,
    NonFinite,
    InvalidState,
    InvalidConfig,
    ChartUndefined,
    StepUnderflow,
    InfinityInput,
    OutOfDomain,
    FlatPoint,
    OutOfSeedRange,
    TraceDiverged,
    AmbiguousNearBoundary,
    WrongClass,
    DegenerateFlat,
};

std::string_view to_string(Errc code) noexcept;

/// Typed failure raised by every operation of the library.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace r3flow
