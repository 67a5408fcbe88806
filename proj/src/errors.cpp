#include "r3flow/errors.hpp"

namespace r3flow {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::AbelianInput: return "AbelianInput";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ChartUndefined: return "ChartUndefined";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::InfinityInput: return "InfinityInput";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::FlatPoint: return "FlatPoint";
    case Errc::OutOfSeedRange: return "OutOfSeedRange";
    case Errc::TraceDiverged: return "TraceDiverged";
    case Errc::AmbiguousNearBoundary: return "AmbiguousNearBoundary";
    case Errc::WrongClass: return "WrongClass";
    case Errc::DegenerateFlat: return "DegenerateFlat";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
{
}

} // namespace r3flow
