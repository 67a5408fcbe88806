#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "r3flow/errors.hpp"

namespace r3flow {

using Vec3 = std::array<double, 3>;

/// A point of the (m2, m3) chart.
struct Point2 {
    double m2{};
    double m3{};

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 p, Point2 q) noexcept
{
    return std::hypot(p.m2 - q.m2, p.m3 - q.m3);
}

/// Point of the compactified chart: finite coordinates or the point at infinity.
class ModuliPoint {
public:
    static ModuliPoint coords(double m2, double m3) { return ModuliPoint(Point2{m2, m3}); }
    static ModuliPoint coords(Point2 p) { return ModuliPoint(p); }
    static ModuliPoint infinity() { return ModuliPoint(); }

    bool is_infinity() const noexcept { return !coords_.has_value(); }

    /// Throws Errc::InfinityInput for the point at infinity.
    Point2 point() const
    {
        if (!coords_) {
            throw Error(Errc::InfinityInput, "point at infinity has no chart coordinates");
        }
        return *coords_;
    }

    friend bool operator==(const ModuliPoint&, const ModuliPoint&) = default;

private:
    ModuliPoint() = default;
    explicit ModuliPoint(Point2 p) : coords_(p) {}

    std::optional<Point2> coords_;
};

} // namespace r3flow
