#pragma once

#include <array>
#include <cmath>
#include <random>

#include "r3flow/algebra.hpp"

namespace testsupport {

inline constexpr std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline r3flow::StructureConstants random_triple(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    return r3flow::StructureConstants(g(rng), g(rng), g(rng));
}

} // namespace testsupport
