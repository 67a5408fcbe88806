#include <doctest.h>

#include <random>

#include "r3flow/dynamics.hpp"

using namespace r3flow;

namespace {

const Separatrix& shared()
{
    static const Separatrix s = trace_separatrix();
    return s;
}

RegionLabel label(double m2, double m3) { return classify_region(ModuliPoint::coords(m2, m3), shared()); }

// Piecewise-linear reading of the resampled separatrix.
double sep_linear(double m2)
{
    const auto& s = shared().samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].m2 >= m2) {
            const double w = (m2 - s[i - 1].m2) / (s[i].m2 - s[i - 1].m2);
            return s[i - 1].m3 + w * (s[i].m3 - s[i - 1].m3);
        }
    }
    return 0.0;
}

// Region by the open-set definitions, for points away from every boundary piece.
Region open_region(Point2 p)
{
    if (p.m3 > 0.0) {
        return Region::B14;
    }
    return p.m3 > sep_linear(p.m2) ? Region::B13 : Region::B13p;
}

} // namespace

TEST_CASE("region examples")
{
    const RegionLabel p1 = label(0, 0);
    CHECK(p1.tag == Region::P1);
    CHECK(p1.geometry_note == "Heisenberg soliton");
    const RegionLabel b14 = label(0.5, 0.2);
    CHECK(b14.tag == Region::B14);
    CHECK(b14.alpha_limit == FixedPointTag::P1);
    CHECK(b14.omega_limit == FixedPointTag::P4);
    const RegionLabel below = label(0.5, -0.95);
    CHECK(below.tag == Region::B13p);
    CHECK(below.alpha_limit == FixedPointTag::P1);
    CHECK(below.omega_limit == FixedPointTag::P3);
    // Reference value from an independent high-accuracy solve of dm3/dm2 from the seed.
    CHECK(std::abs(shared().value_at(0.5) - (-0.7417580750115679)) < 1e-8);
    CHECK(classify_region(ModuliPoint::infinity(), shared()).tag == Region::P1);
}

TEST_CASE("curve and fixed point labels")
{
    CHECK(label(0, -1).tag == Region::P2);
    CHECK(label(1, 0).tag == Region::P3);
    CHECK(label(1, 1).tag == Region::P4);
    CHECK(label(0, -0.5).tag == Region::T12);
    CHECK(label(0.5, 0).tag == Region::T13);
    CHECK(label(1, -3).tag == Region::T13p);
    CHECK(label(0.4, 0.4).tag == Region::T14);
    CHECK(label(1, 0.5).tag == Region::T34);
    CHECK(label(0.5, shared().value_at(0.5)).tag == Region::T23);
    CHECK(label(0.5, -0.5).tag == Region::B13);
    CHECK(label(0.5, -5).tag == Region::B13p);
    for (Region r : {Region::T12, Region::T13, Region::T13p, Region::T14, Region::T23, Region::T34, Region::B14,
                     Region::B13, Region::B13p}) {
        const RegionLabel l = region_label(r);
        CHECK(l.tag == r);
        CHECK_FALSE(l.geometry_note.empty());
        CHECK(l.alpha_limit != l.omega_limit);
    }
}

TEST_CASE("classify_region errors")
{
    auto code = [](auto&& f) {
        try {
            f();
        }
        catch (const Error& e) {
            return e.code();
        }
        FAIL("no error raised");
        return Errc::NonFinite;
    };
    CHECK(code([] { label(0, -2); }) == Errc::OutOfDomain);
    CHECK(code([] { label(1.5, 0); }) == Errc::OutOfDomain);
    CHECK(code([] { label(0.5, 0.7); }) == Errc::OutOfDomain);
    CHECK(code([] { classify_region(ModuliPoint::coords(0.15, 0.05), shared(), 0.1); }) ==
          Errc::AmbiguousNearBoundary);
}

TEST_CASE("compactified distance")
{
    CHECK(compactified_distance({0, 0}, FixedPointTag::P1) == 0.0);
    CHECK(compactified_distance({0.5, -1e4}, FixedPointTag::P1) == 1e-4);
    CHECK(compactified_distance({1, -1e4}, FixedPointTag::P3) == doctest::Approx(1e4));
    CHECK(compactified_distance({0.3, 0.4}, FixedPointTag::P1) == doctest::Approx(0.5));
}

TEST_CASE("verify_limits examples")
{
    struct Case {
        Point2 p;
        FixedPointTag alpha;
        FixedPointTag omega;
    };
    const Case cases[] = {
        {{0.9, 0.9}, FixedPointTag::P1, FixedPointTag::P4},
        {{0, -0.5}, FixedPointTag::P1, FixedPointTag::P2},
        {{1, -1}, FixedPointTag::P1, FixedPointTag::P3},
        {{0.5, 0.2}, FixedPointTag::P1, FixedPointTag::P4},
        {{0.5, -0.95}, FixedPointTag::P1, FixedPointTag::P3},
        {{0.5, -0.5}, FixedPointTag::P1, FixedPointTag::P3},
    };
    for (const Case& c : cases) {
        CAPTURE(c.p.m2);
        CAPTURE(c.p.m3);
        const LimitVerdict v = verify_limits(ModuliPoint::coords(c.p), shared(), default_limit_config());
        CHECK(v.matches);
        CHECK(v.observed_alpha == c.alpha);
        CHECK(v.observed_omega == c.omega);
    }
}

TEST_CASE("region labels agree with the Bianchi class")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::uniform_real_distribution<double> w(-5.0, -0.02);
    auto cls = [](Point2 p) { return classify(StructureConstants(1, p.m2, p.m3)); };
    for (int n = 0; n < 200; ++n) {
        const double x = u(rng);
        const double y = u(rng);
        const Point2 b14{std::max(x, y), std::min(x, y)};
        CHECK(cls(b14) == BianchiClass::SU2);
        CHECK(cls({x, x}) == BianchiClass::SU2);
        CHECK(cls({1, x}) == BianchiClass::SU2);
        CHECK(cls({x, w(rng)}) == BianchiClass::SL2R);
        CHECK(cls({1, w(rng)}) == BianchiClass::SL2R);
        CHECK(cls({x, shared().value_at(x)}) == BianchiClass::SL2R);
        CHECK(cls({x, 0}) == BianchiClass::E2);
        CHECK(cls({0, -x}) == BianchiClass::E11);
        CHECK(cls({0, 0}) == BianchiClass::H3);
    }
}

TEST_CASE("flow is horizontal and rightward on 1 - m2 + m3 = 0")
{
    for (int i = 1; i < 1000; ++i) {
        const double m2 = i / 1000.0;
        const double m3 = m2 - 1.0;
        REQUIRE(1.0 - m2 + m3 == 0.0);
        const Point2 f = m_flow_rhs({m2, m3}, 0, true);
        CHECK(f.m3 == 0.0);
        CHECK(f.m2 > 0.0);
    }
}

TEST_CASE("region partition on a 300x300 canonical grid")
{
    const double tol = kDefaultBandTol;
    std::size_t labelled = 0;
    for (int i = 0; i < 300; ++i) {
        const double m2 = (i + 0.5) / 300.0;
        for (int j = 0; j < 300; ++j) {
            const double m3 = -3.0 + (m2 + 3.0) * (j + 0.5) / 300.0;
            const Point2 p{m2, m3};
            if (boundary_distance(p, shared()) < 2.0 * tol) {
                continue;
            }
            const RegionLabel l = classify_region(ModuliPoint::coords(p), shared(), tol);
            CHECK(l.tag == open_region(p));
            ++labelled;
        }
    }
    CHECK(labelled > 85000);
}
