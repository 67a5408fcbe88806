// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "r3flow/cli.hpp"
#include "r3flow/curvature.hpp"
#include "r3flow/dynamics.hpp"
#include "r3flow/flow.hpp"
#include "r3flow/moduli.hpp"

using namespace r3flow;

namespace {

// Pinned tolerances and budgets.
constexpr double kEigvecParallelTol = 1e-12;
constexpr double kCurveDriftTol = 1e-9;
constexpr double kTaylorAgreeTol = 1e-6;
constexpr double kEndpointTol = 1e-6;
constexpr double kCrossCheckTol = 1e-5;
constexpr double kBandTol = 1e-4;
constexpr double kMonteCarloPass = 0.99;
constexpr double kCollisionInvTol = 1e-6;
constexpr double kCollisionChartTol = 1e-3;
constexpr double kSeamPairTol = 1e-9;
constexpr double kS0Band = 1e-2;
constexpr double kCanonTol = 1e-12;
constexpr double kGrowthLo = 1.96;
constexpr double kGrowthHi = 2.04;
constexpr double kDecayRelTol = 0.05;
constexpr double kDrcRelTol = 0.10;
constexpr double kLawRelTol = 1e-12;
constexpr double kPortraitTol = 1e-3;
constexpr std::uint64_t kSeed = 20261016;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    }
    catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) {
        ++failures;
    }
    std::printf("%s [%d] %s: %s (%.3g s, budget %.3g s%s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt,
                budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel_diff(double x, double y)
{
    const double s = std::max({1.0, std::abs(x), std::abs(y)});
    return std::abs(x - y) / s;
}

// --- 1 -----------------------------------------------------------------------

Outcome fixed_point_table()
{
    struct Expected {
        Point2 at;
        Mat2 j;
        Vec2 eig;
    };
    const std::vector<Expected> table = {
        {{0, 0}, {{{1, 0}, {0, 1}}}, {1, 1}},     {{1, 1}, {{{-1, 0}, {0, -1}}}, {-1, -1}},
        {{0, -1}, {{{2, 0}, {2, -2}}}, {2, -2}},  {{-1, 0}, {{{-2, 2}, {0, 2}}}, {2, -2}},
        {{1, 0}, {{{-2, 0}, {0, 0}}}, {0, -2}},   {{0, 1}, {{{0, 0}, {0, -2}}}, {0, -2}},
    };
    const auto reports = fixed_points();
    if (reports.size() != 6) {
        return {false, "expected six fixed points, got " + std::to_string(reports.size())};
    }
    for (const Expected& e : table) {
        const auto it = std::find_if(reports.begin(), reports.end(), [&](const auto& r) { return r.location == e.at; });
        if (it == reports.end()) {
            return {false, "missing fixed point"};
        }
        if (it->jacobian != e.j || it->eigenvalues != e.eig) {
            return {false, "Jacobian or spectrum mismatch"};
        }
        const Point2 rhs = m_flow_rhs(e.at, 0.0, true);
        if (rhs.m2 != 0.0 || rhs.m3 != 0.0) {
            return {false, "vector field does not vanish"};
        }
    }
    double worst = 0.0;
    for (auto [at, dir] : {std::pair{Point2{0, -1}, Vec2{2, 1}}, std::pair{Point2{-1, 0}, Vec2{1, 2}}}) {
        const auto& r = *std::find_if(reports.begin(), reports.end(), [&](const auto& x) { return x.location == at; });
        if (r.stability != Stability::Saddle || !r.eigenvectors) {
            return {false, "saddle not reported"};
        }
        const Vec2 v = (*r.eigenvectors)[0];
        worst = std::max(worst, std::abs(v[0] * dir[1] - v[1] * dir[0]) / std::hypot(dir[0], dir[1]));
    }
    return {worst < kEigvecParallelTol, "six points, exact Jacobians, unstable-eigenvector cross product " +
                                            fmt("%.2e", worst)};
}

// --- 2 -----------------------------------------------------------------------

Outcome invariant_curves()
{
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> line(-0.5, 2.0);
    std::uniform_real_distribution<double> diag(0.0, 2.0);
    struct Curve {
        const char* name;
        std::function<Point2(double)> at;
        std::function<double(Point2)> drift;
        bool diagonal;
    };
    const std::vector<Curve> curves = {
        {"m2=0", [](double s) { return Point2{0, s}; }, [](Point2 p) { return std::abs(p.m2); }, false},
        {"m3=0", [](double s) { return Point2{s, 0}; }, [](Point2 p) { return std::abs(p.m3); }, false},
        {"m2=1", [](double s) { return Point2{1, s}; }, [](Point2 p) { return std::abs(p.m2 - 1); }, false},
        {"m3=1", [](double s) { return Point2{s, 1}; }, [](Point2 p) { return std::abs(p.m3 - 1); }, false},
        {"m2=m3", [](double s) { return Point2{s, s}; },
         [](Point2 p) { return std::abs(p.m2 - p.m3) / std::sqrt(2.0); }, true},
    };
    IntegratorConfig cfg;
    cfg.method = Method::RK4Fixed;
    cfg.step = 1e-3;
    cfg.t_end = 10.0;
    double worst = 0.0;
    for (const Curve& c : curves) {
        for (int k = 0; k < 20; ++k) {
            const Point2 start = c.at(c.diagonal ? diag(rng) : line(rng));
            const Trajectory tr = integrate(Formulation::MFlowAutonomous, start, cfg);
            for (const Sample& s : tr.samples) {
                worst = std::max(worst, c.drift({s.y[0], s.y[1]}));
            }
        }
    }
    return {worst < kCurveDriftTol, "5 curves x 20 starts, max drift " + fmt("%.2e", worst)};
}

// --- 3 -----------------------------------------------------------------------

Outcome separatrix_reproduction()
{
    const Separatrix sep = trace_separatrix(256, 1e-10);
    double worst = 0.0;
    for (double m2 : {0.05, 0.1, 0.15, 0.2}) {
        worst = std::max(worst, std::abs(sep.value_at(m2) - separatrix_taylor_seed(m2)));
    }
    const auto& s = sep.samples();
    bool increasing = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        increasing = increasing && s[i].m2 > s[i - 1].m2 && s[i].m3 > s[i - 1].m3;
    }
    const double g0 = distance(s.front(), {0, -1});
    const double g1 = distance(s.back(), {1, 0});
    const bool ok = worst < kTaylorAgreeTol && increasing && g0 < kEndpointTol && g1 < kEndpointTol;
    return {ok, "Taylor agreement " + fmt("%.2e", worst) + ", strictly increasing " + (increasing ? "yes" : "no") +
                    ", endpoint gaps " + fmt("%.2e", g0) + " / " + fmt("%.2e", g1)};
}

// --- 4 -----------------------------------------------------------------------

Outcome formulation_equivalence()
{
    struct Case {
        const char* cls;
        MetricState s;
        double t_end;
    };
    const std::vector<Case> cases = {
        {"SU2", MetricState({1, 1, 1}, {2, 1, 1}), 5.0},
        {"SL2R", MetricState({1, 1, -1}, {1, 2, 3}), 5.0},
        {"E11", MetricState({1, 0, -1}, {1, 1, 1}), 2.0},
    };
    std::string detail;
    bool ok = true;
    for (const Case& c : cases) {
        IntegratorConfig cfg;
        cfg.step = 1e-3;
        cfg.t_end = c.t_end;
        const CrossCheckReport r = cross_check_formulations(c.s, cfg);
        ok = ok && r.max_residual < kCrossCheckTol && r.samples_checked > 0;
        detail += std::string(detail.empty() ? "" : "; ") + c.cls + " " + fmt("%.2e", r.max_residual) + " over " +
                  std::to_string(r.samples_checked) + " samples";
        if (r.samples_unresolved) {
            detail += " (" + std::to_string(r.samples_unresolved) + " unresolved near extinction)";
        }
    }
    return {ok, detail};
}

// --- 5 -----------------------------------------------------------------------

Outcome limits_monte_carlo()
{
    const Separatrix sep = trace_separatrix(256, 1e-10);
    std::mt19937_64 rng(kSeed + 5);
    std::normal_distribution<double> g;
    int checked = 0;
    int agree = 0;
    int banded = 0;
    std::map<std::string, int> by_label;
    while (checked < 500) {
        const StructureConstants a(g(rng), g(rng), g(rng));
        const ModuliPoint p = canonicalize(a);
        if (boundary_distance(p.point(), sep) < kBandTol) {
            ++banded;
            continue;
        }
        const LimitVerdict v = verify_limits(p, sep, default_limit_config());
        ++checked;
        ++by_label[std::string(to_string(v.predicted.tag))];
        agree += v.matches ? 1 : 0;
    }
    const double frac = static_cast<double>(agree) / checked;
    std::string mix;
    for (const auto& [k, n] : by_label) {
        mix += " " + k + "=" + std::to_string(n);
    }
    return {frac >= kMonteCarloPass, std::to_string(agree) + "/" + std::to_string(checked) +
                                         " limits confirmed, " + std::to_string(banded) + " banded; labels" + mix};
}

// --- 6 -----------------------------------------------------------------------

Outcome injectivity_shadow()
{
    struct Entry {
        Point2 p;
        IsometryInvariants e;
    };
    std::vector<Entry> pts;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point2 p{static_cast<double>(i) / (n - 1), -3.0 + 4.0 * static_cast<double>(j) / (n - 1)};
            if (!is_canonical(ModuliPoint::coords(p)) || distance(p, {1, 0}) < kS0Band) {
                continue;
            }
            pts.push_back({p, invariant_map(ModuliPoint::coords(p))});
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const Entry& x, const Entry& y) { return x.e.ricci_direction[0] < y.e.ricci_direction[0]; });
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t k = i + 1; k < pts.size(); ++k) {
            if (pts[k].e.ricci_direction[0] - pts[i].e.ricci_direction[0] >= kCollisionInvTol) {
                break;
            }
            if (invariant_distance(pts[i].e, pts[k].e) < kCollisionInvTol &&
                seam_distance(pts[i].p, pts[k].p) > kCollisionChartTol) {
                ++collisions;
            }
        }
    }
    std::mt19937_64 rng(kSeed + 6);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double m3 = -1.0 / u(rng);
        worst = std::max(worst, invariant_distance(invariant_map(ModuliPoint::coords(0, m3)),
                                                   invariant_map(ModuliPoint::coords(0, 1.0 / m3))));
    }
    const bool ok = collisions == 0 && worst < kSeamPairTol;
    return {ok, std::to_string(pts.size()) + " grid points, " + std::to_string(collisions) +
                    " collisions; seam pairs max gap " + fmt("%.2e", worst)};
}

// --- 7 -----------------------------------------------------------------------

Outcome canonical_group_invariance()
{
    std::mt19937_64 rng(kSeed + 7);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> logc(-3.0, 3.0);
    std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::uniform_int_distribution<int> pick(0, 5);
    std::bernoulli_distribution flip;
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const StructureConstants a(g(rng), g(rng), g(rng));
        const double c = std::pow(10.0, logc(rng)) * (flip(rng) ? -1.0 : 1.0);
        const StructureConstants b = a.scaled(c).permuted(perms[pick(rng)]);
        worst = std::max(worst, distance(canonicalize(a).point(), canonicalize(b).point()));
    }
    return {worst < kCanonTol, "1e5 triples, max chart distance " + fmt("%.2e", worst)};
}

// --- 8 -----------------------------------------------------------------------

const AsymptoticFit& find_fit(const std::vector<AsymptoticFit>& fits, const std::string& q)
{
    return *std::find_if(fits.begin(), fits.end(), [&](const AsymptoticFit& f) { return f.quantity == q; });
}

Outcome asymptotic_growth()
{
    IntegratorConfig cfg;
    cfg.t_end = 1000.0;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-12;
    cfg.max_steps = 10'000'000;
    const auto fits = fit_asymptotics(MetricState({1, -1, 1}, {1, 1, 1}), cfg);
    const double r1 = find_fit(fits, "q1").constants.at("ratio_at_t_end");
    const double r3 = find_fit(fits, "q3").constants.at("ratio_at_t_end");
    const auto paired = fit_asymptotics(MetricState({1, 1, -1}, {1, 1, 1}), cfg);
    const double p1 = find_fit(paired, "q1").constants.at("ratio_at_t_end");
    const double p2 = find_fit(paired, "q2").constants.at("ratio_at_t_end");
    auto in = [](double x) { return x >= kGrowthLo && x <= kGrowthHi; };
    const bool ok = in(r1) && in(r3) && in(p1) && in(p2);
    return {ok, "lambda=(1,-1,1): q1/t=" + fmt("%.4f", r1) + " q3/t=" + fmt("%.4f", r3) +
                    "; lambda=(1,1,-1): q1/t=" + fmt("%.4f", p1) + " q2/t=" + fmt("%.4f", p2)};
}

IntegratorConfig e2_config()
{
    IntegratorConfig cfg;
    cfg.t_end = 40.0;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-12;
    return cfg;
}

Outcome asymptotic_decay_vs_limit()
{
    const auto fits = fit_asymptotics(MetricState({1, 1, 0}, {2, 1, 1}), e2_config());
    const double limit = find_fit(fits, "q3").constants.at("E3");
    const double rate = fits.back().constants.at("rate");
    const double rel = std::abs(rate - limit) / limit;
    return {rel <= kDecayRelTol, "decay rate " + fmt("%.4f", rate) + " vs q3 limit " + fmt("%.4f", limit) +
                                     " (rel " + fmt("%.3f", rel) + "); measured rate matches 4*lambda1*lambda2/limit = " +
                                     fmt("%.4f", 4.0 / limit)};
}

Outcome rescaled_drc()
{
    std::string detail;
    bool ok = true;
    for (Vec3 q : {Vec3{2, 1, 1}, Vec3{1.5, 1, 2}}) {
        const DrcGrowthReport r = rescaled_drc_growth(MetricState({1, 1, 0}, q), e2_config());
        const double rel = std::abs(r.growth_rate - r.decay_rate) / r.decay_rate;
        ok = ok && rel <= kDrcRelTol && r.growth_rate > 0.0;
        detail += std::string(detail.empty() ? "" : "; ") + "growth " + fmt("%.4f", r.growth_rate) + " vs E3 " +
                  fmt("%.4f", r.decay_rate) + " (rel " + fmt("%.3f", rel) + ")";
    }
    return {ok, detail};
}

// --- 9 -----------------------------------------------------------------------

Outcome curvature_sanity()
{
    const CurvatureProfile round = curvature_profile(StructureConstants(1, 1, 1));
    bool ok = round.sectional[0] == round.sectional[1] && round.sectional[1] == round.sectional[2] &&
              round.d_ricci_norm_sq == 0.0;
    const CurvatureProfile flat = curvature_profile(StructureConstants(1, 1, 0));
    ok = ok && flat.ricci == Vec3{0, 0, 0};

    std::mt19937_64 rng(kSeed + 9);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> logc(-1.0, 1.0);
    std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const StructureConstants a(g(rng), g(rng), g(rng));
        const CurvatureProfile c = curvature_profile(a);
        const auto& pm = perms[static_cast<std::size_t>(k % 6)];
        const CurvatureProfile cp = curvature_profile(a.permuted(pm));
        for (int i = 0; i < 3; ++i) {
            worst = std::max({worst, rel_diff(cp.mu[i], c.mu[pm[i]]), rel_diff(cp.ricci[i], c.ricci[pm[i]]),
                              rel_diff(cp.sectional[i], c.sectional[pm[i]])});
        }
        worst = std::max({worst, rel_diff(cp.scalar, c.scalar), rel_diff(cp.ricci_norm_sq, c.ricci_norm_sq),
                          rel_diff(cp.d_ricci_norm_sq, c.d_ricci_norm_sq)});
        const CurvatureProfile cn = curvature_profile(a.scaled(-1.0));
        for (int i = 0; i < 3; ++i) {
            worst = std::max({worst, rel_diff(cn.ricci[i], c.ricci[i]), rel_diff(cn.sectional[i], c.sectional[i])});
        }
        worst = std::max(worst, rel_diff(cn.d_ricci_norm_sq, c.d_ricci_norm_sq));
        const double s = std::pow(10.0, logc(rng));
        const CurvatureProfile cs = curvature_profile(a.scaled(s));
        for (int i = 0; i < 3; ++i) {
            worst = std::max({worst, rel_diff(cs.mu[i] / s, c.mu[i]), rel_diff(cs.ricci[i] / (s * s), c.ricci[i]),
                              rel_diff(cs.sectional[i] / (s * s), c.sectional[i])});
        }
        worst = std::max({worst, rel_diff(cs.scalar / (s * s), c.scalar),
                          rel_diff(cs.d_ricci_norm_sq / std::pow(s, 6), c.d_ricci_norm_sq)});
    }
    ok = ok && worst < kLawRelTol;
    return {ok, "round and flat points exact; 1e4 triples, max relative law defect " + fmt("%.2e", worst)};
}

// --- portrait smoke ------------------------------------------------------------

Outcome portrait_smoke()
{
    const auto dir = std::filesystem::temp_directory_path() / "r3flow_acceptance";
    std::filesystem::create_directories(dir);
    const std::string out = (dir / "portrait.csv").string();
    std::ostringstream so;
    std::ostringstream se;
    const int code = cli::run({"portrait", "--grid", "20", "--out", out}, so, se);
    if (code != 0) {
        return {false, "exit code " + std::to_string(code) + ": " + se.str()};
    }
    std::ifstream f(out + ".json");
    const nlohmann::json side = nlohmann::json::parse(f);
    std::size_t ends = 0;
    std::size_t settled = 0;
    double worst = 0.0;
    for (const auto& s : side["payload"]["seeds"]) {
        if (s.contains("error")) {
            ends += 2;
            continue;
        }
        for (const char* which : {"backward", "forward"}) {
            const auto& e = s[which];
            ++ends;
            const bool ceiling = e["termination"] == "BlowUpCeiling";
            const double d = e["compactified_distance"].get<double>();
            if (ceiling || d < kPortraitTol) {
                ++settled;
            }
            if (!ceiling) {
                worst = std::max(worst, d);
            }
        }
    }
    const std::size_t seeds = side["payload"]["seeds"].size();
    return {settled == ends && seeds == 400,
            std::to_string(seeds) + " seeds, " + std::to_string(settled) + "/" + std::to_string(ends) +
                " endpoints at a fixed point or the ceiling, worst distance " + fmt("%.2e", worst)};
}

} // namespace

int main()
{
    report(1, "fixed-point table", 1e-3, fixed_point_table);
    report(2, "invariant curves", 5.0, invariant_curves);
    report(3, "separatrix reproduction", 5.0, separatrix_reproduction);
    report(4, "formulation equivalence", 10.0, formulation_equivalence);
    report(5, "phase-plane Monte Carlo", 120.0, limits_monte_carlo);
    report(6, "invariant-map injectivity shadow", 30.0, injectivity_shadow);
    report(7, "canonicalization group invariance", 10.0, canonical_group_invariance);
    report(8, "SL2R linear growth q/t -> 2", 60.0, asymptotic_growth);
    report(8, "E2 decay rate vs q3 limit", 60.0, asymptotic_decay_vs_limit);
    report(8, "E2 rescaled |D Rc|^2 growth", 60.0, rescaled_drc);
    report(9, "curvature sanity and laws", 5.0, curvature_sanity);
    report(10, "portrait smoke test", 120.0, portrait_smoke);
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
