#include "r3flow/cli.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "r3flow/curvature.hpp"
#include "r3flow/dynamics.hpp"
#include "r3flow/flow.hpp"
#include "r3flow/moduli.hpp"

namespace r3flow::cli {

namespace {

using nlohmann::json;

constexpr double kRegionTraceTol = 1e-10;
constexpr std::size_t kRegionTraceSamples = 256;
// Escape along m2 = m3 is stiff; the step count grows linearly with the ceiling.
constexpr double kPortraitCeiling = 1e4;

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(Errc c)
{
    switch (c) {
    case Errc::StepUnderflow:
    case Errc::TraceDiverged: return kIntegrationError;
    case Errc::WrongClass:
    case Errc::DegenerateFlat: return kClassMismatch;
    default: return kInputError;
    }
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render(const json& record)
{
    std::string s = "{\"schema_version\":" + json(kSchemaVersion).dump();
    for (const auto& [k, v] : record.items()) {
        if (k != "schema_version") {
            s += "," + json(k).dump() + ":" + v.dump();
        }
    }
    return s + "}\n";
}

json record(const std::string& command, const std::vector<std::string>& argv, json inputs, json payload)
{
    inputs["argv"] = argv;
    return {{"command", command}, {"inputs", std::move(inputs)}, {"payload", std::move(payload)}};
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Usage("cannot open " + path + " for writing");
    }
    f << text;
    if (!f) {
        throw Usage("failed writing " + path);
    }
}

json point_json(Point2 p) { return {{"m2", p.m2}, {"m3", p.m3}}; }

json moduli_json(const ModuliPoint& p)
{
    if (p.is_infinity()) {
        return "infinity";
    }
    return point_json(p.point());
}

json label_json(const RegionLabel& r)
{
    return {{"tag", to_string(r.tag)},
            {"alpha_limit", to_string(r.alpha_limit)},
            {"omega_limit", to_string(r.omega_limit)},
            {"geometry_note", r.geometry_note}};
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

const Separatrix& shared_separatrix()
{
    static const Separatrix sep = trace_separatrix(kRegionTraceSamples, kRegionTraceTol);
    return sep;
}

std::string csv_header_line() { return std::string("# schema_version=") + kSchemaVersion + "\n"; }

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::vector<double> a;
};

void cmd_classify(const ClassifyArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    const StructureConstants a(in.a[0], in.a[1], in.a[2]);
    const BianchiClass cls = classify(a);
    const ModuliPoint c = canonicalize(a);
    json region;
    try {
        region = label_json(classify_region(c, shared_separatrix()));
    }
    catch (const Error& e) {
        if (e.code() != Errc::AmbiguousNearBoundary) {
            throw;
        }
        region = {{"error", to_string(e.code())}, {"detail", e.what()}};
    }
    json payload = {{"class", to_string(cls)},
                    {"lie_algebra", lie_algebra_name(cls)},
                    {"lie_group", lie_group_name(cls)},
                    {"canonical", moduli_json(c)},
                    {"partition_cell", to_string(partition_cell(c))},
                    {"region", region}};
    out << render(record("classify", argv, {{"a", in.a}}, payload));
}

void cmd_curvature(const ClassifyArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    const StructureConstants a(in.a[0], in.a[1], in.a[2]);
    const CurvatureProfile c = curvature_profile(a);
    json payload = {{"mu", vec_json(c.mu)},
                    {"ricci_eigenvalues", vec_json(c.ricci)},
                    {"ricci_sorted", vec_json(ricci_spectrum_sorted(a))},
                    {"sectional", vec_json(c.sectional)},
                    {"scalar", c.scalar},
                    {"ricci_norm_sq", c.ricci_norm_sq},
                    {"d_ricci_norm_sq", c.d_ricci_norm_sq}};
    out << render(record("curvature", argv, {{"a", in.a}}, payload));
}

// ---------------------------------------------------------------------------

struct EvolveArgs {
    std::string formulation = "m";
    std::vector<double> initial;
    double t_end = 1.0;
    std::string method = "rkf45";
    double step = 1e-3;
    double tol = 1e-9;
    double ceiling = 1e9;
    std::string out;
};

void cmd_evolve(const EvolveArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    IntegratorConfig cfg;
    cfg.method = in.method == "rk4" ? Method::RK4Fixed : Method::RKF45Adaptive;
    cfg.step = in.step;
    cfg.abs_tol = in.tol;
    cfg.rel_tol = in.tol;
    cfg.t_end = in.t_end;
    cfg.m_ceiling = in.ceiling;

    const auto& v = in.initial;
    auto need = [&](std::size_t n, const char* what) {
        if (v.size() != n) {
            throw Usage(std::string("--initial expects ") + what);
        }
    };
    Formulation f{};
    InitialState init = Point2{};
    std::vector<std::string> cols;
    if (in.formulation == "q") {
        need(6, "lambda1 lambda2 lambda3 q1 q2 q3");
        f = Formulation::QFlow;
        init = MetricState({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
        cols = {"q1", "q2", "q3"};
    }
    else if (in.formulation == "a") {
        need(3, "a1 a2 a3");
        f = Formulation::AFlow;
        init = StructureConstants(v[0], v[1], v[2]);
        cols = {"a1", "a2", "a3"};
    }
    else if (in.formulation == "m-scaled") {
        need(3, "m2 m3 a1");
        f = Formulation::MFlowScaled;
        init = ScaledChartState{v[0], v[1], v[2]};
        cols = {"m2", "m3", "a1"};
    }
    else {
        need(2, "m2 m3");
        f = Formulation::MFlowAutonomous;
        init = Point2{v[0], v[1]};
        cols = {"m2", "m3"};
    }
    const Trajectory tr = integrate(f, init, cfg);

    std::string csv = csv_header_line() + "t";
    for (const auto& c : cols) {
        csv += "," + c;
    }
    csv += "\n";
    for (const Sample& s : tr.samples) {
        csv += fmt17(s.t);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            csv += "," + fmt17(s.y[i]);
        }
        csv += "\n";
    }
    const json inputs = {{"formulation", in.formulation}, {"initial", in.initial}, {"t_end", in.t_end},
                         {"method", in.method},           {"step", in.step},       {"tol", in.tol},
                         {"ceiling", in.ceiling},         {"out", in.out}};
    const json payload = {{"formulation", to_string(f)},
                          {"termination", to_string(tr.termination)},
                          {"samples", tr.samples.size()},
                          {"t_final", tr.back().t},
                          {"columns", cols}};
    const std::string side = render(record("evolve", argv, inputs, payload));
    write_file(in.out, csv);
    write_file(in.out + ".json", side);
    out << side;
}

// ---------------------------------------------------------------------------

struct PortraitArgs {
    std::size_t grid = 20;
    double t_span = 1e4;
    std::string out;
    std::vector<double> window = {-0.2, 1.2, -2.2, 1.2};
    unsigned threads = 0;
    double tol = 1e-9;
    double ceiling = kPortraitCeiling;
};

struct SeedResult {
    Point2 seed{};
    std::vector<Sample> polyline;
    std::optional<Termination> forward;
    std::optional<Termination> backward;
    std::string error;
};

struct EndpointInfo {
    std::string nearest;
    double distance = 0.0;
    bool converged = false;
};

EndpointInfo classify_endpoint(const Sample& s, std::optional<Termination> term)
{
    EndpointInfo e;
    e.distance = INFINITY;
    ModuliPoint c = ModuliPoint::coords(0.0, 0.0);
    try {
        c = canonicalize(StructureConstants(1.0, s.y[0], s.y[1]));
    }
    catch (const Error&) {
        e.nearest = "none";
        return e;
    }
    const Point2 p = c.point();
    for (FixedPointTag t : {FixedPointTag::P1, FixedPointTag::P2, FixedPointTag::P3, FixedPointTag::P4}) {
        const double d = compactified_distance(p, t);
        if (d < e.distance) {
            e.distance = d;
            e.nearest = std::string(to_string(t));
        }
    }
    e.converged = e.distance < kLimitTol || term == Termination::BlowUpCeiling;
    return e;
}

SeedResult run_seed(Point2 seed, const IntegratorConfig& base, double t_span)
{
    SeedResult r;
    r.seed = seed;
    try {
        IntegratorConfig cfg = base;
        cfg.t_end = -t_span;
        const Trajectory bwd = integrate(Formulation::MFlowAutonomous, seed, cfg);
        cfg.t_end = t_span;
        const Trajectory fwd = integrate(Formulation::MFlowAutonomous, seed, cfg);
        r.backward = bwd.termination;
        r.forward = fwd.termination;
        r.polyline.assign(bwd.samples.rbegin(), bwd.samples.rend());
        r.polyline.insert(r.polyline.end(), fwd.samples.begin() + 1, fwd.samples.end());
    }
    catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

int cmd_portrait(const PortraitArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    if (in.grid < 2) {
        throw Usage("--grid must be at least 2");
    }
    if (in.window.size() != 4) {
        throw Usage("--window expects m2_min m2_max m3_min m3_max");
    }
    const std::size_t n = in.grid;
    IntegratorConfig cfg;
    cfg.abs_tol = in.tol;
    cfg.rel_tol = in.tol;
    cfg.m_ceiling = in.ceiling;
    cfg.validate();

    std::vector<Point2> seeds;
    for (std::size_t r = 0; r < n; ++r) {
        const double m3 = in.window[3] - (in.window[3] - in.window[2]) * static_cast<double>(r) / (n - 1);
        for (std::size_t c = 0; c < n; ++c) {
            const double m2 = in.window[0] + (in.window[1] - in.window[0]) * static_cast<double>(c) / (n - 1);
            seeds.push_back({m2, m3});
        }
    }
    std::vector<SeedResult> results(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            results[i] = run_seed(seeds[i], cfg, in.t_span);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(in.threads ? in.threads : hw, seeds.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }

    std::string csv = csv_header_line() + "seed,t,m2,m3\n";
    json seeds_json = json::array();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const SeedResult& r = results[i];
        json sj = {{"index", i}, {"seed", point_json(r.seed)}};
        if (!r.error.empty()) {
            sj["error"] = r.error;
            seeds_json.push_back(sj);
            continue;
        }
        ++ok;
        for (const Sample& s : r.polyline) {
            csv += std::to_string(i) + "," + fmt17(s.t) + "," + fmt17(s.y[0]) + "," + fmt17(s.y[1]) + "\n";
        }
        auto end_json = [](const Sample& s, Termination term) {
            const EndpointInfo e = classify_endpoint(s, term);
            return json{{"point", point_json({s.y[0], s.y[1]})},
                        {"t", s.t},
                        {"termination", to_string(term)},
                        {"nearest_fixed_point", e.nearest},
                        {"compactified_distance", e.distance},
                        {"settled", e.converged}};
        };
        sj["backward"] = end_json(r.polyline.front(), *r.backward);
        sj["forward"] = end_json(r.polyline.back(), *r.forward);
        sj["points"] = r.polyline.size();
        seeds_json.push_back(sj);
    }
    const json inputs = {{"grid", in.grid}, {"t_span", in.t_span}, {"out", in.out}, {"window", in.window},
                         {"tol", in.tol},   {"ceiling", in.ceiling}};
    const json payload = {{"seeds", seeds_json}, {"succeeded", ok}, {"failed", results.size() - ok}};
    const std::string side = render(record("portrait", argv, inputs, payload));
    write_file(in.out, csv);
    write_file(in.out + ".json", side);
    out << render(record("portrait", argv, inputs, {{"succeeded", ok}, {"failed", results.size() - ok}}));
    return ok > 0 ? kOk : kIntegrationError;
}

// ---------------------------------------------------------------------------

struct EquivalentArgs {
    std::vector<double> v;
    double tol = kDefaultEquivalenceTol;
};

void cmd_equivalent(const EquivalentArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    const StructureConstants a(in.v[0], in.v[1], in.v[2]);
    const StructureConstants b(in.v[3], in.v[4], in.v[5]);
    const bool verdict = isometry_equivalent(a, b, in.tol);
    json oracle;
    try {
        const bool sep = separating_check(a, b);
        oracle = {{"invariants_agree", sep}, {"agrees_with_verdict", sep == verdict}};
    }
    catch (const Error& e) {
        if (e.code() != Errc::FlatPoint) {
            throw;
        }
        oracle = {{"invariants_agree", nullptr}, {"agrees_with_verdict", nullptr}, {"note", "flat input"}};
    }
    json payload = {{"canonical_a", moduli_json(canonicalize(a))},
                    {"canonical_b", moduli_json(canonicalize(b))},
                    {"equivalent", verdict},
                    {"oracle", oracle}};
    out << render(record("equivalent", argv, {{"a", {in.v[0], in.v[1], in.v[2]}}, {"b", {in.v[3], in.v[4], in.v[5]}},
                                               {"tol", in.tol}},
                         payload));
}

// ---------------------------------------------------------------------------

struct SeparatrixArgs {
    std::size_t samples = 256;
    double tol = 1e-10;
    std::string out;
};

void cmd_separatrix(const SeparatrixArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    const Separatrix sep = trace_separatrix(in.samples, in.tol);
    std::string csv = csv_header_line() + "# taylor_coeffs=";
    for (std::size_t i = 0; i < sep.taylor_coeffs().size(); ++i) {
        csv += (i ? ";" : "") + fmt17(sep.taylor_coeffs()[i]);
    }
    csv += "\nm2,m3\n";
    for (const Point2& p : sep.samples()) {
        csv += fmt17(p.m2) + "," + fmt17(p.m3) + "\n";
    }
    const json inputs = {{"samples", in.samples}, {"tol", in.tol}, {"out", in.out}};
    const json payload = {{"taylor_coeffs", sep.taylor_coeffs()},
                          {"samples", sep.samples().size()},
                          {"dense_points", sep.dense().size()},
                          {"backward_gap", sep.backward_gap()},
                          {"forward_gap", sep.forward_gap()}};
    const std::string side = render(record("separatrix", argv, inputs, payload));
    write_file(in.out, csv);
    write_file(in.out + ".json", side);
    out << side;
}

// ---------------------------------------------------------------------------

struct AsymptoticsArgs {
    std::string cls;
    std::vector<double> initial;
    double t_end = 1000.0;
    double tol = 1e-12;
};

void cmd_asymptotics(const AsymptoticsArgs& in, const std::vector<std::string>& argv, std::ostream& out)
{
    if (in.initial.size() != 6) {
        throw Usage("--initial expects lambda1 lambda2 lambda3 q1 q2 q3");
    }
    const MetricState s0({in.initial[0], in.initial[1], in.initial[2]},
                         {in.initial[3], in.initial[4], in.initial[5]});
    const BianchiClass actual = classify(StructureConstants(s0.lambda()));
    const BianchiClass wanted = in.cls == "sl2r" ? BianchiClass::SL2R : BianchiClass::E2;
    if (actual != wanted) {
        throw ClassMismatch("initial data is of class " + std::string(to_string(actual)) + ", not " + in.cls);
    }
    IntegratorConfig cfg;
    cfg.t_end = in.t_end;
    cfg.abs_tol = in.tol;
    cfg.rel_tol = in.tol;
    cfg.max_steps = 10'000'000;

    json fits = json::array();
    for (const AsymptoticFit& f : fit_asymptotics(s0, cfg)) {
        fits.push_back({{"quantity", f.quantity},
                        {"model", to_string(f.model)},
                        {"constants", f.constants},
                        {"residual", f.residual}});
    }
    json payload = {{"class", to_string(actual)}, {"fits", fits}};
    if (actual == BianchiClass::E2) {
        try {
            const DrcGrowthReport g = rescaled_drc_growth(s0, cfg);
            payload["rescaled_drc"] = {{"growth_rate", g.growth_rate},
                                       {"decay_rate", g.decay_rate},
                                       {"residual", g.residual},
                                       {"samples", g.samples}};
        }
        catch (const Error& e) {
            if (e.code() != Errc::DegenerateFlat) {
                throw;
            }
            payload["rescaled_drc"] = {{"error", to_string(e.code())}};
        }
    }
    const json inputs = {{"class", in.cls}, {"initial", in.initial}, {"t_end", in.t_end}, {"tol", in.tol}};
    out << render(record("asymptotics", argv, inputs, payload));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Ricci flow on three-dimensional unimodular metric Lie algebras"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 2 invalid input, 3 parse failure, 4 integration failure, 5 class mismatch.");

    ClassifyArgs cls_args;
    auto* classify_cmd = app.add_subcommand("classify", "Bianchi class, canonical point and phase-plane region");
    classify_cmd->add_option("a", cls_args.a, "structure constants a1 a2 a3")->expected(3)->required();

    ClassifyArgs curv_args;
    auto* curvature_cmd = app.add_subcommand("curvature", "Curvature profile of a Milnor frame");
    curvature_cmd->add_option("a", curv_args.a, "structure constants a1 a2 a3")->expected(3)->required();

    EvolveArgs ev;
    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate one Ricci-flow formulation to CSV");
    evolve_cmd->add_option("--formulation", ev.formulation, "q, a, m or m-scaled")
        ->check(CLI::IsMember({"q", "a", "m", "m-scaled"}));
    evolve_cmd->add_option("--initial", ev.initial, "initial state (q: lambda q, a: a, m: m2 m3, m-scaled: m2 m3 a1)")
        ->expected(1, 6)
        ->delimiter(',')
        ->required();
    evolve_cmd->add_option("--t-end", ev.t_end, "final time, negative for backward");
    evolve_cmd->add_option("--method", ev.method, "rk4 or rkf45")->check(CLI::IsMember({"rk4", "rkf45"}));
    evolve_cmd->add_option("--step", ev.step, "fixed or initial step");
    evolve_cmd->add_option("--tol", ev.tol, "absolute and relative tolerance for rkf45");
    evolve_cmd->add_option("--ceiling", ev.ceiling, "blow-up guard for a and m formulations");
    evolve_cmd->add_option("--out", ev.out, "CSV output path")->required();

    PortraitArgs pt;
    auto* portrait_cmd = app.add_subcommand("portrait", "Phase-portrait polylines over a seed grid");
    portrait_cmd->add_option("--grid", pt.grid, "seeds per axis");
    portrait_cmd->add_option("--t-span", pt.t_span, "integration time in each direction");
    portrait_cmd->add_option("--window", pt.window, "m2_min m2_max m3_min m3_max")->expected(4)->delimiter(',');
    portrait_cmd->add_option("--threads", pt.threads, "worker threads, 0 for hardware concurrency");
    portrait_cmd->add_option("--tol", pt.tol, "integrator tolerance");
    portrait_cmd->add_option("--ceiling", pt.ceiling, "chart blow-up guard");
    portrait_cmd->add_option("--out", pt.out, "CSV output path")->required();

    EquivalentArgs eq;
    auto* equivalent_cmd = app.add_subcommand("equivalent", "Isometry-and-scaling equivalence of two triples");
    equivalent_cmd->add_option("v", eq.v, "a1 a2 a3 b1 b2 b3")->expected(6)->required();
    equivalent_cmd->add_option("--tol", eq.tol, "chart distance tolerance");

    SeparatrixArgs sp;
    auto* separatrix_cmd = app.add_subcommand("separatrix", "Trace the separatrix from (0,-1) to (1,0)");
    separatrix_cmd->add_option("--samples", sp.samples, "resampled points");
    separatrix_cmd->add_option("--tol", sp.tol, "integrator tolerance");
    separatrix_cmd->add_option("--out", sp.out, "CSV output path")->required();

    AsymptoticsArgs as;
    auto* asymptotics_cmd = app.add_subcommand("asymptotics", "Fit long-time laws of the metric coefficients");
    asymptotics_cmd->add_option("--class", as.cls, "sl2r or e2")->check(CLI::IsMember({"sl2r", "e2"}))->required();
    asymptotics_cmd->add_option("--initial", as.initial, "lambda1 lambda2 lambda3 q1 q2 q3")
        ->expected(6)
        ->delimiter(',')
        ->required();
    asymptotics_cmd->add_option("--t-end", as.t_end, "final time");
    asymptotics_cmd->add_option("--tol", as.tol, "integrator tolerance");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    }
    catch (const CLI::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    }

    try {
        if (classify_cmd->parsed()) {
            cmd_classify(cls_args, args, out);
        }
        else if (curvature_cmd->parsed()) {
            cmd_curvature(curv_args, args, out);
        }
        else if (evolve_cmd->parsed()) {
            cmd_evolve(ev, args, out);
        }
        else if (portrait_cmd->parsed()) {
            return cmd_portrait(pt, args, out);
        }
        else if (equivalent_cmd->parsed()) {
            cmd_equivalent(eq, args, out);
        }
        else if (separatrix_cmd->parsed()) {
            cmd_separatrix(sp, args, out);
        }
        else if (asymptotics_cmd->parsed()) {
            cmd_asymptotics(as, args, out);
        }
    }
    catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code(e.code());
    }
    catch (const ClassMismatch& e) {
        err << "class mismatch: " << e.what() << "\n";
        return kClassMismatch;
    }
    catch (const Usage& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}

} // namespace r3flow::cli
