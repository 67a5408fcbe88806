#include "r3flow/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "r3flow/curvature.hpp"

namespace r3flow {

std::string_view to_string(AsymptoticModel m) noexcept
{
    switch (m) {
    case AsymptoticModel::LinearGrowth: return "LinearGrowth";
    case AsymptoticModel::ConstantLimit: return "ConstantLimit";
    case AsymptoticModel::ExponentialDecay: return "ExponentialDecay";
    }
    return "?";
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    std::size_t n = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    LineFit f;
    f.n = x.size();
    if (f.n < 2) {
        return f;
    }
    const double n = static_cast<double>(f.n);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

std::string q_name(int i) { return "q" + std::to_string(i + 1); }

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Index whose lambda differs in sign from the other two (SL2R), or is zero (E2).
int odd_index(const Vec3& lambda, BianchiClass cls)
{
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3;
        const int j = (k + 2) % 3;
        if (sign(lambda[i]) == sign(lambda[j]) && sign(lambda[i]) != 0) {
            if (cls == BianchiClass::E2 ? lambda[k] == 0.0 : sign(lambda[k]) == -sign(lambda[i])) {
                return k;
            }
        }
    }
    return -1;
}

Trajectory run_q_flow(const MetricState& s0, const IntegratorConfig& cfg)
{
    return integrate(Formulation::QFlow, s0, cfg);
}

double window_start(double t0, double t1) { return t0 + kTransientFraction * (t1 - t0); }

AsymptoticFit constant_fit(const Trajectory& tr, int i, const std::string& key)
{
    const double t0 = tr.samples.front().t;
    const double t1 = tr.back().t;
    const double limit = tr.back().y[i];
    double ss = 0.0;
    std::size_t n = 0;
    for (const Sample& s : tr.samples) {
        if (s.t >= window_start(t0, t1)) {
            ss += (s.y[i] - limit) * (s.y[i] - limit);
            ++n;
        }
    }
    return {q_name(i), AsymptoticModel::ConstantLimit, {{key, limit}}, n ? std::sqrt(ss / n) : 0.0};
}

struct DecayData {
    std::vector<double> t;
    std::vector<double> log_gap;
    double noise_floor = 0.0;
};

// log |lambda_i q_i - lambda_j q_j| on the part of the run above the noise floor,
// with the leading transient removed.
DecayData decay_window(const Trajectory& tr, const Vec3& lambda, int i, int j, const IntegratorConfig& cfg)
{
    DecayData d;
    double scale = 0.0;
    for (int k : {i, j}) {
        scale = std::max(scale, std::abs(lambda[k] * tr.samples.front().y[k]));
    }
    d.noise_floor = 100.0 * (cfg.abs_tol + cfg.rel_tol * scale);
    std::size_t last = 0;
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
        const auto& y = tr.samples[k].y;
        if (std::abs(lambda[i] * y[i] - lambda[j] * y[j]) > d.noise_floor) {
            last = k;
        }
        else {
            break;
        }
    }
    const double t0 = tr.samples.front().t;
    const double start = window_start(t0, tr.samples[last].t);
    for (std::size_t k = 0; k <= last; ++k) {
        const Sample& s = tr.samples[k];
        if (s.t >= start) {
            d.t.push_back(s.t);
            d.log_gap.push_back(std::log(std::abs(lambda[i] * s.y[i] - lambda[j] * s.y[j])));
        }
    }
    return d;
}

} // namespace

std::vector<AsymptoticFit> fit_asymptotics(const MetricState& s0, const IntegratorConfig& cfg)
{
    const Vec3& lambda = s0.lambda();
    const BianchiClass cls = classify(StructureConstants(lambda));
    if (cls != BianchiClass::SL2R && cls != BianchiClass::E2) {
        throw Error(Errc::WrongClass, "asymptotic laws are fitted for SL2R and E2 only, got " +
                                          std::string(to_string(cls)));
    }
    const int k = odd_index(lambda, cls);
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    const Trajectory tr = run_q_flow(s0, cfg);
    const double t0 = tr.samples.front().t;
    const double t1 = tr.back().t;
    std::vector<AsymptoticFit> fits;

    if (cls == BianchiClass::SL2R) {
        for (int g : {std::min(i, j), std::max(i, j)}) {
            std::vector<double> x;
            std::vector<double> y;
            for (const Sample& s : tr.samples) {
                if (s.t >= window_start(t0, t1)) {
                    x.push_back(s.t);
                    y.push_back(s.y[g]);
                }
            }
            const LineFit f = least_squares(x, y);
            const double ratio = t1 != 0.0 ? tr.back().y[g] / t1 : 0.0;
            fits.push_back({q_name(g),
                            AsymptoticModel::LinearGrowth,
                            {{"slope", f.slope}, {"intercept", f.intercept}, {"ratio_at_t_end", ratio}},
                            f.rms});
        }
        fits.push_back(constant_fit(tr, k, "E1"));
        return fits;
    }

    fits.push_back(constant_fit(tr, std::min(i, j), "E1"));
    fits.push_back(constant_fit(tr, std::max(i, j), "E1"));
    fits.push_back(constant_fit(tr, k, "E3"));
    const std::string gap = "lambda" + std::to_string(i + 1) + "*q" + std::to_string(i + 1) + "-lambda" +
                            std::to_string(j + 1) + "*q" + std::to_string(j + 1);
    const DecayData d = decay_window(tr, lambda, i, j, cfg);
    if (d.t.size() < 8) {
        const double last = lambda[i] * tr.back().y[i] - lambda[j] * tr.back().y[j];
        fits.push_back({gap, AsymptoticModel::ConstantLimit, {{"limit", last}}, 0.0});
        return fits;
    }
    const LineFit f = least_squares(d.t, d.log_gap);
    fits.push_back({gap,
                    AsymptoticModel::ExponentialDecay,
                    {{"rate", -f.slope}, {"amplitude", std::exp(f.intercept)}, {"t_fit_end", d.t.back()}},
                    f.rms});
    return fits;
}

DrcGrowthReport rescaled_drc_growth(const MetricState& s0, const IntegratorConfig& cfg)
{
    const Vec3& lambda = s0.lambda();
    const BianchiClass cls = classify(StructureConstants(lambda));
    if (cls != BianchiClass::E2) {
        throw Error(Errc::WrongClass, "rescaled |D Rc|^2 growth is defined for E2 data, got " +
                                          std::string(to_string(cls)));
    }
    if (curvature_profile(structure_constants_from_metric(s0)).d_ricci_norm_sq == 0.0) {
        throw Error(Errc::DegenerateFlat, "initial metric is flat");
    }
    const std::vector<AsymptoticFit> fits = fit_asymptotics(s0, cfg);
    const AsymptoticFit& decay = fits.back();
    if (decay.model != AsymptoticModel::ExponentialDecay) {
        throw Error(Errc::DegenerateFlat, "no resolvable decay of the metric anisotropy");
    }
    const double rate = decay.constants.at("rate");
    const double t_fit_end = decay.constants.at("t_fit_end");

    const Trajectory tr = run_q_flow(s0, cfg);
    const double t0 = tr.samples.front().t;
    const double start = window_start(t0, t_fit_end);
    std::vector<double> x;
    std::vector<double> y;
    for (const Sample& s : tr.samples) {
        if (s.t < start || s.t > t_fit_end) {
            continue;
        }
        const double w = std::exp(-rate * s.t);
        const Vec3 q{w * s.y[0], w * s.y[1], w * s.y[2]};
        const double drc = curvature_profile(structure_constants_from_metric(lambda, q)).d_ricci_norm_sq;
        if (drc > 0.0 && std::isfinite(drc)) {
            x.push_back(s.t);
            y.push_back(std::log(drc));
        }
    }
    const LineFit f = least_squares(x, y);
    DrcGrowthReport rep;
    rep.growth_rate = f.slope;
    rep.decay_rate = rate;
    rep.residual = f.rms;
    rep.samples = f.n;
    return rep;
}

} // namespace r3flow
