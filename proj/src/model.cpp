#include "mrt/model.hpp"

#include <cmath>

#include "mrt/expression.hpp"

namespace mrt {

namespace {

bool finite(double v) { return std::isfinite(v); }

double param(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw ModelError("missing required parameter '" + key + "'");
    return it->second;
}

std::map<std::string, double> merge_params(const ModelPreset& preset,
                                           const std::map<std::string, double>& overrides) {
    std::map<std::string, double> out = preset.defaults;
    for (const auto& [k, v] : overrides) {
        if (!out.count(k))
            throw ModelError("unknown parameter '" + k + "' for preset " + preset.name);
        out[k] = v;
    }
    return out;
}

}  // namespace

Vec2 eval_drift(const OscillatorModel& model, const Point2& p) {
    Vec2 f = model.drift(p);
    if (!finite(f.c1) || !finite(f.c2))
        throw ModelError("drift evaluated to a non-finite value at (" + std::to_string(p.c1) +
                         ", " + std::to_string(p.c2) + ")");
    return f;
}

std::pair<Mat2, Mat2> eval_diffusion(const OscillatorModel& model, const Point2& p) {
    Mat2 g = model.noise(p);
    if (!finite(g.a11) || !finite(g.a12) || !finite(g.a21) || !finite(g.a22))
        throw ModelError("noise evaluated to a non-finite value at (" + std::to_string(p.c1) +
                         ", " + std::to_string(p.c2) + ")");
    return {g, gram(g)};
}

OscillatorModel stratonovich_to_ito(const OscillatorModel& model, double h_fd_rel) {
    if (model.interpretation != Interpretation::Stratonovich)
        throw ModelError("stratonovich_to_ito: model is not in Stratonovich form");

    auto base_drift = model.drift;
    auto noise = model.noise;
    auto jac = model.noise_jacobian;

    auto corrected = [base_drift, noise, jac, h_fd_rel](const Point2& p) -> Vec2 {
        Mat2 g = noise(p);
        Mat2 d1g, d2g;
        if (jac) {
            auto [a, b] = jac(p);
            d1g = a;
            d2g = b;
        } else {
            const double h1 = h_fd_rel * std::max(1.0, std::abs(p.c1));
            const double h2 = h_fd_rel * std::max(1.0, std::abs(p.c2));
            Mat2 gp = noise({p.c1 + h1, p.c2});
            Mat2 gm = noise({p.c1 - h1, p.c2});
            d1g = {(gp.a11 - gm.a11) / (2 * h1), (gp.a12 - gm.a12) / (2 * h1),
                   (gp.a21 - gm.a21) / (2 * h1), (gp.a22 - gm.a22) / (2 * h1)};
            gp = noise({p.c1, p.c2 + h2});
            gm = noise({p.c1, p.c2 - h2});
            d2g = {(gp.a11 - gm.a11) / (2 * h2), (gp.a12 - gm.a12) / (2 * h2),
                   (gp.a21 - gm.a21) / (2 * h2), (gp.a22 - gm.a22) / (2 * h2)};
        }
        // f_i + 1/2 sum_{j,k} g_jk d_j g_ik
        Vec2 f = base_drift(p);
        f.c1 += 0.5 * (g.a11 * d1g.a11 + g.a12 * d1g.a12 + g.a21 * d2g.a11 + g.a22 * d2g.a12);
        f.c2 += 0.5 * (g.a11 * d1g.a21 + g.a12 * d1g.a22 + g.a21 * d2g.a21 + g.a22 * d2g.a22);
        return f;
    };

    OscillatorModel out = model;
    out.drift = corrected;
    out.interpretation = Interpretation::Ito;
    out.kernel = KernelId::Generic;
    return out;
}

const std::vector<ModelPreset>& model_presets() {
    static const std::vector<ModelPreset> presets = [] {
        std::vector<ModelPreset> v;
        ModelPreset p;

        p.id = PresetId::IsotropicSL;
        p.name = "isotropic-sl";
        p.summary = "Stuart-Landau oscillator with isotropic additive noise (spoke isochrons)";
        p.defaults = {{"omega", 1.0}, {"gamma", 1.0}, {"D", 0.01}};
        p.coords = Coords::Polar;
        p.rotation_sign = RotationSign::CCW;
        p.reference_tbar = kTwoPi;
        p.default_dt = 1e-3;
        v.push_back(p);

        p.id = PresetId::AntirotSL;
        p.name = "antirot-sl";
        p.summary = "Newby-Schwemmer oscillator with antirotating phase (hook isochrons)";
        p.defaults = {{"omega", 1.0}, {"gamma", 15.0}, {"c", -15.0}, {"D", 0.198}};
        p.rotation_sign = RotationSign::CCW;
        p.reference_tbar = 11.89;
        p.default_dt = 1e-4;
        v.push_back(p);

        p.id = PresetId::CounterrotSL;
        p.name = "counterrot-sl";
        p.summary = "Stuart-Landau oscillator with counterrotating phase outside the limit cycle";
        p.defaults = {{"omega", 1.0}, {"gamma", 15.0}, {"c", 4.0}, {"D", 0.18}};
        p.reference_tbar = 6.284;
        p.default_dt = 1e-4;
        v.push_back(p);

        // The published figure quotes sigma = 0.2 for this model; with the
        // sqrt(2D) noise convention used here that is D = sigma^2/2 = 0.02
        // (validated against the reported mean period 20.93).
        p.id = PresetId::YPolarizedSL;
        p.name = "ypolarized-sl";
        p.summary = "Stuart-Landau oscillator with y-polarized (single-source) noise";
        p.defaults = {{"omega", 1.99}, {"kappa", 1.0}, {"D", 0.02}};
        p.reference_tbar = 20.93;
        p.default_dt = 1e-3;
        v.push_back(p);

        p.id = PresetId::Heteroclinic;
        p.name = "heteroclinic";
        p.summary = "noisy heteroclinic oscillator on the punctured square (clockwise)";
        p.defaults = {{"alpha", 0.1}, {"D", 0.01125}};
        p.coords = Coords::Cartesian;
        p.rotation_sign = RotationSign::CW;
        p.reference_tbar = 16.23;
        p.default_dt = 1e-3;
        v.push_back(p);
        return v;
    }();
    return presets;
}

const ModelPreset& preset_info(PresetId id) {
    for (const auto& p : model_presets())
        if (p.id == id) return p;
    throw ModelError("unknown preset id");
}

std::optional<PresetId> preset_by_name(const std::string& name) {
    for (const auto& p : model_presets())
        if (p.name == name) return p.id;
    return std::nullopt;
}

namespace {

Mat2 additive_noise(double amp) { return {amp, 0.0, 0.0, amp}; }

OscillatorModel make_isotropic(const std::map<std::string, double>& pm) {
    const double omega = param(pm, "omega"), gamma = param(pm, "gamma");
    const double amp = std::sqrt(2.0 * param(pm, "D"));
    OscillatorModel m;
    m.drift = [omega, gamma](const Point2& p) -> Vec2 {
        const double r = p.c2;
        return {omega, -gamma * r * (r * r - 1.0)};
    };
    m.noise = [amp](const Point2&) { return additive_noise(amp); };
    m.noise_jacobian = [](const Point2&) { return std::pair<Mat2, Mat2>{{}, {}}; };
    m.coords = Coords::Polar;
    m.kernel = KernelId::IsotropicSL;
    return m;
}

OscillatorModel make_antirot(const std::map<std::string, double>& pm) {
    const double omega = param(pm, "omega"), gamma = param(pm, "gamma"), c = param(pm, "c");
    const double amp = std::sqrt(2.0 * param(pm, "D"));
    OscillatorModel m;
    m.drift = [omega, gamma, c](const Point2& p) -> Vec2 {
        const double r = p.c2, d = 1.0 - r;
        return {omega + omega * gamma * c * d * d, -gamma * r * (r * r - 1.0)};
    };
    m.noise = [amp](const Point2&) { return additive_noise(amp); };
    m.noise_jacobian = [](const Point2&) { return std::pair<Mat2, Mat2>{{}, {}}; };
    m.coords = Coords::Polar;
    m.kernel = KernelId::AntirotSL;
    return m;
}

OscillatorModel make_counterrot(const std::map<std::string, double>& pm) {
    const double omega = param(pm, "omega"), gamma = param(pm, "gamma"), c = param(pm, "c");
    const double amp = std::sqrt(2.0 * param(pm, "D"));
    OscillatorModel m;
    m.drift = [omega, gamma, c](const Point2& p) -> Vec2 {
        const double r = p.c2;
        return {omega + gamma * c * (1.0 - r * r), -gamma * r * (r * r - 1.0)};
    };
    m.noise = [amp](const Point2&) { return additive_noise(amp); };
    m.noise_jacobian = [](const Point2&) { return std::pair<Mat2, Mat2>{{}, {}}; };
    m.coords = Coords::Polar;
    m.kernel = KernelId::CounterrotSL;
    return m;
}

// Shared noise matrix of the y-polarized model: one source drives both
// coordinates, so the second column is identically zero and det G = 0.
Mat2 ypol_noise(double amp, const Point2& p) {
    return {amp * std::sin(p.c1), 0.0, amp * p.c2 * std::cos(p.c1), 0.0};
}

OscillatorModel make_ypolarized(const std::map<std::string, double>& pm) {
    const double omega = param(pm, "omega"), kappa = param(pm, "kappa"), D = param(pm, "D");
    const double amp = std::sqrt(2.0 * D);
    OscillatorModel m;
    m.drift = [omega, kappa, D](const Point2& p) -> Vec2 {
        const double th = p.c1, r = p.c2;
        const double ct = std::cos(th), st = std::sin(th);
        return {omega + r * ct - kappa * r * r + D * ct * st,
                r * (1.0 - r * r) + r * D * (ct * ct - st * st)};
    };
    m.noise = [amp](const Point2& p) { return ypol_noise(amp, p); };
    m.noise_jacobian = [amp](const Point2& p) {
        const double ct = std::cos(p.c1), st = std::sin(p.c1);
        Mat2 d1 = {amp * ct, 0.0, -amp * p.c2 * st, 0.0};
        Mat2 d2 = {0.0, 0.0, amp * ct, 0.0};
        return std::pair<Mat2, Mat2>{d1, d2};
    };
    m.coords = Coords::Polar;
    m.kernel = KernelId::YPolarizedSL;
    m.single_noise_source = true;
    return m;
}

OscillatorModel make_heteroclinic(const std::map<std::string, double>& pm) {
    const double alpha = param(pm, "alpha");
    const double amp = std::sqrt(2.0 * param(pm, "D"));
    OscillatorModel m;
    m.drift = [alpha](const Point2& p) -> Vec2 {
        const double x = p.c1, y = p.c2;
        return {std::cos(x) * std::sin(y) + alpha * std::sin(2.0 * x),
                -std::sin(x) * std::cos(y) + alpha * std::sin(2.0 * y)};
    };
    m.noise = [amp](const Point2&) { return additive_noise(amp); };
    m.noise_jacobian = [](const Point2&) { return std::pair<Mat2, Mat2>{{}, {}}; };
    m.coords = Coords::Cartesian;
    m.rotation_sign = RotationSign::CW;
    m.kernel = KernelId::Heteroclinic;
    return m;
}

}  // namespace

OscillatorModel builtin_model(PresetId id, const std::map<std::string, double>& overrides) {
    const ModelPreset& info = preset_info(id);
    auto pm = merge_params(info, overrides);
    OscillatorModel m;
    switch (id) {
        case PresetId::IsotropicSL: m = make_isotropic(pm); break;
        case PresetId::AntirotSL: m = make_antirot(pm); break;
        case PresetId::CounterrotSL: m = make_counterrot(pm); break;
        case PresetId::YPolarizedSL: m = make_ypolarized(pm); break;
        case PresetId::Heteroclinic: m = make_heteroclinic(pm); break;
    }
    m.interpretation = Interpretation::Ito;
    m.rotation_sign = info.rotation_sign;
    m.name = info.name;
    m.params = pm;
    return m;
}

OscillatorModel builtin_model(const std::string& name,
                              const std::map<std::string, double>& overrides) {
    auto id = preset_by_name(name);
    if (!id) throw ModelError("unknown preset '" + name + "'");
    return builtin_model(*id, overrides);
}

OscillatorModel ypolarized_stratonovich(const std::map<std::string, double>& overrides) {
    const ModelPreset& info = preset_info(PresetId::YPolarizedSL);
    auto pm = merge_params(info, overrides);
    const double omega = param(pm, "omega"), kappa = param(pm, "kappa"), D = param(pm, "D");
    const double amp = std::sqrt(2.0 * D);
    OscillatorModel m;
    m.drift = [omega, kappa](const Point2& p) -> Vec2 {
        const double th = p.c1, r = p.c2;
        return {omega + r * std::cos(th) - kappa * r * r, r * (1.0 - r * r)};
    };
    m.noise = [amp](const Point2& p) { return ypol_noise(amp, p); };
    m.noise_jacobian = [amp](const Point2& p) {
        const double ct = std::cos(p.c1), st = std::sin(p.c1);
        Mat2 d1 = {amp * ct, 0.0, -amp * p.c2 * st, 0.0};
        Mat2 d2 = {0.0, 0.0, amp * ct, 0.0};
        return std::pair<Mat2, Mat2>{d1, d2};
    };
    m.interpretation = Interpretation::Stratonovich;
    m.coords = Coords::Polar;
    m.rotation_sign = RotationSign::CCW;
    m.name = "ypolarized-sl-stratonovich";
    m.params = pm;
    m.single_noise_source = true;
    return m;
}

OscillatorModel expression_model(const std::vector<std::string>& drift_exprs,
                                 const std::vector<std::vector<std::string>>& noise_exprs,
                                 Coords coords, Interpretation interpretation,
                                 RotationSign rotation_sign) {
    if (drift_exprs.size() != 2) throw ConfigError("custom model: drift needs 2 expressions");
    if (noise_exprs.size() != 2 || noise_exprs[0].size() != 2 || noise_exprs[1].size() != 2)
        throw ConfigError("custom model: noise needs a 2x2 expression matrix");

    auto f1 = Expression::parse(drift_exprs[0]);
    auto f2 = Expression::parse(drift_exprs[1]);
    auto g11 = Expression::parse(noise_exprs[0][0]);
    auto g12 = Expression::parse(noise_exprs[0][1]);
    auto g21 = Expression::parse(noise_exprs[1][0]);
    auto g22 = Expression::parse(noise_exprs[1][1]);

    OscillatorModel m;
    m.drift = [f1, f2](const Point2& p) -> Vec2 { return {f1.eval(p), f2.eval(p)}; };
    m.noise = [g11, g12, g21, g22](const Point2& p) -> Mat2 {
        return {g11.eval(p), g12.eval(p), g21.eval(p), g22.eval(p)};
    };
    m.interpretation = interpretation;
    m.coords = coords;
    m.rotation_sign = rotation_sign;
    m.name = "custom";
    if (interpretation == Interpretation::Stratonovich) return stratonovich_to_ito(m);
    return m;
}

NoiseValidation validate_noise(const OscillatorModel& model, int n1, int n2, double lo1,
                               double hi1, double lo2, double hi2) {
    NoiseValidation out;
    out.min_g11 = out.min_g22 = out.min_abs_det = std::numeric_limits<double>::infinity();
    const double h1 = (hi1 - lo1) / n1;
    const double h2 = (hi2 - lo2) / n2;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            Point2 p{lo1 + (i + 0.5) * h1, lo2 + (j + 0.5) * h2};
            auto [g, G] = eval_diffusion(model, p);
            out.min_g11 = std::min(out.min_g11, G.a11);
            out.min_g22 = std::min(out.min_g22, G.a22);
            out.min_abs_det = std::min(out.min_abs_det, std::abs(G.det()));
        }
    }
    out.amplitude_ok = out.min_g11 > 0.0 && out.min_g22 > 0.0;
    out.nondegenerate = out.min_abs_det > 0.0;
    if (!out.amplitude_ok)
        out.message = "noise amplitude vanishes inside the domain (G11 or G22 <= 0)";
    else if (!out.nondegenerate)
        out.message = "noise is singular (det G = 0); proceeding, solutions may still be valid";
    return out;
}

}  // namespace mrt
