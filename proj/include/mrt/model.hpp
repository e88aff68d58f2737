#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrt/common.hpp"

namespace mrt {

enum class Interpretation { Ito, Stratonovich };
enum class Coords { Cartesian, Polar };
enum class RotationSign { CCW, CW };

inline int sign_of(RotationSign s) { return s == RotationSign::CCW ? +1 : -1; }

enum class PresetId { IsotropicSL, AntirotSL, CounterrotSL, YPolarizedSL, Heteroclinic };

// Identifies a hand-written Euler-Maruyama kernel in the montecarlo module.
// Generic models fall back to evaluating the std::function members per step.
enum class KernelId { Generic, IsotropicSL, AntirotSL, CounterrotSL, YPolarizedSL, Heteroclinic };

// Planar stochastic oscillator: dX = f(X) dt + g(X) dW with X = (c1, c2).
// For Coords::Polar, c1 is the angle theta and c2 the radius r; the SDE is
// understood directly in these coordinates (no metric terms are implied).
// Models are pure functions of position and immutable after construction;
// concurrent evaluation is safe.
struct OscillatorModel {
    std::function<Vec2(const Point2&)> drift;
    std::function<Mat2(const Point2&)> noise;
    // Optional analytic derivatives of g (d/dc1, d/dc2), used by the
    // Stratonovich drift correction; central differences otherwise.
    std::function<std::pair<Mat2, Mat2>(const Point2&)> noise_jacobian;

    Interpretation interpretation = Interpretation::Ito;
    Coords coords = Coords::Cartesian;
    RotationSign rotation_sign = RotationSign::CCW;

    std::string name = "custom";
    std::map<std::string, double> params;
    KernelId kernel = KernelId::Generic;
    // True when g has an all-zero second column (single noise source); the
    // stepper then consumes one normal draw per step instead of two.
    bool single_noise_source = false;
};

// f(p) with a finiteness check.
Vec2 eval_drift(const OscillatorModel& model, const Point2& p);

// Returns (g, G = g g^T); checks entries are finite.
std::pair<Mat2, Mat2> eval_diffusion(const OscillatorModel& model, const Point2& p);

// Equivalent Ito model: drift gains 1/2 sum_{j,k} g_jk d_j g_ik, noise and
// everything else unchanged. Requires interpretation == Stratonovich.
OscillatorModel stratonovich_to_ito(const OscillatorModel& model, double h_fd_rel = 1e-6);

struct ModelPreset {
    PresetId id;
    std::string name;
    std::string summary;
    std::map<std::string, double> defaults;
    Coords coords;
    RotationSign rotation_sign;
    double reference_tbar;   // mean period reported for the default parameters
    double default_dt;       // Euler-Maruyama step used in the original study
    // Default grid: polar (n x n over [r_inner, r_outer]) or Cartesian
    // punctured square (n x n, inner side epsilon).
    int default_n = 251;
    double r_inner = 0.1, r_outer = 2.0;
    double epsilon = 2.0 * kPi / 125.0;
};

const std::vector<ModelPreset>& model_presets();
const ModelPreset& preset_info(PresetId id);
std::optional<PresetId> preset_by_name(const std::string& name);

// Fully-formed Ito model for a preset; `overrides` replaces individual
// default parameters, unknown keys are an error.
OscillatorModel builtin_model(PresetId id, const std::map<std::string, double>& overrides = {});
OscillatorModel builtin_model(const std::string& name,
                              const std::map<std::string, double>& overrides = {});

// The y-polarized oscillator in its Stratonovich form (the printed Ito drift
// must be recovered exactly by stratonovich_to_ito; used by tests).
OscillatorModel ypolarized_stratonovich(const std::map<std::string, double>& overrides = {});

// Custom model from expression strings (drift[2], noise[2][2]).
OscillatorModel expression_model(const std::vector<std::string>& drift_exprs,
                                 const std::vector<std::vector<std::string>>& noise_exprs,
                                 Coords coords, Interpretation interpretation,
                                 RotationSign rotation_sign);

struct NoiseValidation {
    bool amplitude_ok = true;      // G11 > 0 and G22 > 0 on the sample lattice
    bool nondegenerate = true;     // det G != 0 everywhere (warning only)
    double min_g11 = 0.0, min_g22 = 0.0, min_abs_det = 0.0;
    std::string message;
};

// Samples G on a cell-centered lattice covering the given coordinate
// rectangle. Cell centers avoid the measure-zero zeros that can sit exactly
// on node lines (the y-polarized noise vanishes on theta = 0).
NoiseValidation validate_noise(const OscillatorModel& model, int n1, int n2, double lo1,
                               double hi1, double lo2, double hi2);

}  // namespace mrt
