#pragma once

#include <string>
#include <vector>

#include "mrt/operators.hpp"

namespace mrt {

struct ScalarField {
    const Grid* grid = nullptr;
    std::vector<double> values;
    std::string name;
    std::string units;

    double max_abs() const;
};

struct FluxField {
    const Grid* grid = nullptr;
    std::vector<double> j1, j2;
};

struct StationaryResult {
    ScalarField rho;
    double residual = 0.0;    // ||L rho||_inf / ||rho||_inf over non-replaced rows
    double negativity = 0.0;  // most negative raw entry / max entry (<= 0)
    int replaced_row_node = -1;
};

// Normalized null vector of the forward operator, computed by replacing one
// row with the quadrature normalization constraint and solving the resulting
// nonsingular system. Residual gate 1e-8; entries below -1e-10*max are a
// discretization failure, smaller negatives are clipped.
StationaryResult solve_stationary_density(const LinearSystem& forward, const Grid& grid);

// Nodal stationary flux J_j = f_j rho - 1/2 sum_k d_k(G_jk rho), with the
// same centered stencils as assembly (one-sided at boundaries).
FluxField stationary_flux(const OscillatorModel& model, const Grid& grid,
                          const ScalarField& rho);

struct MeanPeriodResult {
    double tbar = 0.0;
    double cut_flux = 0.0;  // signed flux through the cut section, CCW-positive
    double spread = 0.0;    // (max-min)/|mean| over the section family
    RotationSign rotation = RotationSign::CCW;
    double tbar_area = 0.0;  // 2*pi over the whole-domain angular-flux integral
    std::vector<double> section_fluxes;
    double max_boundary_normal_flux = 0.0;
};

// tbar = 1/|section flux| through the cut, cross-checked over 8
// rotated/translated sections and against the area-integral form.
MeanPeriodResult mean_period(const FluxField& flux, const Grid& grid);

}  // namespace mrt
