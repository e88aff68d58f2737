#pragma once

#include "mrt/stationary.hpp"

namespace mrt {

struct MrtSolution {
    ScalarField T;          // mean return time, pinned branch
    ScalarField theta;      // MRT phase reduced to [0, 2pi)
    ScalarField theta_raw;  // unreduced phase; jumps by exactly 2pi across the cut
    double tbar = 0.0;
    int pin_node = -1;
    double pin_value = 0.0;
    double residual_abs = 0.0;
    double residual_rel = 0.0;
    std::string cut;
};

// Assembles the jump-periodic backward system, pins one node (default: the
// grid's pin convention - outer cut-adjacent node for polar grids, the
// northwest corner for the punctured square - at value 100), solves by
// sparse LU and forms Theta = (pin_value - T) * 2pi/tbar, zero at the pin.
// Throws if the relative residual exceeds 1e-8.
MrtSolution solve_mrt(const OscillatorModel& model, const Grid& grid, double tbar,
                      double pin_value = 100.0, int pin_node = -1);

// Max over non-pinned rows of |row.T - rhs|.
double residual_check(const MrtSolution& solution, const LinearSystem& system);

// Solves with the seam at theta=0 and rotated half a turn; returns the max
// pointwise |dTheta| after removing the circular-mean offset. Polar only.
double cut_invariance_check(const OscillatorModel& model, const Grid& grid, double tbar);

struct TbarSensitivityEntry {
    double delta = 0.0;
    double residual_rel = 0.0;
    double max_dtheta = 0.0;          // vs the unperturbed solution, aligned
    double cut_gradient_metric = 0.0; // slope mismatch across the cut, in units of tbar
    bool flagged = false;             // metric above the smoothness threshold
};

// Re-solves with tbar*(1+delta) for each delta; diagnostic only (the method
// tolerates a few percent, gross errors leave a discontinuity at the cut).
std::vector<TbarSensitivityEntry> tbar_sensitivity(const OscillatorModel& model,
                                                   const Grid& grid, double tbar,
                                                   const std::vector<double>& deltas);

}  // namespace mrt
