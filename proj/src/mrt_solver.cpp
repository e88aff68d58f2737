#include "mrt/mrt_solver.hpp"

#include <cmath>

#include "mrt/linear_solve.hpp"

namespace mrt {

MrtSolution solve_mrt(const OscillatorModel& model, const Grid& grid, double tbar,
                      double pin_value, int pin_node) {
    if (pin_node < 0) pin_node = grid.default_pin();
    LinearSystem sys = assemble_backward(model, grid, tbar, pin_node, pin_value);
    Eigen::VectorXd x = solve_sparse_lu(sys.matrix, sys.rhs);

    MrtSolution out;
    out.tbar = tbar;
    out.pin_node = pin_node;
    out.pin_value = pin_value;
    out.cut = grid.describe_cut();

    const int n = grid.num_nodes();
    out.T.grid = &grid;
    out.T.name = "T";
    out.T.units = "time";
    out.T.values.assign(n, pin_value);
    for (int node = 0; node < n; ++node) {
        const int u = sys.unknown_of_node[node];
        if (u >= 0) out.T.values[node] = x[u];
    }

    out.residual_abs = max_abs_residual(sys.matrix, x, sys.rhs);
    out.residual_rel = relative_residual(sys.matrix, x, sys.rhs);
    if (out.residual_rel > 1e-8)
        throw SolveError("backward solve residual " + std::to_string(out.residual_rel) +
                         " exceeds 1e-8");

    out.theta_raw.grid = out.theta.grid = &grid;
    out.theta_raw.name = "Theta_raw";
    out.theta.name = "Theta";
    out.theta.units = out.theta_raw.units = "rad";
    out.theta_raw.values.resize(n);
    out.theta.values.resize(n);
    const double scale = kTwoPi / tbar;
    for (int k = 0; k < n; ++k) {
        out.theta_raw.values[k] = (pin_value - out.T.values[k]) * scale;
        out.theta.values[k] = wrap_angle(out.theta_raw.values[k]);
    }
    return out;
}

double residual_check(const MrtSolution& solution, const LinearSystem& system) {
    Eigen::VectorXd x(system.dim());
    for (int u = 0; u < system.dim(); ++u)
        x[u] = solution.T.values[system.node_of_unknown[u]];
    return max_abs_residual(system.matrix, x, system.rhs);
}

namespace {

double circular_mean(const std::vector<double>& d) {
    double s = 0.0, c = 0.0;
    for (double v : d) {
        s += std::sin(v);
        c += std::cos(v);
    }
    return std::atan2(s, c);
}

double aligned_max_abs_dtheta(const ScalarField& a, const ScalarField& b) {
    std::vector<double> d(a.values.size());
    for (std::size_t k = 0; k < d.size(); ++k)
        d[k] = principal_angle(a.values[k] - b.values[k]);
    const double offset = circular_mean(d);
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(principal_angle(v - offset)));
    return m;
}

double cut_gradient_metric(const OscillatorModel& model, const Grid& grid,
                           const MrtSolution& sol, double tbar_used) {
    const int jsign = jump_sign(model, grid);
    double metric = 0.0;
    for (const CutPair& cp : grid.cut()) {
        const int a_left = grid.neighbor(cp.a, -1, 0);
        if (a_left < 0) continue;
        const double tb_on_a = sol.T.values[cp.b] - jsign * tbar_used;
        const double fwd = (tb_on_a - sol.T.values[cp.a]) / grid.h1;
        const double bwd = (sol.T.values[cp.a] - sol.T.values[a_left]) / grid.h1;
        metric = std::max(metric, std::abs(fwd - bwd) * grid.h1);
    }
    return metric / sol.tbar;
}

}  // namespace

double cut_invariance_check(const OscillatorModel& model, const Grid& grid, double tbar) {
    if (grid.kind != GridKind::PolarAnnulus)
        throw GridError("cut_invariance_check requires a polar grid");
    Grid rotated = build_polar_grid(grid.n1, grid.n2, grid.lo2, grid.hi2,
                                    grid.cut_column + grid.n1 / 2);
    MrtSolution a = solve_mrt(model, grid, tbar);
    MrtSolution b = solve_mrt(model, rotated, tbar);
    return aligned_max_abs_dtheta(a.theta, b.theta);
}

std::vector<TbarSensitivityEntry> tbar_sensitivity(const OscillatorModel& model,
                                                   const Grid& grid, double tbar,
                                                   const std::vector<double>& deltas) {
    MrtSolution base = solve_mrt(model, grid, tbar);
    std::vector<TbarSensitivityEntry> out;
    for (double delta : deltas) {
        TbarSensitivityEntry e;
        e.delta = delta;
        MrtSolution sol = delta == 0.0 ? base : solve_mrt(model, grid, tbar * (1.0 + delta));
        e.residual_rel = sol.residual_rel;
        e.max_dtheta = aligned_max_abs_dtheta(sol.theta, base.theta);
        e.cut_gradient_metric = cut_gradient_metric(model, grid, sol, tbar * (1.0 + delta));
        e.flagged = e.cut_gradient_metric > 0.01;
        out.push_back(e);
    }
    return out;
}

}  // namespace mrt
