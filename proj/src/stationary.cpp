#include "mrt/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "mrt/linear_solve.hpp"

namespace mrt {

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

int normalization_row_node(const Grid& grid) {
    int node = grid.kind == GridKind::PolarAnnulus
                   ? grid.id(grid.n1 / 4, grid.n2 / 2)
                   : grid.id((grid.n1 - 1) / 4, (grid.n2 - 1) / 2);
    if (node >= 0) return node;
    for (int k = 0; k < grid.num_nodes(); ++k)
        if (grid.geometric_class(k) == NodeClass::Interior) return k;
    throw SolveError("no interior node available for the normalization row");
}

}  // namespace

StationaryResult solve_stationary_density(const LinearSystem& forward, const Grid& grid) {
    const int n = forward.dim();
    if (n != grid.num_nodes()) throw SolveError("forward system does not match grid");
    const int r0 = normalization_row_node(grid);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(forward.matrix.nonZeros()) + n);
    for (int k = 0; k < forward.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(forward.matrix, k); it; ++it)
            if (it.row() != r0) triplets.emplace_back(it.row(), it.col(), it.value());
    for (int q = 0; q < n; ++q) triplets.emplace_back(r0, q, grid.cell_weight(q));

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.makeCompressed();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[r0] = 1.0;

    Eigen::VectorXd rho = solve_sparse_lu(A, b);

    const double rho_max = rho.cwiseAbs().maxCoeff();
    Eigen::VectorXd res = forward.matrix * rho;
    double resid = 0.0;
    for (int k = 0; k < n; ++k)
        if (k != r0) resid = std::max(resid, std::abs(res[k]));
    resid /= rho_max;
    if (resid > 1e-8)
        throw SolveError("stationary solve residual " + std::to_string(resid) +
                         " exceeds 1e-8: non-unique or badly resolved stationary state");

    double most_negative = 0.0;
    for (int k = 0; k < n; ++k) most_negative = std::min(most_negative, rho[k]);
    const double tol_neg = 1e-10 * rho_max;
    if (most_negative < -tol_neg)
        throw SolveError("stationary density has significant negative entries (" +
                         std::to_string(most_negative / rho_max) +
                         " of max): refine the grid");
    for (int k = 0; k < n; ++k) rho[k] = std::max(rho[k], 0.0);

    double mass = 0.0;
    for (int k = 0; k < n; ++k) mass += grid.cell_weight(k) * rho[k];
    if (!(mass > 0.0)) throw SolveError("stationary density has no mass");

    StationaryResult out;
    out.rho.grid = &grid;
    out.rho.name = "rho_ss";
    out.rho.units = "probability / (dc1 dc2)";
    out.rho.values.resize(n);
    for (int k = 0; k < n; ++k) out.rho.values[k] = rho[k] / mass;
    out.residual = resid;
    out.negativity = most_negative / rho_max;
    out.replaced_row_node = r0;
    return out;
}

namespace {

// d(M)/d(axis) at a node from nodal products, centered where possible.
double product_deriv(const Grid& grid, const std::vector<double>& M, int node, int axis) {
    const double h = axis == 1 ? grid.h1 : grid.h2;
    const int di = axis == 1 ? 1 : 0, dj = axis == 1 ? 0 : 1;
    const int plus = grid.neighbor(node, di, dj);
    const int minus = grid.neighbor(node, -di, -dj);
    if (plus >= 0 && minus >= 0) return (M[plus] - M[minus]) / (2.0 * h);
    const int s = plus < 0 ? +1 : -1;
    const int n1 = grid.neighbor(node, -s * di, -s * dj);
    const int n2 = grid.neighbor(node, -2 * s * di, -2 * s * dj);
    if (n1 < 0 || n2 < 0) throw SolveError("flux stencil fell outside the domain");
    return s * (3.0 * M[node] - 4.0 * M[n1] + M[n2]) / (2.0 * h);
}

}  // namespace

FluxField stationary_flux(const OscillatorModel& model, const Grid& grid,
                          const ScalarField& rho) {
    const int n = grid.num_nodes();
    if (static_cast<int>(rho.values.size()) != n)
        throw SolveError("density field does not match grid");

    std::vector<double> m11(n), m12(n), m22(n);
    std::vector<Vec2> f(n);
    for (int k = 0; k < n; ++k) {
        const Point2 p = grid.pos(k);
        f[k] = eval_drift(model, p);
        const Mat2 G = eval_diffusion(model, p).second;
        m11[k] = G.a11 * rho.values[k];
        m12[k] = G.a12 * rho.values[k];
        m22[k] = G.a22 * rho.values[k];
    }

    FluxField out;
    out.grid = &grid;
    out.j1.resize(n);
    out.j2.resize(n);
    for (int k = 0; k < n; ++k) {
        out.j1[k] = f[k].c1 * rho.values[k] -
                    0.5 * (product_deriv(grid, m11, k, 1) + product_deriv(grid, m12, k, 2));
        out.j2[k] = f[k].c2 * rho.values[k] -
                    0.5 * (product_deriv(grid, m12, k, 1) + product_deriv(grid, m22, k, 2));
    }
    return out;
}

namespace {

// Signed CCW flux through a grid-line section given as (node, crossing
// component sign) samples; trapezoid weights with halves at the endpoints.
double section_flux(const Grid& grid, const FluxField& flux,
                    const std::vector<int>& nodes, bool axis1_component, double ccw_sign,
                    double h) {
    double s = 0.0;
    const std::size_t m = nodes.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double w = (k == 0 || k + 1 == m) ? 0.5 * h : h;
        const double j = axis1_component ? flux.j1[nodes[k]] : flux.j2[nodes[k]];
        s += w * j;
    }
    return ccw_sign * s;
}

}  // namespace

MeanPeriodResult mean_period(const FluxField& flux, const Grid& grid) {
    MeanPeriodResult out;
    std::vector<double> fluxes;
    double mean_abs_integrand = 0.0;

    if (grid.kind == GridKind::PolarAnnulus) {
        // 8 rotated theta = const sections, the first at the cut
        for (int k = 0; k < 8; ++k) {
            const int i = (grid.cut_column + k * grid.n1 / 8) % grid.n1;
            std::vector<int> nodes(grid.n2);
            for (int j = 0; j < grid.n2; ++j) nodes[j] = grid.id(i, j);
            fluxes.push_back(section_flux(grid, flux, nodes, true, +1.0, grid.h2));
            for (int j = 0; j < grid.n2; ++j)
                mean_abs_integrand += std::abs(flux.j1[nodes[j]]) * grid.h2;
        }
        mean_abs_integrand /= 8.0;

        double s_area = 0.0;
        for (int k = 0; k < grid.num_nodes(); ++k) s_area += grid.cell_weight(k) * flux.j1[k];
        out.tbar_area = kTwoPi / std::abs(s_area);
    } else {
        // half-line sections from the puncture to the outer boundary;
        // normals oriented so that positive flux means CCW rotation
        const int ic = grid.cut_column;
        auto column_section = [&](int i, int dir) {  // dir +1: upward, -1: downward
            std::vector<int> nodes;
            for (int j = (grid.n2 - 1) / 2; j >= 0 && j < grid.n2; j += dir) {
                const int node = grid.id(i, j);
                if (node >= 0) nodes.push_back(node);
            }
            return nodes;
        };
        auto row_section = [&](int j, int dir) {
            std::vector<int> nodes;
            for (int i = (grid.n1 - 1) / 2; i >= 0 && i < grid.n1; i += dir) {
                const int node = grid.id(i, j);
                if (node >= 0) nodes.push_back(node);
            }
            return nodes;
        };
        const int jc = (grid.n2 - 1) / 2;
        struct Sec {
            std::vector<int> nodes;
            bool axis1;
            double sign;
        };
        std::vector<Sec> secs;
        for (int off : {0, -1, +1}) {
            if (std::abs(off) * grid.h1 < 0.5 * grid.epsilon || off == 0) {
                secs.push_back({column_section(ic + off, +1), true, -1.0});  // up: n=(-1,0)
                secs.push_back({column_section(ic + off, -1), true, +1.0});  // down: n=(+1,0)
            }
        }
        secs.push_back({row_section(jc, +1), false, +1.0});   // right: n=(0,+1)
        secs.push_back({row_section(jc, -1), false, -1.0});   // left: n=(0,-1)

        for (auto& sec : secs) {
            if (sec.nodes.size() < 2) continue;
            fluxes.push_back(section_flux(grid, flux, sec.nodes, sec.axis1, sec.sign, grid.h2));
            for (int nd : sec.nodes)
                mean_abs_integrand +=
                    std::abs(sec.axis1 ? flux.j1[nd] : flux.j2[nd]) * grid.h2;
        }
        mean_abs_integrand /= static_cast<double>(fluxes.size());

        double s_area = 0.0;
        for (int k = 0; k < grid.num_nodes(); ++k) {
            const Point2 p = grid.pos(k);
            const double r2 = p.c1 * p.c1 + p.c2 * p.c2;
            s_area += grid.cell_weight(k) * (p.c1 * flux.j2[k] - p.c2 * flux.j1[k]) / r2;
        }
        out.tbar_area = kTwoPi / std::abs(s_area);
    }

    const double primary = fluxes.front();
    if (std::abs(primary) < 1e-8 * std::max(1e-300, mean_abs_integrand))
        throw SolveError("no net rotation: section flux is zero within tolerance");

    double fmin = fluxes[0], fmax = fluxes[0], fsum = 0.0;
    for (double v : fluxes) {
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
        fsum += v;
    }
    out.tbar = 1.0 / std::abs(primary);
    out.cut_flux = primary;
    out.spread = (fmax - fmin) / std::abs(fsum / static_cast<double>(fluxes.size()));
    out.rotation = primary > 0.0 ? RotationSign::CCW : RotationSign::CW;
    out.section_fluxes = std::move(fluxes);

    double bmax = 0.0;
    for (int k = 0; k < grid.num_nodes(); ++k) {
        const auto [s1, s2] = grid.normal(k);
        const NodeClass cls = grid.geometric_class(k);
        if (cls != NodeClass::ReflectInner && cls != NodeClass::ReflectOuter) continue;
        if (s1 != 0 && s2 != 0) continue;  // corners have no single normal
        bmax = std::max(bmax, std::abs(s1 != 0 ? flux.j1[k] : flux.j2[k]));
    }
    out.max_boundary_normal_flux = bmax;
    return out;
}

}  // namespace mrt
