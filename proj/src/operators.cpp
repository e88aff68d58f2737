#include "mrt/operators.hpp"

#include <algorithm>
#include <cmath>

namespace mrt {

namespace {

// Small accumulator for one matrix row; merges duplicate column entries.
class Row {
  public:
    void add(int node, double coef) {
        if (coef == 0.0) return;
        if (node < 0) throw SolveError("stencil referenced a node outside the domain");
        for (auto& [n, c] : entries_) {
            if (n == node) {
                c += coef;
                return;
            }
        }
        entries_.emplace_back(node, coef);
    }
    std::vector<std::pair<int, double>>& entries() { return entries_; }

  private:
    std::vector<std::pair<int, double>> entries_;
};

struct Coeffs {
    Vec2 f;
    Mat2 G;
};

std::vector<Coeffs> node_coeffs(const OscillatorModel& model, const Grid& grid) {
    std::vector<Coeffs> c(grid.num_nodes());
    for (int n = 0; n < grid.num_nodes(); ++n) {
        const Point2 p = grid.pos(n);
        c[n].f = eval_drift(model, p);
        c[n].G = eval_diffusion(model, p).second;
    }
    return c;
}

}  // namespace

int jump_sign(const OscillatorModel& model, const Grid& grid) {
    const int s = sign_of(model.rotation_sign);
    // Crossing a->b is +theta on polar grids (downstream iff CCW) and +x at
    // the top of the Cartesian domain (downstream iff CW).
    return grid.kind == GridKind::PolarAnnulus ? s : -s;
}

void LinearSystem::dump_triplets(std::ostream& os) const {
    os << dim() << " " << dim() << "\n";
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

namespace {

// ---------------------------------------------------------------------------
// backward operator rows
// ---------------------------------------------------------------------------

class BackwardAssembler {
  public:
    BackwardAssembler(const OscillatorModel& model, const Grid& grid)
        : grid_(grid), c_(node_coeffs(model, grid)) {}

    // One-sided second-order d/d(axis) toward the interior (side = +1 means
    // the stencil extends in -axis direction, i.e. the boundary is on +axis).
    void add_one_sided(Row& row, int node, int axis, int side, double coef) const {
        const double h = axis == 1 ? grid_.h1 : grid_.h2;
        auto nb = [&](int k) {
            return axis == 1 ? grid_.neighbor(node, -side * k, 0)
                             : grid_.neighbor(node, 0, -side * k);
        };
        row.add(node, coef * side * 3.0 / (2.0 * h));
        row.add(nb(1), -coef * side * 4.0 / (2.0 * h));
        row.add(nb(2), coef * side * 1.0 / (2.0 * h));
    }

    void add_centered_first(Row& row, int node, int axis, double coef) const {
        const double h = axis == 1 ? grid_.h1 : grid_.h2;
        const int di = axis == 1 ? 1 : 0, dj = axis == 1 ? 0 : 1;
        row.add(grid_.neighbor(node, di, dj), coef / (2.0 * h));
        row.add(grid_.neighbor(node, -di, -dj), -coef / (2.0 * h));
    }

    void add_centered_second(Row& row, int node, int axis, double coef) const {
        const double h = axis == 1 ? grid_.h1 : grid_.h2;
        const int di = axis == 1 ? 1 : 0, dj = axis == 1 ? 0 : 1;
        row.add(grid_.neighbor(node, di, dj), coef / (h * h));
        row.add(node, -2.0 * coef / (h * h));
        row.add(grid_.neighbor(node, -di, -dj), coef / (h * h));
    }

    // Centered 4-point cross derivative.
    void add_centered_cross(Row& row, int node, double coef) const {
        const double q = coef / (4.0 * grid_.h1 * grid_.h2);
        row.add(grid_.neighbor(node, +1, +1), q);
        row.add(grid_.neighbor(node, -1, -1), q);
        row.add(grid_.neighbor(node, +1, -1), -q);
        row.add(grid_.neighbor(node, -1, +1), -q);
    }

    // d2/(d1 d2) with the axis-2 derivative one-sided (boundary at side2 in
    // axis 2), centered in axis 1.
    void add_cross_one_sided2(Row& row, int node, int side2, double coef) const {
        for (int d : {+1, -1}) {
            const int col = grid_.neighbor(node, d, 0);
            if (col < 0) throw SolveError("cross stencil fell outside the domain");
            add_one_sided(row, col, 2, side2, coef * d / (2.0 * grid_.h1));
        }
    }

    void add_cross_one_sided_both(Row& row, int node, int side1, int side2,
                                  double coef) const {
        const double h1 = grid_.h1;
        auto col = [&](int k) { return grid_.neighbor(node, -side1 * k, 0); };
        add_one_sided(row, node, 2, side2, coef * side1 * 3.0 / (2.0 * h1));
        add_one_sided(row, col(1), 2, side2, -coef * side1 * 4.0 / (2.0 * h1));
        add_one_sided(row, col(2), 2, side2, coef * side1 * 1.0 / (2.0 * h1));
    }

    Row interior_row(int node, bool cross_centered_ok, int hole_s2) const {
        Row row;
        const auto& [f, G] = c_[node];
        add_centered_first(row, node, 1, f.c1);
        add_centered_first(row, node, 2, f.c2);
        add_centered_second(row, node, 1, 0.5 * G.a11);
        add_centered_second(row, node, 2, 0.5 * G.a22);
        if (G.a12 != 0.0) {
            if (cross_centered_ok)
                add_centered_cross(row, node, G.a12);
            else
                // puncture corner: take the axis-2 derivative one-sided away
                // from the hole so the removed diagonal is never referenced
                add_cross_one_sided2(row, node, -hole_s2, G.a12);
        }
        return row;
    }

    // Reflecting node with a single outward normal component s along `axis`.
    // Ghost elimination via sum_j nu_j sum_k G_jk d_k u = 0.
    Row reflect_row(int node, int axis, int s) const {
        Row row;
        const auto& [f, G] = c_[node];
        const double h1 = grid_.h1, h2 = grid_.h2;

        if (axis == 2) {
            if (std::abs(G.a22) < 1e-300) throw SolveError("degenerate G22 at reflecting node");
            add_centered_first(row, node, 1, f.c1);
            add_centered_second(row, node, 1, 0.5 * G.a11);

            const int interior = grid_.neighbor(node, 0, -s);
            const double cg = f.c2 * s / (2.0 * h2) + 0.5 * G.a22 / (h2 * h2);
            // interior parts of d2 and d22
            row.add(interior, -f.c2 * s / (2.0 * h2) + 0.5 * G.a22 / (h2 * h2));
            row.add(node, -G.a22 / (h2 * h2));
            // ghost value: u_I - s*(2 h2 G21/G22) * du/d1
            row.add(interior, cg);
            const double t = cg * s * (h2 * G.a12) / (G.a22 * h1);
            row.add(grid_.neighbor(node, +1, 0), -t);
            row.add(grid_.neighbor(node, -1, 0), +t);
            if (G.a12 != 0.0) add_cross_one_sided2(row, node, s, G.a12);
        } else {
            if (std::abs(G.a11) < 1e-300) throw SolveError("degenerate G11 at reflecting node");
            add_centered_first(row, node, 2, f.c2);
            add_centered_second(row, node, 2, 0.5 * G.a22);

            const int interior = grid_.neighbor(node, -s, 0);
            const double cg = f.c1 * s / (2.0 * h1) + 0.5 * G.a11 / (h1 * h1);
            row.add(interior, -f.c1 * s / (2.0 * h1) + 0.5 * G.a11 / (h1 * h1));
            row.add(node, -G.a11 / (h1 * h1));
            row.add(interior, cg);
            const double t = cg * s * (h1 * G.a12) / (G.a11 * h2);
            row.add(grid_.neighbor(node, 0, +1), -t);
            row.add(grid_.neighbor(node, 0, -1), +t);
            if (G.a12 != 0.0) {
                // cross derivative one-sided in axis 1, centered in axis 2
                for (int d : {+1, -1}) {
                    const int rownode = grid_.neighbor(node, 0, d);
                    add_one_sided_axis1_into(row, rownode, s, G.a12 * d / (2.0 * h2));
                }
            }
        }
        return row;
    }

    void add_one_sided_axis1_into(Row& row, int node, int side, double coef) const {
        add_one_sided(row, node, 1, side, coef);
    }

    // Outer corner: ghosts in both axes, both normal conditions applied.
    Row corner_row(int node, int s1, int s2) const {
        Row row;
        const auto& [f, G] = c_[node];
        const double h1 = grid_.h1, h2 = grid_.h2;
        if (std::abs(G.a11) < 1e-300 || std::abs(G.a22) < 1e-300)
            throw SolveError("degenerate diffusion at corner node");

        // axis-1 family: ghost at (s1, 0)
        {
            const int interior = grid_.neighbor(node, -s1, 0);
            const double cg = f.c1 * s1 / (2.0 * h1) + 0.5 * G.a11 / (h1 * h1);
            row.add(interior, -f.c1 * s1 / (2.0 * h1) + 0.5 * G.a11 / (h1 * h1));
            row.add(node, -G.a11 / (h1 * h1));
            row.add(interior, cg);
            if (G.a12 != 0.0)
                add_one_sided(row, node, 2, s2, -cg * s1 * 2.0 * h1 * G.a12 / G.a11);
        }
        // axis-2 family: ghost at (0, s2)
        {
            const int interior = grid_.neighbor(node, 0, -s2);
            const double cg = f.c2 * s2 / (2.0 * h2) + 0.5 * G.a22 / (h2 * h2);
            row.add(interior, -f.c2 * s2 / (2.0 * h2) + 0.5 * G.a22 / (h2 * h2));
            row.add(node, -G.a22 / (h2 * h2));
            row.add(interior, cg);
            if (G.a12 != 0.0)
                add_one_sided(row, node, 1, s1, -cg * s2 * 2.0 * h2 * G.a12 / G.a22);
        }
        if (G.a12 != 0.0) add_cross_one_sided_both(row, node, s1, s2, G.a12);
        return row;
    }

    Row make_row(int node) const {
        const NodeClass cls = grid_.geometric_class(node);
        const auto [s1, s2] = grid_.normal(node);
        switch (cls) {
            case NodeClass::Interior:
            case NodeClass::CutLeft:
            case NodeClass::CutRight:
            case NodeClass::Pinned: return interior_row(node, true, 0);
            case NodeClass::ReflectInner:
                if (s1 != 0 && s2 != 0) {
                    // puncture corner: PDE row, cross stencil avoids the hole
                    return interior_row(node, false, s2);
                }
                return s1 != 0 ? reflect_row(node, 1, s1) : reflect_row(node, 2, s2);
            case NodeClass::ReflectOuter:
                if (s1 != 0 && s2 != 0) return corner_row(node, s1, s2);
                return s1 != 0 ? reflect_row(node, 1, s1) : reflect_row(node, 2, s2);
        }
        throw SolveError("unreachable node class");
    }

  private:
    const Grid& grid_;
    std::vector<Coeffs> c_;
};

}  // namespace

LinearSystem assemble_backward(const OscillatorModel& model, const Grid& grid, double tbar,
                               int pin_node, double pin_value) {
    if (model.interpretation != Interpretation::Ito)
        throw ModelError("assemble_backward requires an Ito model (convert Stratonovich first)");
    if ((model.coords == Coords::Polar) != (grid.kind == GridKind::PolarAnnulus))
        throw ModelError("model/grid coordinate system mismatch");
    if (!(tbar > 0.0)) throw SolveError("assemble_backward requires tbar > 0");

    const int n = grid.num_nodes();
    LinearSystem sys;
    sys.unknown_of_node.assign(n, -1);
    if (pin_node >= 0) {
        if (pin_node >= n) throw SolveError("pin node out of range");
        sys.pinned = {pin_node, pin_value};
    }
    for (int node = 0; node < n; ++node) {
        if (pin_node == node) continue;
        sys.unknown_of_node[node] = static_cast<int>(sys.node_of_unknown.size());
        sys.node_of_unknown.push_back(node);
    }

    const int dim = static_cast<int>(sys.node_of_unknown.size());
    sys.rhs = Eigen::VectorXd::Constant(dim, -1.0);
    const int jsign = jump_sign(model, grid);

    BackwardAssembler assembler(model, grid);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(dim) * 12);

    for (int node = 0; node < n; ++node) {
        if (node == pin_node) continue;
        Row row = assembler.make_row(node);
        const int r = sys.unknown_of_node[node];
        for (auto& [col_node, coef] : row.entries()) {
            // branch transport across the cut: the referenced stored value
            // T_N stands for T_N - c*J*tbar on this row's branch
            const int c = grid.cut_crossing(node, col_node);
            if (c != 0) sys.rhs[r] += coef * c * jsign * tbar;
            if (col_node == pin_node) {
                sys.rhs[r] -= coef * pin_value;
                continue;
            }
            triplets.emplace_back(r, sys.unknown_of_node[col_node], coef);
        }
    }

    sys.matrix.resize(dim, dim);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

namespace {

// ---------------------------------------------------------------------------
// forward operator (finite-volume flux form)
// ---------------------------------------------------------------------------

// Accumulates coefficients of the product field M = (scalar at node)*rho into
// a triplet list for d(M)/d(axis) evaluated at `node`, one-sided when a
// neighbor is missing.
struct ProductDeriv {
    const Grid& grid;
    const std::vector<double>& scalar;  // per node

    template <typename AddFn>
    void d_axis(int node, int axis, AddFn&& add) const {
        const double h = axis == 1 ? grid.h1 : grid.h2;
        const int di = axis == 1 ? 1 : 0, dj = axis == 1 ? 0 : 1;
        const int plus = grid.neighbor(node, di, dj);
        const int minus = grid.neighbor(node, -di, -dj);
        if (plus >= 0 && minus >= 0) {
            add(plus, scalar[plus] / (2.0 * h));
            add(minus, -scalar[minus] / (2.0 * h));
            return;
        }
        const int s = plus < 0 ? +1 : -1;  // boundary on the +axis side?
        auto nb = [&](int k) { return grid.neighbor(node, -s * di * k, -s * dj * k); };
        const int n1 = nb(1), n2 = nb(2);
        if (n1 < 0 || n2 < 0) throw SolveError("forward assembly: no room for one-sided stencil");
        add(node, s * 3.0 * scalar[node] / (2.0 * h));
        add(n1, -s * 4.0 * scalar[n1] / (2.0 * h));
        add(n2, s * 1.0 * scalar[n2] / (2.0 * h));
    }
};

}  // namespace

LinearSystem assemble_forward(const OscillatorModel& model, const Grid& grid) {
    if (model.interpretation != Interpretation::Ito)
        throw ModelError("assemble_forward requires an Ito model");
    if ((model.coords == Coords::Polar) != (grid.kind == GridKind::PolarAnnulus))
        throw ModelError("model/grid coordinate system mismatch");

    const int n = grid.num_nodes();
    auto coeffs = node_coeffs(model, grid);
    std::vector<double> f1(n), f2(n), G11(n), G12(n), G22(n);
    bool has_cross = false;
    for (int k = 0; k < n; ++k) {
        f1[k] = coeffs[k].f.c1;
        f2[k] = coeffs[k].f.c2;
        G11[k] = coeffs[k].G.a11;
        G12[k] = coeffs[k].G.a12;
        G22[k] = coeffs[k].G.a22;
        if (G12[k] != 0.0) has_cross = true;
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 14);

    ProductDeriv dG12{grid, G12};

    const double h1 = grid.h1, h2 = grid.h2;

    // One face at a time; both adjacent rows receive identical flux terms
    // with opposite signs, so cell-weighted column sums cancel exactly.
    auto emit_face = [&](int P, int Q, int axis) {
        const auto [iP, jP] = grid.ij(P);
        const double c1 = grid.coord1(iP), c2 = grid.coord2(jP);
        double lo1, hi1v, lo2, hi2v;
        if (axis == 1) {
            lo1 = c1;
            hi1v = c1 + h1;
            lo2 = c2;
            hi2v = c2;
        } else {
            lo1 = c1;
            hi1v = c1;
            lo2 = c2;
            hi2v = c2 + h2;
        }
        // transverse face extent from the two in-domain half-strips
        double len = 0.0;
        if (axis == 1) {
            if (grid.rect_in_domain(lo1, hi1v, c2, c2 + 0.5 * h2)) len += 0.5 * h2;
            if (grid.rect_in_domain(lo1, hi1v, c2 - 0.5 * h2, c2)) len += 0.5 * h2;
        } else {
            if (grid.rect_in_domain(c1, c1 + 0.5 * h1, lo2, hi2v)) len += 0.5 * h1;
            if (grid.rect_in_domain(c1 - 0.5 * h1, c1, lo2, hi2v)) len += 0.5 * h1;
        }
        if (len == 0.0) return;

        const double wP = grid.cell_weight(P), wQ = grid.cell_weight(Q);
        const int rP = P, rQ = Q;
        auto add_flux = [&](int col, double coef) {
            if (coef == 0.0) return;
            triplets.emplace_back(rP, col, -coef * len / wP);
            triplets.emplace_back(rQ, col, +coef * len / wQ);
        };

        const double h = axis == 1 ? h1 : h2;
        const auto& fa = axis == 1 ? f1 : f2;
        const auto& Gaa = axis == 1 ? G11 : G22;
        // advective + normal-diffusive parts
        add_flux(P, 0.5 * fa[P] + 0.5 * Gaa[P] / h);
        add_flux(Q, 0.5 * fa[Q] - 0.5 * Gaa[Q] / h);
        // cross-diffusive part: -1/2 * avg of d(G12 rho)/d(other axis)
        if (has_cross) {
            const int other = axis == 1 ? 2 : 1;
            for (int X : {P, Q})
                dG12.d_axis(X, other, [&](int col, double c) { add_flux(col, -0.25 * c); });
        }
    };

    for (int node = 0; node < n; ++node) {
        const int e = grid.neighbor(node, +1, 0);
        if (e >= 0 && (grid.periodic1() || grid.ij(node).first + 1 < grid.n1))
            emit_face(node, e, 1);
        const int up = grid.neighbor(node, 0, +1);
        if (up >= 0) emit_face(node, up, 2);
    }

    LinearSystem sys;
    sys.unknown_of_node.resize(n);
    sys.node_of_unknown.resize(n);
    for (int k = 0; k < n; ++k) sys.unknown_of_node[k] = sys.node_of_unknown[k] = k;
    sys.rhs = Eigen::VectorXd::Zero(n);
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();

    std::vector<char> row_nonzero(n, 0);
    for (int k = 0; k < sys.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it)
            if (it.value() != 0.0) row_nonzero[it.row()] = 1;
    for (int k = 0; k < n; ++k)
        if (!row_nonzero[k])
            throw SolveError("forward assembly produced an all-zero row (grid/model incompatibility)");
    return sys;
}

}  // namespace mrt
