#include "mrt/grid.hpp"

#include <algorithm>
#include <cmath>

namespace mrt {

std::string to_string(NodeClass c) {
    switch (c) {
        case NodeClass::Interior: return "interior";
        case NodeClass::ReflectInner: return "reflect_inner";
        case NodeClass::ReflectOuter: return "reflect_outer";
        case NodeClass::CutLeft: return "cut_left";
        case NodeClass::CutRight: return "cut_right";
        case NodeClass::Pinned: return "pinned";
    }
    return "?";
}

int Grid::id(int i, int j) const {
    if (periodic1()) {
        i %= n1;
        if (i < 0) i += n1;
    } else if (i < 0 || i >= n1) {
        return -1;
    }
    if (j < 0 || j >= n2) return -1;
    return id_[static_cast<std::size_t>(j) * n1 + i];
}

Point2 Grid::pos(int node) const {
    auto [i, j] = node_ij_[node];
    return {coord1(i), coord2(j)};
}

int Grid::neighbor(int node, int di, int dj) const {
    auto [i, j] = node_ij_[node];
    return id(i + di, j + dj);
}

double Grid::total_cell_weight() const {
    double s = 0.0;
    for (double w : cell_weight_) s += w;
    return s;
}

double Grid::total_area_weight() const {
    double s = 0.0;
    for (double w : area_weight_) s += w;
    return s;
}

int Grid::cut_crossing(int from, int to) const {
    auto [i0, j0] = node_ij_[from];
    auto [i1, j1] = node_ij_[to];
    const int left = periodic1() ? (cut_column - 1 + n1) % n1 : cut_column - 1;
    if (i0 == left && i1 == cut_column) {
        if (kind == GridKind::CartesianPunctured &&
            0.5 * (coord2(j0) + coord2(j1)) < cut_lo2 - 0.26 * h2)
            return 0;
        return +1;
    }
    if (i0 == cut_column && i1 == left) {
        if (kind == GridKind::CartesianPunctured &&
            0.5 * (coord2(j0) + coord2(j1)) < cut_lo2 - 0.26 * h2)
            return 0;
        return -1;
    }
    return 0;
}

bool Grid::rect_in_domain(double a1, double b1, double a2, double b2) const {
    const double tol = 1e-9 * std::max(h1, h2);
    if (kind == GridKind::PolarAnnulus)
        return a2 >= lo2 - tol && b2 <= hi2 + tol;
    if (a1 < lo1 - tol || b1 > hi1 + tol || a2 < lo2 - tol || b2 > hi2 + tol) return false;
    // reject rectangles that poke into the open puncture
    const double half = 0.5 * epsilon;
    const double minabs1 = (a1 <= 0.0 && b1 >= 0.0) ? 0.0 : std::min(std::abs(a1), std::abs(b1));
    const double minabs2 = (a2 <= 0.0 && b2 >= 0.0) ? 0.0 : std::min(std::abs(a2), std::abs(b2));
    return !(minabs1 < half - tol && minabs2 < half - tol);
}

Point2 Grid::to_xy(const Point2& p) const {
    if (kind == GridKind::PolarAnnulus)
        return {p.c2 * std::cos(p.c1), p.c2 * std::sin(p.c1)};
    return p;
}

double Grid::radius_of(const Point2& p) const {
    if (kind == GridKind::PolarAnnulus) return p.c2;
    return std::hypot(p.c1, p.c2);
}

std::string Grid::describe_cut() const {
    if (kind == GridKind::PolarAnnulus)
        return "polar seam at theta=" + std::to_string(coord1(cut_column)) +
               " (between columns " + std::to_string((cut_column - 1 + n1) % n1) + " and " +
               std::to_string(cut_column) + ")";
    return "vertical segment x=0, y in [" + std::to_string(cut_lo2) + ", " +
           std::to_string(hi2) + "]";
}

Grid build_polar_grid(int n_theta, int n_r, double r_inner, double r_outer, int cut_column) {
    if (n_theta < 8 || n_r < 4) throw GridError("degenerate polar grid dimensions");
    if (!(r_inner > 0.0) || !(r_outer > r_inner))
        throw GridError("polar grid requires 0 < r_inner < r_outer");

    Grid g;
    g.kind = GridKind::PolarAnnulus;
    g.n1 = n_theta;
    g.n2 = n_r;
    g.lo1 = 0.0;
    g.hi1 = kTwoPi;
    g.lo2 = r_inner;
    g.hi2 = r_outer;
    g.h1 = kTwoPi / n_theta;
    g.h2 = (r_outer - r_inner) / (n_r - 1);
    g.cut_column = ((cut_column % n_theta) + n_theta) % n_theta;
    g.cut_lo2 = r_inner;

    g.id_.assign(static_cast<std::size_t>(n_theta) * n_r, -1);
    const int left = (g.cut_column - 1 + n_theta) % n_theta;
    for (int j = 0; j < n_r; ++j) {
        for (int i = 0; i < n_theta; ++i) {
            const int node = static_cast<int>(g.node_ij_.size());
            g.id_[static_cast<std::size_t>(j) * n_theta + i] = node;
            g.node_ij_.emplace_back(i, j);

            NodeClass cls = NodeClass::Interior;
            std::pair<int, int> nrm{0, 0};
            if (j == 0) {
                cls = NodeClass::ReflectInner;
                nrm = {0, -1};
            } else if (j == n_r - 1) {
                cls = NodeClass::ReflectOuter;
                nrm = {0, +1};
            } else if (i == left) {
                cls = NodeClass::CutLeft;
            } else if (i == g.cut_column) {
                cls = NodeClass::CutRight;
            }
            g.class_.push_back(cls);
            g.normal_.push_back(nrm);

            const double wr = (j == 0 || j == n_r - 1) ? 0.5 * g.h2 : g.h2;
            g.cell_weight_.push_back(g.h1 * wr);
            g.area_weight_.push_back(g.h1 * wr * g.coord2(j));
        }
    }
    for (int j = 0; j < n_r; ++j)
        g.cut_.push_back({g.id(left, j), g.id(g.cut_column, j)});
    g.default_pin_ = g.id(g.cut_column, n_r - 1);
    return g;
}

Grid build_cartesian_punctured_grid(int n, double epsilon) {
    if (n < 9) throw GridError("degenerate Cartesian grid dimension");
    if (n % 2 == 0) throw GridError("Cartesian grid needs odd n so the cut x=0 lies on nodes");
    if (!(epsilon > 0.0) || !(epsilon < kPi))
        throw GridError("puncture side must satisfy 0 < epsilon < pi");

    Grid g;
    g.kind = GridKind::CartesianPunctured;
    g.n1 = g.n2 = n;
    g.lo1 = g.lo2 = -0.5 * kPi;
    g.hi1 = g.hi2 = 0.5 * kPi;
    g.h1 = g.h2 = kPi / (n - 1);
    g.epsilon = epsilon;
    g.cut_column = (n - 1) / 2;  // column at x = 0

    const double half = 0.5 * epsilon;
    const double tol = 1e-9 * g.h1;
    auto coord = [&](int i) { return g.lo1 + i * g.h1; };
    auto removed = [&](int i, int j) {
        return std::abs(coord(i)) < half - tol && std::abs(coord(j)) < half - tol;
    };

    int across = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(coord(i)) < half - tol) ++across;
    if (across < 2)
        throw GridError("puncture not resolvable: fewer than 2 nodes across the inner square");
    if (half >= 0.5 * kPi - 2.0 * g.h1)
        throw GridError("puncture too large: no room between inner and outer boundaries");

    g.id_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (removed(i, j)) continue;
            const int node = static_cast<int>(g.node_ij_.size());
            g.id_[static_cast<std::size_t>(j) * n + i] = node;
            g.node_ij_.emplace_back(i, j);

            NodeClass cls = NodeClass::Interior;
            int sx = 0, sy = 0;
            if (i == 0) sx = -1;
            if (i == n - 1) sx = +1;
            if (j == 0) sy = -1;
            if (j == n - 1) sy = +1;
            if (sx != 0 || sy != 0) {
                cls = NodeClass::ReflectOuter;
            } else {
                // puncture boundary: outward normal points into the hole
                if (i > 0 && removed(i - 1, j)) sx = -1;
                if (i < n - 1 && removed(i + 1, j)) sx = +1;
                if (j > 0 && removed(i, j - 1)) sy = -1;
                if (j < n - 1 && removed(i, j + 1)) sy = +1;
                if (sx != 0 || sy != 0) {
                    cls = NodeClass::ReflectInner;
                } else {
                    // puncture corner: only the diagonal neighbor is removed
                    for (int dj = -1; dj <= 1 && cls == NodeClass::Interior; dj += 2)
                        for (int di = -1; di <= 1; di += 2)
                            if (removed(i + di, j + dj)) {
                                cls = NodeClass::ReflectInner;
                                sx = di;
                                sy = dj;
                                break;
                            }
                }
            }
            g.class_.push_back(cls);
            g.normal_.push_back({sx, sy});
        }
    }

    // cut classes along x = -h and x = 0 above the puncture
    const int ic = g.cut_column;
    double cut_lo = g.hi2;
    for (int j = 0; j < n; ++j) {
        if (g.id(ic, j) < 0 || g.id(ic - 1, j) < 0) continue;
        if (coord(j) < half - tol) continue;  // below the top of the puncture
        cut_lo = std::min(cut_lo, coord(j));
        g.cut_.push_back({g.id(ic - 1, j), g.id(ic, j)});
        for (int side = 0; side < 2; ++side) {
            const int node = side == 0 ? g.id(ic - 1, j) : g.id(ic, j);
            if (g.class_[node] == NodeClass::Interior)
                g.class_[node] = side == 0 ? NodeClass::CutLeft : NodeClass::CutRight;
        }
    }
    g.cut_lo2 = cut_lo;

    // quadrant-based cell weights: exact tiling of the domain
    for (int node = 0; node < g.num_nodes(); ++node) {
        auto [i, j] = g.node_ij_[node];
        const double x = coord(i), y = coord(j);
        double w = 0.0;
        for (int sx = -1; sx <= 1; sx += 2)
            for (int sy = -1; sy <= 1; sy += 2) {
                const double x2 = x + sx * 0.5 * g.h1, y2 = y + sy * 0.5 * g.h2;
                if (g.rect_in_domain(std::min(x, x2), std::max(x, x2), std::min(y, y2),
                                     std::max(y, y2)))
                    w += 0.25 * g.h1 * g.h2;
            }
        g.cell_weight_.push_back(w);
        g.area_weight_.push_back(w);
    }

    g.default_pin_ = g.id(0, n - 1);  // northwest corner
    return g;
}

}  // namespace mrt
