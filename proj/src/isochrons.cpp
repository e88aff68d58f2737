#include "mrt/isochrons.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mrt {

namespace {

struct Segment {
    Point2 p, q;
};

double dist2(const Grid& grid, const Point2& a, const Point2& b) {
    double d1 = a.c1 - b.c1;
    if (grid.kind == GridKind::PolarAnnulus) d1 = principal_angle(d1);
    const double d2 = a.c2 - b.c2;
    return d1 * d1 + d2 * d2;
}

// Marching squares over one cell for one level value; corner order
// v00 (i,j), v10 (i+1,j), v11 (i+1,j+1), v01 (i,j+1).
void cell_segments(double v00, double v10, double v11, double v01, double level, double x0,
                   double x1, double y0, double y1, std::vector<Segment>& out) {
    const double snap = 1e-12 * std::max(1.0, std::abs(level));
    auto val = [&](double v) { return std::abs(v - level) < snap ? level : v; };
    v00 = val(v00);
    v10 = val(v10);
    v11 = val(v11);
    v01 = val(v01);

    const int mask = (v00 >= level ? 1 : 0) | (v10 >= level ? 2 : 0) | (v11 >= level ? 4 : 0) |
                     (v01 >= level ? 8 : 0);
    if (mask == 0 || mask == 15) return;

    auto lerp = [&](double a, double b, double pa, double pb) {
        const double t = (level - a) / (b - a);
        return pa + t * (pb - pa);
    };
    const Point2 bottom{lerp(v00, v10, x0, x1), y0};
    const Point2 right{x1, lerp(v10, v11, y0, y1)};
    const Point2 top{lerp(v01, v11, x0, x1), y1};
    const Point2 left{x0, lerp(v00, v01, y0, y1)};

    auto emit = [&](const Point2& a, const Point2& b) { out.push_back({a, b}); };

    switch (mask) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9: emit(bottom, top); break;
        case 7: case 8: emit(top, left); break;
        case 5: case 10: {
            // saddle: resolve by the cell average
            const double avg = 0.25 * (v00 + v10 + v11 + v01);
            const bool center_above = avg >= level;
            if ((mask == 5) == center_above) {
                emit(left, top);
                emit(bottom, right);
            } else {
                emit(left, bottom);
                emit(right, top);
            }
            break;
        }
        default: break;
    }
}

std::vector<Polyline> chain_segments(const Grid& grid, const std::vector<Segment>& segs) {
    const double tol = std::min(grid.h1, grid.h2) / 1000.0;
    const double tol2 = tol * tol;
    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> out;

    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
        if (used[s0]) continue;
        used[s0] = true;
        std::deque<Point2> chain{segs[s0].p, segs[s0].q};

        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t s = 0; s < segs.size(); ++s) {
                if (used[s]) continue;
                const Point2 front = chain.front(), back = chain.back();
                if (dist2(grid, segs[s].p, back) < tol2) {
                    chain.push_back(segs[s].q);
                } else if (dist2(grid, segs[s].q, back) < tol2) {
                    chain.push_back(segs[s].p);
                } else if (dist2(grid, segs[s].p, front) < tol2) {
                    chain.push_front(segs[s].q);
                } else if (dist2(grid, segs[s].q, front) < tol2) {
                    chain.push_front(segs[s].p);
                } else {
                    continue;
                }
                used[s] = true;
                grew = true;
            }
        }

        Polyline poly(chain.begin(), chain.end());
        // drop zero-length duplicates
        Polyline clean;
        for (const Point2& p : poly)
            if (clean.empty() || dist2(grid, clean.back(), p) > 1e-30) clean.push_back(p);
        if (clean.size() >= 2) out.push_back(std::move(clean));
    }
    return out;
}

bool touches_inner(const Grid& grid, const Point2& p, double tol) {
    if (grid.kind == GridKind::PolarAnnulus) return std::abs(p.c2 - grid.lo2) < tol;
    return std::max(std::abs(p.c1), std::abs(p.c2)) < 0.5 * grid.epsilon + tol;
}

bool touches_outer(const Grid& grid, const Point2& p, double tol) {
    if (grid.kind == GridKind::PolarAnnulus) return std::abs(p.c2 - grid.hi2) < tol;
    return std::max(std::abs(p.c1), std::abs(p.c2)) > 0.5 * kPi - tol;
}

}  // namespace

Polyline extract_isochron_at(const MrtSolution& solution, double level, bool* complete) {
    const Grid& grid = *solution.T.grid;
    const auto& raw = solution.theta_raw.values;
    level = wrap_angle(level);

    std::vector<Segment> segs;
    const int imax = grid.periodic1() ? grid.n1 : grid.n1 - 1;
    for (int j = 0; j + 1 < grid.n2; ++j) {
        for (int i = 0; i < imax; ++i) {
            const int n00 = grid.id(i, j), n10 = grid.id(i + 1, j);
            const int n01 = grid.id(i, j + 1), n11 = grid.id(i + 1, j + 1);
            if (n00 < 0 || n10 < 0 || n01 < 0 || n11 < 0) continue;

            double v00 = raw[n00], v10 = raw[n10], v11 = raw[n11], v01 = raw[n01];
            // cells straddling the cut: bring the +c1 side onto the branch of
            // the -c1 side (shift by the nearest multiple of 2pi)
            if (grid.cut_crossing(n00, n10) != 0) {
                const double shift = kTwoPi * std::round((v00 - v10) / kTwoPi);
                v10 += shift;
                v11 += shift;
            }
            const double lo = std::min(std::min(v00, v10), std::min(v01, v11));
            const double hi = std::max(std::max(v00, v10), std::max(v01, v11));
            // all 2pi-shifted copies of the level that intersect this cell
            const double margin = 1e-9;
            for (double lv = level + kTwoPi * std::ceil((lo - level) / kTwoPi - margin);
                 lv <= hi + margin; lv += kTwoPi) {
                cell_segments(v00, v10, v11, v01, lv, grid.coord1(i), grid.coord1(i) + grid.h1,
                              grid.coord2(j), grid.coord2(j) + grid.h2, segs);
            }
        }
    }

    auto polys = chain_segments(grid, segs);
    if (polys.empty()) {
        if (complete) *complete = false;
        return {};
    }
    // the isochron is the longest chain; fragments indicate contouring failure
    std::size_t best = 0;
    for (std::size_t k = 1; k < polys.size(); ++k)
        if (polys[k].size() > polys[best].size()) best = k;
    Polyline poly = std::move(polys[best]);

    // wrap polar angles back into [0, 2pi)
    if (grid.kind == GridKind::PolarAnnulus)
        for (Point2& p : poly) p.c1 = wrap_angle(p.c1);

    // orient from the inner boundary outward
    if (grid.radius_of(poly.front()) > grid.radius_of(poly.back()))
        std::reverse(poly.begin(), poly.end());

    if (complete) {
        const double tol = std::max(grid.h1, grid.h2) * 0.02;
        double stray = 0.0;
        for (std::size_t k = 0; k < polys.size(); ++k)
            if (k != best) stray += polyline_length_xy(polys[k], grid);
        *complete = touches_inner(grid, poly.front(), tol) &&
                    touches_outer(grid, poly.back(), tol) &&
                    stray <= 0.01 * polyline_length_xy(poly, grid);
    }
    return poly;
}

IsochronSet extract_isochrons(const MrtSolution& solution, int n_levels) {
    if (n_levels < 1) throw SolveError("extract_isochrons: n_levels must be >= 1");
    IsochronSet out;
    out.grid = solution.T.grid;
    for (int k = 0; k < n_levels; ++k) {
        const double level = kTwoPi * k / n_levels;
        bool complete = false;
        Polyline poly = extract_isochron_at(solution, level, &complete);
        out.levels.push_back(level);
        out.polylines.push_back(std::move(poly));
        out.complete.push_back(complete);
    }
    return out;
}

double polyline_length_xy(const Polyline& poly, const Grid& grid) {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        const Point2 a = grid.to_xy(poly[k]), b = grid.to_xy(poly[k + 1]);
        len += std::hypot(a.c1 - b.c1, a.c2 - b.c2);
    }
    return len;
}

Polyline clip_polyline_radius(const Polyline& curve, const Grid& grid, double r_lo,
                              double r_hi) {
    std::vector<Polyline> runs;
    Polyline current;
    auto flush = [&] {
        if (current.size() >= 2) runs.push_back(current);
        current.clear();
    };
    auto inside = [&](double r) { return r >= r_lo && r <= r_hi; };

    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
        const Point2 a = curve[k], b = curve[k + 1];
        const double ra = grid.radius_of(a), rb = grid.radius_of(b);
        auto at = [&](double t) -> Point2 {
            double d1 = b.c1 - a.c1;
            if (grid.kind == GridKind::PolarAnnulus) d1 = principal_angle(d1);
            return {a.c1 + t * d1, a.c2 + t * (b.c2 - a.c2)};
        };
        // crossing parameters of the two radius bounds along this segment
        std::vector<double> ts{0.0, 1.0};
        for (double bound : {r_lo, r_hi}) {
            if ((ra < bound) != (rb < bound)) ts.push_back((bound - ra) / (rb - ra));
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t m = 0; m + 1 < ts.size(); ++m) {
            const double tm = 0.5 * (ts[m] + ts[m + 1]);
            const double rm = ra + tm * (rb - ra);
            if (inside(rm)) {
                if (current.empty()) current.push_back(at(ts[m]));
                current.push_back(at(ts[m + 1]));
            } else {
                flush();
            }
        }
    }
    flush();
    if (runs.empty()) return {};
    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
        if (polyline_length_xy(runs[k], grid) > polyline_length_xy(runs[best], grid)) best = k;
    return runs[best];
}

SampledSeeds sample_isochron(const Polyline& curve, int n_points, const Grid& grid) {
    if (n_points < 2) throw SolveError("sample_isochron: need at least 2 points");
    if (curve.size() < 2) throw SolveError("sample_isochron: degenerate curve");

    SampledSeeds out;
    std::vector<double> radius(curve.size());
    for (std::size_t k = 0; k < curve.size(); ++k) radius[k] = grid.radius_of(curve[k]);

    bool monotone = true;
    const double rtol = 1e-12 * (std::abs(radius.back()) + 1.0);
    for (std::size_t k = 0; k + 1 < curve.size(); ++k)
        if (radius[k + 1] <= radius[k] + rtol) monotone = false;

    auto lerp_pt = [&](const Point2& a, const Point2& b, double t) -> Point2 {
        double d1 = b.c1 - a.c1;
        if (grid.kind == GridKind::PolarAnnulus) d1 = principal_angle(d1);
        Point2 p{a.c1 + t * d1, a.c2 + t * (b.c2 - a.c2)};
        if (grid.kind == GridKind::PolarAnnulus) p.c1 = wrap_angle(p.c1);
        return p;
    };

    if (monotone) {
        const double r0 = radius.front(), r1 = radius.back();
        for (int m = 0; m < n_points; ++m) {
            const double rt = r0 + (r1 - r0) * m / (n_points - 1);
            std::size_t k = 0;
            while (k + 2 < curve.size() && radius[k + 1] < rt) ++k;
            const double denom = radius[k + 1] - radius[k];
            const double t = denom == 0.0 ? 0.0 : (rt - radius[k]) / denom;
            out.points.push_back(lerp_pt(curve[k], curve[k + 1], std::clamp(t, 0.0, 1.0)));
        }
        return out;
    }

    // hook-shaped curve: fall back to uniform arc length
    out.arc_length_fallback = true;
    std::vector<double> arc(curve.size(), 0.0);
    for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
        const Point2 a = grid.to_xy(curve[k]), b = grid.to_xy(curve[k + 1]);
        arc[k + 1] = arc[k] + std::hypot(a.c1 - b.c1, a.c2 - b.c2);
    }
    const double total = arc.back();
    for (int m = 0; m < n_points; ++m) {
        const double st = total * m / (n_points - 1);
        std::size_t k = 0;
        while (k + 2 < curve.size() && arc[k + 1] < st) ++k;
        const double denom = arc[k + 1] - arc[k];
        const double t = denom == 0.0 ? 0.0 : (st - arc[k]) / denom;
        out.points.push_back(lerp_pt(curve[k], curve[k + 1], std::clamp(t, 0.0, 1.0)));
    }
    return out;
}

Polyline build_spoke(const Grid& grid, double phi, double r_lo, double r_hi, int n_pts) {
    if (n_pts < 2) throw SolveError("build_spoke: need at least 2 points");
    Polyline out;
    if (grid.kind == GridKind::PolarAnnulus) {
        const double lo = std::max(r_lo, grid.lo2), hi = std::min(r_hi, grid.hi2);
        if (!(hi > lo)) throw SolveError("build_spoke: empty radial span");
        for (int k = 0; k < n_pts; ++k)
            out.push_back({wrap_angle(phi), lo + (hi - lo) * k / (n_pts - 1)});
        return out;
    }
    const double c = std::cos(phi), s = std::sin(phi);
    const double denom = std::max(std::abs(c), std::abs(s));
    const double rmax_wall = (0.5 * kPi) / denom * (1.0 - 1e-12);
    const double rmin_hole = grid.epsilon > 0.0 ? (0.5 * grid.epsilon) / denom * (1.0 + 1e-9)
                                                : 0.0;
    const double lo = std::max(r_lo, rmin_hole), hi = std::min(r_hi, rmax_wall);
    if (!(hi > lo)) throw SolveError("build_spoke: empty radial span");
    for (int k = 0; k < n_pts; ++k) {
        const double r = lo + (hi - lo) * k / (n_pts - 1);
        out.push_back({r * c, r * s});
    }
    return out;
}

}  // namespace mrt
