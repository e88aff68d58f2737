#pragma once

#include "mrt/mrt_solver.hpp"

namespace mrt {

using Polyline = std::vector<Point2>;  // computational coordinates

struct IsochronSet {
    const Grid* grid = nullptr;
    std::vector<double> levels;          // in [0, 2pi)
    std::vector<Polyline> polylines;     // ordered inner boundary -> outer boundary
    std::vector<bool> complete;          // reaches both boundaries
};

// Marching-squares contours of the MRT phase at levels 2*pi*k/n_levels.
// Contouring runs on the unreduced phase; cells straddling the cut are
// unwrapped onto one branch first, and all 2*pi-shifted copies of a level
// are stitched into a single polyline per level.
IsochronSet extract_isochrons(const MrtSolution& solution, int n_levels);

// Single level (radians, reduced mod 2pi).
Polyline extract_isochron_at(const MrtSolution& solution, double level, bool* complete = nullptr);

struct SampledSeeds {
    std::vector<Point2> points;
    bool arc_length_fallback = false;  // radius non-monotone along the curve
};

// n_points seeds spaced uniformly in the radial coordinate along the curve;
// falls back to uniform arc length (flagged) when the radius is not monotone.
SampledSeeds sample_isochron(const Polyline& curve, int n_points, const Grid& grid);

// Longest contiguous piece of the curve with radius in [r_lo, r_hi]
// (endpoints interpolated); used to seed the verification window.
Polyline clip_polyline_radius(const Polyline& curve, const Grid& grid, double r_lo, double r_hi);

// Radial segment through angle `phi` spanning [r_lo, r_hi] clipped to the
// domain; the control section for the verification experiments.
Polyline build_spoke(const Grid& grid, double phi, double r_lo, double r_hi, int n_pts = 129);

double polyline_length_xy(const Polyline& poly, const Grid& grid);

}  // namespace mrt
