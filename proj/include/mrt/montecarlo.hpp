#pragma once

#include <cstdint>
#include <string>

#include "mrt/isochrons.hpp"
#include "mrt/rng.hpp"

namespace mrt {

struct TrajectoryState {
    Point2 position;               // computational coordinates
    double unwrapped_angle = 0.0;  // continuous lift of the geometric angle
    double time = 0.0;
};

// One Euler-Maruyama step x' = x + f(x) dt + g(x) sqrt(dt) z with explicit
// standard-normal draws; the unwrapped angle is advanced by the principal
// angle increment. No boundary handling.
TrajectoryState em_step(const OscillatorModel& model, const TrajectoryState& state, double dt,
                        double z1, double z2);

struct SimCounters {
    long long boundary_hits = 0;  // specular radial reflections at the domain edge
    long long censored = 0;
    long long escaped = 0;      // non-finite state, sample dropped
    long long hole_visits = 0;  // Cartesian: steps inside the puncture (not reflected)
};

// Mean-return-time sample: simulates from `seed` (which must lie on
// `section` within a grid spacing) until the trajectory first crosses the
// copy of the section shifted by 2*pi*rotation_sign in unwrapped angle, with
// linear interpolation of the crossing step. Returns NaN when censored
// (elapsed time above t_cap_factor * tbar_hint).
double return_time(const OscillatorModel& model, const Grid& grid, const Polyline& section,
                   const Point2& seed, double tbar_hint, double dt, Xoshiro256& rng,
                   SimCounters* counters = nullptr, double t_cap_factor = 50.0);

struct SeedStat {
    Point2 point;
    double radius = 0.0;
    double mean = 0.0;
    double sem = 0.0;
    long long n = 0;
    long long censored = 0;
    long long boundary_hits = 0;
};

struct ReturnTimeStats {
    double section_level = 0.0;  // phase level of the section, if any
    std::string section_id;
    double tbar_ref = 0.0;
    std::vector<SeedStat> seeds;
    long long hole_visits = 0;
};

struct EnsembleOptions {
    double t_cap_factor = 50.0;
    double censor_threshold = 1e-4;  // max allowed censored fraction per seed
    int workers = 0;                 // 0: MRT_WORKERS env var, else hardware
    int chunk = 4096;                // trajectories per work unit
    bool progress = false;           // one status line per seed on stderr
};

// Per-seed mean and standard error over n_traj independent return-time
// samples. Per-trajectory RNG streams derive deterministically from
// (seed0, seed index, trajectory index): any partitioning across workers
// reproduces the same numbers; sums are compensated and merged in a fixed
// order.
ReturnTimeStats ensemble_mrt(const OscillatorModel& model, const Grid& grid,
                             const Polyline& section, const std::vector<Point2>& seeds,
                             long long n_traj, double dt, std::uint64_t seed0,
                             const EnsembleOptions& opts = {});

// 2*pi * total_time / |net unwrapped angle| over one long trajectory;
// independent consistency check of the PDE mean period.
double empirical_period(const OscillatorModel& model, const Grid& grid, double total_time,
                        double dt, Xoshiro256& rng);

int default_worker_count();

}  // namespace mrt
