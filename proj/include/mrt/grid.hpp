#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mrt/common.hpp"

namespace mrt {

enum class GridKind { PolarAnnulus, CartesianPunctured };

// Geometric node classes. Cut classes are assigned only where a node is not
// already a reflecting-boundary node; the (single) pin node is reported as
// Pinned by display_class() while keeping its geometric class for assembly.
enum class NodeClass { Interior, ReflectInner, ReflectOuter, CutLeft, CutRight, Pinned };

std::string to_string(NodeClass c);

// Ordered cut-adjacent pair; crossing a -> b is the +c1 direction.
struct CutPair {
    int a = -1;
    int b = -1;
};

// Discretized annular computational domain. Immutable after construction.
//
// PolarAnnulus: c1 = theta in [0, 2pi) periodic (h1 = 2pi/n1, no duplicated
// seam column), c2 = r in [r_inner, r_outer] with reflecting rows at j = 0
// and j = n2-1. The seam between columns cut_column-1 and cut_column doubles
// as the jump cut.
//
// CartesianPunctured: n x n nodes over [-pi/2, pi/2]^2 minus the open inner
// square of side epsilon; nodes strictly inside the square are absent, nodes
// on its boundary are reflecting. The cut runs along x = 0 from the top of
// the puncture to the outer boundary.
class Grid {
  public:
    GridKind kind;
    int n1 = 0, n2 = 0;
    double h1 = 0.0, h2 = 0.0;
    double lo1 = 0.0, hi1 = 0.0, lo2 = 0.0, hi2 = 0.0;
    double epsilon = 0.0;  // Cartesian puncture side
    int cut_column = 0;    // cut between columns cut_column-1 and cut_column
    double cut_lo2 = 0.0;  // lowest c2 spanned by the cut

    int num_nodes() const { return static_cast<int>(node_ij_.size()); }
    bool periodic1() const { return kind == GridKind::PolarAnnulus; }

    int id(int i, int j) const;  // -1 where no node exists
    std::pair<int, int> ij(int node) const { return node_ij_[node]; }
    double coord1(int i) const { return lo1 + i * h1; }
    double coord2(int j) const { return lo2 + j * h2; }
    Point2 pos(int node) const;

    // Neighbor in (di, dj); periodic wrap in i for polar grids; -1 if the
    // target is outside the domain (ghost position).
    int neighbor(int node, int di, int dj) const;

    NodeClass geometric_class(int node) const { return class_[node]; }
    NodeClass display_class(int node) const {
        return node == default_pin_ ? NodeClass::Pinned : class_[node];
    }
    // Outward normal components (s1, s2) in {-1,0,+1}. Reflecting edge nodes
    // have one nonzero component; outer corners two; puncture corners carry
    // the diagonal direction of the removed quadrant.
    std::pair<int, int> normal(int node) const { return normal_[node]; }

    double cell_weight(int node) const { return cell_weight_[node]; }  // d(c1) d(c2) measure
    double area_weight(int node) const { return area_weight_[node]; }  // physical area
    double total_cell_weight() const;
    double total_area_weight() const;

    const std::vector<CutPair>& cut() const { return cut_; }
    // +1 if the (step-adjacent) move from -> to crosses the cut in the
    // a -> b (+c1) sense, -1 for the reverse, 0 otherwise. Diagonal moves
    // across the cut count as crossings.
    int cut_crossing(int from, int to) const;

    int default_pin() const { return default_pin_; }

    // True if the closed rectangle (computational coordinates) lies in the
    // domain; used by the finite-volume face bookkeeping.
    bool rect_in_domain(double a1, double b1, double a2, double b2) const;

    Point2 to_xy(const Point2& p) const;
    double radius_of(const Point2& p) const;

    std::string describe_cut() const;

    // Construction (see free builders below).
    std::vector<std::pair<int, int>> node_ij_;
    std::vector<int> id_;  // n1*n2, -1 where removed
    std::vector<NodeClass> class_;
    std::vector<std::pair<int, int>> normal_;
    std::vector<double> cell_weight_;
    std::vector<double> area_weight_;
    std::vector<CutPair> cut_;
    int default_pin_ = -1;
};

// Periodic-in-theta annulus grid. Preconditions: n_theta >= 8, n_r >= 4,
// 0 < r_inner < r_outer. cut_column rotates the seam (used by the
// cut-invariance diagnostic).
Grid build_polar_grid(int n_theta, int n_r, double r_inner, double r_outer, int cut_column = 0);

// Punctured square grid. Preconditions: n odd (the cut x=0 must lie on grid
// lines), 0 < epsilon < pi, and the puncture resolvable (at least 2 nodes
// across) while leaving the domain connected.
Grid build_cartesian_punctured_grid(int n, double epsilon);

}  // namespace mrt
