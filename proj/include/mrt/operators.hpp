#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "mrt/grid.hpp"
#include "mrt/model.hpp"

namespace mrt {

// Sparse discretization of a Kolmogorov operator together with its
// right-hand side and the grid-node <-> unknown mapping. When a node is
// pinned it is removed from the unknowns and its contributions are folded
// into the rhs.
struct LinearSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<int> unknown_of_node;  // -1 for the pinned node
    std::vector<int> node_of_unknown;
    std::optional<std::pair<int, double>> pinned;

    int dim() const { return static_cast<int>(matrix.rows()); }
    void dump_triplets(std::ostream& os) const;
};

// Backward operator L^dag with rhs -1, adjoint-reflecting rows at the
// boundaries and the +-tbar jump folded into the rhs of cut-adjacent rows.
// The model must be in Ito form and match the grid's coordinate system.
// pin_node >= 0 removes that unknown (value pin_value).
LinearSystem assemble_backward(const OscillatorModel& model, const Grid& grid, double tbar,
                               int pin_node = -1, double pin_value = 0.0);

// Forward (Fokker-Planck) operator in flux form: rows are the negative
// discrete divergence of J = f rho - 1/2 grad.(G rho) over the node cells,
// with zero-flux boundary faces. Discrete total probability is conserved
// exactly (cell-weighted column sums vanish). rhs is zero.
LinearSystem assemble_forward(const OscillatorModel& model, const Grid& grid);

// Sign J in T(b) - T(a) = J * tbar across the cut, fixed by requiring that T
// decreases in the direction of mean rotation.
int jump_sign(const OscillatorModel& model, const Grid& grid);

}  // namespace mrt
