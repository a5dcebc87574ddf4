#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tlab/potential.hpp"

namespace tlab {

// Mass-scaled Jacobi frame for N particles taken in a given ordering. The
// coordinate matrix C maps lab positions to N-1 internal coordinates and
// satisfies C * diag(1/(2 m_i)) * C^T = I, which turns the internal kinetic
// energy into a plain Laplacian (hbar = 1 throughout).
struct JacobiFrame {
    std::vector<double> masses;       // lab order
    std::vector<int> ordering;        // permutation of 0..N-1 defining the tree
    Eigen::MatrixXd coords;           // (N-1) x N

    int n_particles() const { return static_cast<int>(masses.size()); }

    // Scale factors of the first coordinate (pair ordering[0], ordering[1])
    // and the second (third particle vs pair centre of mass, N >= 3).
    double alpha() const;
    double gamma() const;
};

JacobiFrame build_frame(const std::vector<double>& masses,
                        const std::vector<int>& ordering);

// Orthogonal map between two frames over the same masses: xi_b = M xi_a.
Eigen::MatrixXd kinematic_rotation(const JacobiFrame& a, const JacobiFrame& b);

// Coefficients c with r_i - r_j = sum_k c_k xi_k in the given frame.
Eigen::VectorXd pair_separation_map(const JacobiFrame& frame, int i, int j);

// Orthogonality defect of a rotation: ||M M^T - I||_max.
double rotation_residual(const Eigen::MatrixXd& m);

// Frame self-consistency: ||C diag(1/2m) C^T - I||_max.
double kinetic_residual(const JacobiFrame& frame);

} // namespace tlab
