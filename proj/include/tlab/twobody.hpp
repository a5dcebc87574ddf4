#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tlab/potential.hpp"

namespace tlab {

// Radial quadrature grid on [0, r_max]: composite Gauss-Legendre of order 4
// over n/4 equal panels. Also doubles as the extent spec for finite
// difference solves (which use their own uniform mesh of n points).
struct RadialGrid {
    double r_max = 20.0;
    int n = 2000;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static RadialGrid composite_gl(double r_max, int n);
};

// Relative-motion Hamiltonian -d^2/dr^2 + lambda v(r) on the half line with
// a Dirichlet wall at r_max (s-wave reduced form, reduced mass 1/2).
struct BoundStateResult {
    std::vector<double> energies;   // E < 0, ascending
    bool grid_warning = false;      // ground state still sizeable at the wall
};

BoundStateResult bound_states(const PairPotential& v, double lambda,
                              double r_max = 20.0, int n = 2000);

struct ScatteringLengthResult {
    double a = 0.0;
    bool divergent = false;    // zero-energy resonance: |a| beyond cutoff
    bool converged = true;     // asymptote reached linearity
};

ScatteringLengthResult scattering_length(const PairPotential& v, double lambda);

// Birman-Schwinger kernel in the s-wave sector at energy -k^2:
//   K(r, r') = lambda sqrt(w v_-)(r) G_k(r, r') sqrt(w v_-)(r')
// with G_k the Green function of -d^2/dr^2 + lambda v_+ + k^2 (Dirichlet at
// the origin, decaying at infinity). Restricted to nodes where v_- is
// nonnegligible.
struct BSMatrix {
    double lambda = 0.0;
    double k = 0.0;
    Eigen::MatrixXd entries;       // symmetric PSD
    std::vector<int> node_index;   // grid nodes retained
};

BSMatrix build_bs_matrix(const PairPotential& v, double lambda, double k,
                         const RadialGrid& grid);

// Largest BS eigenvalue. k = 0 is evaluated by Richardson extrapolation from
// k = 1e-3 and 2e-3 (the kernel is linear in k to leading order).
double bs_max_eigenvalue(const PairPotential& v, double lambda, double k,
                         const RadialGrid& grid);

// Number of BS eigenvalues >= 1, which equals the number of bound states
// below -k^2.
int bs_count_above_one(const PairPotential& v, double lambda, double k,
                       const RadialGrid& grid);

struct ThresholdReport {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double lambda_cr = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Smallest coupling with a zero-energy bound state: bisection on the largest
// BS eigenvalue at k -> 0 crossing 1. Throws if no crossing below lambda_max.
ThresholdReport critical_coupling_2b(const PairPotential& v,
                                     const RadialGrid& grid,
                                     double lambda_max = 64.0);

enum class ResonanceClass { subcritical, resonant, bound };

// Classify lambda against the critical coupling within relative tol.
ResonanceClass resonance_check(const PairPotential& v, double lambda,
                               double tol, const RadialGrid& grid);

// Probe of three spectral-inequality variants at coupling lambda, each
// strengthened by a multiple of either the potential or the inverse-square
// regularizer. Uses a long uniform finite-difference grid; eigenvalues from
// Sturm bisection on the tridiagonal matrix.
struct DefsProbeEntry {
    double epsilon = 0.0;
    double def1_min_eig = 0.0;   // T + (lambda + eps) v
    double def2_min_eig = 0.0;   // eps T + lambda v
    double def3_min_eig = 0.0;   // T + lambda v - eps V_R
    bool def1_holds = false;
    bool def2_holds = false;
    bool def3_holds = false;
};

struct DefsProbeReport {
    double lambda = 0.0;
    std::vector<DefsProbeEntry> entries;
    // Largest eps0 on a scan grid with (1-eps0)*T + lambda*v >= -tol,
    // i.e. the system keeps a kinetic-energy reserve; negative if none.
    double eps0_max = -1.0;
    double eps0_witness_eig = 0.0;
    // Spectral floor of H - (eps0/4) * V_R with V_R the inverse-square
    // regularizer (Hardy-type remainder check).
    double hardy_witness_eig = 0.0;
    bool hardy_holds = false;
};

DefsProbeReport defs_probe(const PairPotential& v, double lambda,
                           const std::vector<double>& epsilons,
                           double r_max = 400.0, int n = 20000,
                           double tol = 1e-8);

// Lowest num_eigs eigenvalues of the FD matrix T + lambda*v (all if fewer
// than num_eigs below e_cap). Exposed for diagnostics and cross-checks.
std::vector<double> fd_low_eigenvalues(const PairPotential& v, double lambda,
                                       double r_max, int n, int num_eigs,
                                       double e_cap);

} // namespace tlab
