#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tlab/jacobi.hpp"
#include "tlab/potential.hpp"
#include "tlab/twobody.hpp"

namespace tlab {

// Correlated Gaussian phi_A(xi) = exp(-1/2 xi^T (A (x) I3) xi) over the N-1
// internal 3-vector coordinates; A symmetric positive definite.
struct GaussianBasisElement {
    Eigen::MatrixXd a;
};

struct SpectralResult {
    double energy = 0.0;
    Eigen::VectorXd coefficients;   // w.r.t. normalized basis elements
    int basis_size = 0;
    double overlap_condition = 0.0;
    int dropped = 0;                // overlap directions removed by filtering
};

struct SpreadingRow {
    double lambda = 0.0;
    double energy = 0.0;
    double rho_sq = 0.0;
    std::vector<double> pair_probs;  // pair-major, L-minor, order of the request
};

struct SpreadingProfile {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> l_values;
    std::vector<SpreadingRow> rows;
    bool truncated = false;          // schedule cut where E0 >= 0
};

// An N-body variational problem: system + frame + symmetrization group.
// Permutations leaving masses and the potential table invariant are detected
// automatically; each basis element is replaced by its orbit sum, which
// symmetrizes the trial space.
class FewBodyProblem {
public:
    explicit FewBodyProblem(SystemSpec system, bool symmetrize = true);

    const SystemSpec& system() const { return system_; }
    const JacobiFrame& frame() const { return frame_; }
    int n_internal() const { return frame_.n_particles() - 1; }
    const std::vector<Eigen::MatrixXd>& symmetry_rotations() const { return rotations_; }

    // Pair interactions reduced to internal coordinates: separation
    // coefficients plus a gaussian-term representation of the radial shape
    // (non-gaussian kinds are least-squares fitted; residual recorded).
    struct PairChannel {
        int i = 0, j = 0;
        Eigen::VectorXd c;
        std::vector<GaussianTerm> terms;
        double fit_residual = 0.0;
    };
    const std::vector<PairChannel>& channels() const { return channels_; }
    Eigen::VectorXd separation(int i, int j) const;

private:
    SystemSpec system_;
    JacobiFrame frame_;
    std::vector<Eigen::MatrixXd> rotations_;   // identity included
    std::vector<PairChannel> channels_;
};

struct BasisMatrices {
    Eigen::MatrixXd s;      // overlap
    Eigen::MatrixXd t;      // kinetic
    Eigen::MatrixXd v;      // potential at unit coupling
    Eigen::MatrixXd rho2;   // sum_k |xi_k|^2 sandwich
    Eigen::VectorXd norm;   // sqrt of raw diagonal overlap used to normalize
};

// Matrix elements over the (symmetrized) basis, rows and columns scaled so
// the overlap diagonal is 1. Throws on non-SPD elements.
BasisMatrices assemble_matrices(const FewBodyProblem& problem,
                                const std::vector<GaussianBasisElement>& basis);

// Lowest generalized eigenpair of (T + lambda V) c = E S c with spectral
// filtering of overlap directions below 1e-12 of the top overlap eigenvalue.
SpectralResult ground_state(const BasisMatrices& m, double lambda);
SpectralResult ground_state(const FewBodyProblem& problem,
                            const std::vector<GaussianBasisElement>& basis,
                            double lambda);

struct GrowOptions {
    std::uint64_t seed = 0;
    int target_size = 40;
    int pool = 16;
    double b_min = 0.3;
    double b_max = 30.0;
    double lambda = 1.0;
};

// Stochastic basis growth: each step draws `pool` candidates with
// log-uniform pair length scales and keeps the one lowering the ground
// energy most. Deterministic for a fixed seed.
std::vector<GaussianBasisElement> grow_basis(const FewBodyProblem& problem,
                                             std::vector<GaussianBasisElement> basis,
                                             const GrowOptions& opts);

// Isotropic geometric ladder: A = I / b^2 over a log-spaced b grid.
std::vector<GaussianBasisElement> ladder_basis(int n_internal, double b_min,
                                               double b_max, int count);

// Diagonal anisotropic product grid for N = 3 (two internal coordinates).
std::vector<GaussianBasisElement> grid_basis(const std::vector<double>& bx,
                                             const std::vector<double>& by);

struct PairVerdict {
    int i = 0, j = 0;
    ResonanceClass cls = ResonanceClass::subcritical;
    double margin = 0.0;   // 1 - max BS eigenvalue at the probed coupling
};

struct PreconditionReport {
    std::vector<PairVerdict> pairs;
    bool all_subcritical = false;
};

// Hypothesis check: every pair subcritical at coupling lambda, with the
// reduced-mass scale folded into the reduced pair problem.
PreconditionReport subsystem_preconditions(const SystemSpec& system, double lambda,
                                           double tol, const RadialGrid& grid);

// Coupling where the lowest generalized eigenvalue crosses zero on a frozen
// basis (bisection; |E0| < 1e-6 at the returned coupling).
ThresholdReport threshold_on_basis(const FewBodyProblem& problem,
                                   const std::vector<GaussianBasisElement>& basis,
                                   double lambda_hint = 0.0);

struct NBodyThresholdReport {
    ThresholdReport threshold;
    double lambda_cr_enlarged = 0.0;  // re-estimate with `extra` more elements
    double stability = 0.0;           // relative shift
    bool stable = false;
};

struct NBodyThresholdOptions {
    std::uint64_t seed = 1;
    int basis_size = 60;
    int extra = 20;
    int pool = 12;
    double b_min = 0.3;
    double b_max = 60.0;
    double lambda_hint = 0.0;
    double stability_tol = 1e-3;
    std::vector<GaussianBasisElement> seed_basis;  // grown up to basis_size
};

NBodyThresholdReport critical_coupling_nb(const FewBodyProblem& problem,
                                          const NBodyThresholdOptions& opts);

struct AbsorptionOptions {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> l_values;
};

// Ground-state trace along a decreasing lambda schedule approaching the
// threshold from above; truncated at the first row with E0 >= 0.
SpreadingProfile absorption_trace(const FewBodyProblem& problem,
                                  const std::vector<GaussianBasisElement>& basis,
                                  const std::vector<double>& lambda_schedule,
                                  const AbsorptionOptions& opts);

} // namespace tlab
