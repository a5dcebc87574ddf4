#pragma once

#include <string>
#include <vector>

#include "tlab/fewbody.hpp"

namespace tlab {

// A ground state kept together with everything needed to evaluate
// observables: the problem, its basis, and the normalized coefficients.
struct ExpansionState {
    const FewBodyProblem* problem = nullptr;
    std::vector<GaussianBasisElement> basis;
    Eigen::VectorXd coefficients;    // w.r.t. normalized elements
    Eigen::VectorXd norms;           // per-element normalization used
};

ExpansionState make_state(const FewBodyProblem& problem,
                          const std::vector<GaussianBasisElement>& basis,
                          const BasisMatrices& m, const SpectralResult& r);

// P(L) = <psi| chi_{|r_i - r_j| <= L} |psi>, from the closed-form Gaussian
// radial law of the pair separation. Throws if the state norm deviates from
// 1 by more than 1e-8.
double pair_probability(const ExpansionState& state, int i, int j, double l);

// <sum_k |xi_k|^2>, frame invariant.
double hyperradius_sq(const ExpansionState& state);

enum class ClusterVerdict { localized, spreading, inconclusive };

struct PairClusterVerdict {
    int i = 0, j = 0;
    ClusterVerdict verdict = ClusterVerdict::inconclusive;
    double p_first = 0.0;   // at largest |E0|
    double p_last = 0.0;    // at smallest |E0|
};

struct NoClusteringReport {
    std::vector<PairClusterVerdict> pairs;
    // declared margins of the finite-data proxy
    double localized_factor = 0.5;
    double noise_band = 0.02;
};

// Per-pair verdict over an absorption profile, at the largest configured L:
// "localized" if P at the smallest |E0| stays above localized_factor times P
// at the largest |E0|; "spreading" if P decreases monotonically within the
// noise band; otherwise "inconclusive". Requires >= 4 rows spanning two
// decades of |E0|.
NoClusteringReport no_clustering_report(const SpreadingProfile& profile);

// Operator norms || chi_{r >= q} |F| (H0 + 1)^{-1} || on the two-body radial
// grid, one per q.
std::vector<double> tail_bound_probe(const PairPotential& f,
                                     const std::vector<double>& q_values,
                                     const RadialGrid& grid);

std::string to_string(ClusterVerdict v);

} // namespace tlab
