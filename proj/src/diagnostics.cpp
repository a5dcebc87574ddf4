#include "tlab/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tlab {

namespace {

// closed-form sandwiches between two correlated Gaussians (B = A1 + A2):
// overlap, hyperradius, and the radial CDF of a pair separation with
// per-component variance q = c^T B^{-1} c
struct PairMoments {
    double s = 0.0;
    double rho2 = 0.0;
    double p_l = 0.0;
};

PairMoments moments(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2,
                    const Eigen::VectorXd& c, double l, double prefactor) {
    const Eigen::MatrixXd b = a1 + a2;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("non-SPD element pair");
    const int d = static_cast<int>(b.rows());
    const Eigen::MatrixXd binv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    double det = 1.0;
    for (int i = 0; i < d; ++i) det *= llt.matrixL()(i, i);
    det *= det;

    PairMoments m;
    m.s = prefactor / std::pow(det, 1.5);
    m.rho2 = 3.0 * binv.trace() * m.s;
    if (l > 0.0) {
        const double q = c.dot(binv * c);
        const double z = l / std::sqrt(2.0 * q);
        m.p_l = m.s * (std::erf(z) - std::sqrt(2.0 / std::numbers::pi) *
                                         (l / std::sqrt(q)) * std::exp(-z * z));
    }
    return m;
}

struct Accumulated {
    double norm = 0.0;
    double value = 0.0;
};

template <typename PerPair>
Accumulated accumulate(const ExpansionState& state, const PerPair& f) {
    const auto& pb = *state.problem;
    const int m = static_cast<int>(state.basis.size());
    const double pref = std::pow(2.0 * std::numbers::pi, 1.5 * pb.n_internal());
    Accumulated acc;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double w = state.coefficients[i] * state.coefficients[j] /
                             (state.norms[i] * state.norms[j]);
            for (const auto& r : pb.symmetry_rotations()) {
                const Eigen::MatrixXd aj = r.transpose() * state.basis[j].a * r;
                const auto [s, val] = f(state.basis[i].a, aj, pref);
                acc.norm += w * s;
                acc.value += w * val;
            }
        }
    return acc;
}

void require_normalized(double norm) {
    if (std::abs(norm - 1.0) > 1e-8)
        throw std::invalid_argument("state is not normalized");
}

} // namespace

ExpansionState make_state(const FewBodyProblem& problem,
                          const std::vector<GaussianBasisElement>& basis,
                          const BasisMatrices& m, const SpectralResult& r) {
    ExpansionState st;
    st.problem = &problem;
    st.basis = basis;
    st.coefficients = r.coefficients;
    st.norms = m.norm;
    return st;
}

double pair_probability(const ExpansionState& state, int i, int j, double l) {
    if (l < 0.0) throw std::invalid_argument("pair_probability: L must be >= 0");
    if (l == 0.0) return 0.0;
    // chi_L(r_i - r_j) is not invariant under the symmetrization group, so the
    // bra-side rotations do not collapse: average the separation functional
    // over the group (equivalently, over the orbit of the pair).
    const Eigen::VectorXd c = state.problem->separation(i, j);
    const auto& rots = state.problem->symmetry_rotations();
    double value = 0.0, norm = 0.0;
    for (const auto& rr : rots) {
        const Eigen::VectorXd cr = rr.transpose() * c;
        const auto acc = accumulate(
            state,
            [&](const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double pref) {
                const PairMoments pm = moments(a1, a2, cr, l, pref);
                return std::pair(pm.s, pm.p_l);
            });
        value += acc.value;
        norm = acc.norm;
    }
    require_normalized(norm);
    return value / (static_cast<double>(rots.size()) * norm);
}

double hyperradius_sq(const ExpansionState& state) {
    const Eigen::VectorXd dummy;
    const auto acc = accumulate(
        state, [&](const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double pref) {
            const PairMoments pm = moments(a1, a2, dummy, 0.0, pref);
            return std::pair(pm.s, pm.rho2);
        });
    require_normalized(acc.norm);
    return acc.value / acc.norm;
}

NoClusteringReport no_clustering_report(const SpreadingProfile& profile) {
    NoClusteringReport rep;
    const auto& rows = profile.rows;
    if (rows.size() < 4)
        throw std::invalid_argument("no_clustering_report: need >= 4 profile rows");
    double e_min = 1e300, e_max = 0.0;
    for (const auto& r : rows) {
        e_min = std::min(e_min, std::abs(r.energy));
        e_max = std::max(e_max, std::abs(r.energy));
    }
    if (e_max < 100.0 * e_min)
        throw std::invalid_argument(
            "no_clustering_report: profile must span two decades of |E0|");

    const int n_l = static_cast<int>(profile.l_values.size());
    const int l_idx = n_l - 1;   // verdicts taken at the largest configured L
    for (size_t p = 0; p < profile.pairs.size(); ++p) {
        PairClusterVerdict v;
        v.i = profile.pairs[p].first;
        v.j = profile.pairs[p].second;
        std::vector<double> ps;
        for (const auto& r : rows) ps.push_back(r.pair_probs[p * n_l + l_idx]);
        // rows are ordered by lambda descending == |E0| descending
        v.p_first = ps.front();
        v.p_last = ps.back();
        const bool localized = v.p_last >= rep.localized_factor * v.p_first;
        bool monotone_down = true;
        for (size_t r = 1; r < ps.size(); ++r)
            monotone_down = monotone_down && ps[r] <= ps[r - 1] + rep.noise_band;
        const bool decreasing = monotone_down && ps.back() < ps.front();
        if (localized)
            v.verdict = ClusterVerdict::localized;
        else if (decreasing)
            v.verdict = ClusterVerdict::spreading;
        else
            v.verdict = ClusterVerdict::inconclusive;
        rep.pairs.push_back(v);
    }
    return rep;
}

std::vector<double> tail_bound_probe(const PairPotential& f,
                                     const std::vector<double>& q_values,
                                     const RadialGrid& grid) {
    // chi_{r >= q} |F| (H0 + 1)^{-1} discretized on the quadrature grid and
    // symmetrized by sqrt-weight similarity; norm = largest singular value
    const int n = grid.n;
    Eigen::MatrixXd green(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double rl = std::min(grid.nodes[a], grid.nodes[b]);
            const double rg = std::max(grid.nodes[a], grid.nodes[b]);
            green(a, b) = std::sinh(rl) * std::exp(-rg);
        }
    std::vector<double> out;
    for (double q : q_values) {
        Eigen::MatrixXd m = green;
        for (int a = 0; a < n; ++a) {
            const double row = grid.nodes[a] >= q ? std::abs(f(grid.nodes[a])) *
                                                        std::sqrt(grid.weights[a])
                                                  : 0.0;
            for (int b = 0; b < n; ++b)
                m(a, b) *= row * std::sqrt(grid.weights[b]);
        }
        // power iteration on M^T M for the top singular value
        Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
        double sigma_sq = 0.0;
        for (int it = 0; it < 5000; ++it) {
            Eigen::VectorXd w = m.transpose() * (m * v);
            const double norm = w.norm();
            if (norm == 0.0) { sigma_sq = 0.0; break; }
            v = w / norm;
            const double ray = v.dot(m.transpose() * (m * v));
            if (it > 3 && std::abs(ray - sigma_sq) <= 1e-13 * std::max(1.0, ray)) {
                sigma_sq = ray;
                break;
            }
            sigma_sq = ray;
        }
        out.push_back(std::sqrt(std::max(0.0, sigma_sq)));
    }
    return out;
}

std::string to_string(ClusterVerdict v) {
    switch (v) {
        case ClusterVerdict::localized: return "localized";
        case ClusterVerdict::spreading: return "spreading";
        case ClusterVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

} // namespace tlab
