#include "tlab/jacobi.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tlab {

double JacobiFrame::alpha() const {
    // scale of the first internal coordinate: x = (r_{o1} - r_{o0}) / alpha
    const double m1 = masses[ordering[0]], m2 = masses[ordering[1]];
    const double mu = m1 * m2 / (m1 + m2);
    return 1.0 / std::sqrt(2.0 * mu);
}

double JacobiFrame::gamma() const {
    if (n_particles() < 3) throw std::logic_error("gamma needs N >= 3");
    const double m1 = masses[ordering[0]], m2 = masses[ordering[1]],
                 m3 = masses[ordering[2]];
    const double big_m = (m1 + m2) * m3 / (m1 + m2 + m3);
    return 1.0 / std::sqrt(2.0 * big_m);
}

JacobiFrame build_frame(const std::vector<double>& masses,
                        const std::vector<int>& ordering) {
    const int n = static_cast<int>(masses.size());
    if (n < 2) throw std::invalid_argument("build_frame: need >= 2 particles");
    if (static_cast<int>(ordering.size()) != n)
        throw std::invalid_argument("build_frame: ordering must list every particle once");
    std::vector<bool> seen(n, false);
    for (int idx : ordering) {
        if (idx < 0 || idx >= n || seen[idx])
            throw std::invalid_argument("build_frame: ordering must be a permutation");
        seen[idx] = true;
    }
    for (double m : masses)
        if (!(m > 0.0)) throw std::invalid_argument("build_frame: masses must be > 0");

    JacobiFrame f;
    f.masses = masses;
    f.ordering = ordering;
    f.coords = Eigen::MatrixXd::Zero(n - 1, n);

    // Sequential clustering: coordinate k separates particle ordering[k+1]
    // from the centre of mass of the first k+1 particles, scaled so that
    // C diag(1/2m) C^T = I.
    double cluster_mass = masses[ordering[0]];
    Eigen::VectorXd cm = Eigen::VectorXd::Zero(n);
    cm[ordering[0]] = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
        const int nxt = ordering[k + 1];
        const double m_next = masses[nxt];
        const double mu = cluster_mass * m_next / (cluster_mass + m_next);
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        row[nxt] = 1.0;
        row -= cm;
        f.coords.row(k) = std::sqrt(2.0 * mu) * row;
        cm = (cluster_mass * cm + m_next * Eigen::VectorXd::Unit(n, nxt)) /
             (cluster_mass + m_next);
        cluster_mass += m_next;
    }
    return f;
}

static Eigen::VectorXd inv_two_m(const JacobiFrame& f) {
    Eigen::VectorXd w(f.masses.size());
    for (size_t i = 0; i < f.masses.size(); ++i) w[i] = 0.5 / f.masses[i];
    return w;
}

Eigen::MatrixXd kinematic_rotation(const JacobiFrame& a, const JacobiFrame& b) {
    if (a.masses != b.masses)
        throw std::invalid_argument("kinematic_rotation: frames over different masses");
    // Rows of both coordinate matrices live in the zero-total-momentum
    // subspace where W C^T acts as a right inverse, so M = C_b W C_a^T is
    // exact and orthogonal.
    return b.coords * inv_two_m(a).asDiagonal() * a.coords.transpose();
}

Eigen::VectorXd pair_separation_map(const JacobiFrame& frame, int i, int j) {
    const int n = frame.n_particles();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("pair_separation_map: invalid pair");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d[i] = 1.0;
    d[j] = -1.0;
    return frame.coords * inv_two_m(frame).asDiagonal() * d;
}

double rotation_residual(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd r = m * m.transpose();
    r.diagonal().array() -= 1.0;
    return r.cwiseAbs().maxCoeff();
}

double kinetic_residual(const JacobiFrame& frame) {
    Eigen::MatrixXd g =
        frame.coords * inv_two_m(frame).asDiagonal() * frame.coords.transpose();
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

} // namespace tlab
