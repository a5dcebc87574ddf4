#include "tlab/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "tlab/quadrature.hpp"

namespace tlab {

RadialGrid RadialGrid::composite_gl(double r_max, int n) {
    if (!(r_max > 0.0) || n < 4)
        throw std::invalid_argument("RadialGrid: need r_max > 0 and n >= 4");
    static const GaussLegendreRule rule(4);
    const int panels = n / 4;
    RadialGrid g;
    g.r_max = r_max;
    g.n = 4 * panels;
    g.nodes.resize(g.n);
    g.weights.resize(g.n);
    const double h = r_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * h;
        for (int q = 0; q < 4; ++q) {
            g.nodes[4 * p + q] = c + 0.5 * h * rule.x[q];
            g.weights[4 * p + q] = 0.5 * h * rule.w[q];
        }
    }
    return g;
}

namespace {

// ---- tridiagonal finite-difference machinery (uniform mesh, Dirichlet) ----

struct Tridiag {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;   // size n-1, constant in principle but kept general
    double h = 0.0;
    Eigen::VectorXd r;     // mesh nodes
};

Tridiag fd_matrix(const std::function<double(double)>& q, double r_max, int n) {
    Tridiag t;
    t.h = r_max / (n + 1);
    t.r.resize(n);
    t.diag.resize(n);
    t.off = Eigen::VectorXd::Constant(n - 1, -1.0 / (t.h * t.h));
    for (int i = 0; i < n; ++i) {
        t.r[i] = (i + 1) * t.h;
        t.diag[i] = 2.0 / (t.h * t.h) + q(t.r[i]);
    }
    return t;
}

// number of eigenvalues strictly below x (Sturm / LDL^T inertia count)
int sturm_count(const Tridiag& t, double x) {
    int count = 0;
    double d = t.diag[0] - x;
    if (d < 0.0) ++count;
    for (int i = 1; i < t.diag.size(); ++i) {
        double denom = (d == 0.0) ? 1e-300 : d;
        d = (t.diag[i] - x) - t.off[i - 1] * t.off[i - 1] / denom;
        if (d < 0.0) ++count;
    }
    return count;
}

// k-th eigenvalue (0-based) by bisection
double sturm_eigenvalue(const Tridiag& t, int k, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> gershgorin(const Tridiag& t) {
    double lo = t.diag[0], hi = t.diag[0];
    const int n = static_cast<int>(t.diag.size());
    for (int i = 0; i < n; ++i) {
        double radius = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                        (i + 1 < n ? std::abs(t.off[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    return {lo, hi};
}

// eigenvector by shifted inverse iteration (Thomas solves)
Eigen::VectorXd inverse_iteration(const Tridiag& t, double eig) {
    const int n = static_cast<int>(t.diag.size());
    const double shift = eig + 1e-10 * std::max(1.0, std::abs(eig));
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    Eigen::VectorXd c(n), d(n);
    for (int iter = 0; iter < 8; ++iter) {
        // Thomas solve (T - shift) w = v
        d[0] = t.diag[0] - shift;
        c[0] = v[0];
        for (int i = 1; i < n; ++i) {
            double m = t.off[i - 1] / d[i - 1];
            d[i] = (t.diag[i] - shift) - m * t.off[i - 1];
            if (std::abs(d[i]) < 1e-300) d[i] = 1e-300;
            c[i] = v[i] - m * c[i - 1];
        }
        v[n - 1] = c[n - 1] / d[n - 1];
        for (int i = n - 2; i >= 0; --i)
            v[i] = (c[i] - t.off[i] * v[i + 1]) / d[i];
        v.normalize();
    }
    return v;
}

// ---- s-wave Green function of -u'' + (lambda v_+ + k^2) u ----

// Regular (u(0)=0) and decaying solutions sampled at the requested radii,
// integrated with fixed-step RK4 on u'' = q(r) u.
struct GreenSolution {
    std::vector<double> u_reg;
    std::vector<double> u_dec;
    double wronskian = 0.0;
};

void rk4_step(const std::function<double(double)>& q, double& r, double& u,
              double& up, double h) {
    auto f = [&](double rr, double uu, double pp, double& du, double& dp) {
        du = pp;
        dp = q(rr) * uu;
    };
    double k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
    f(r, u, up, k1u, k1p);
    f(r + 0.5 * h, u + 0.5 * h * k1u, up + 0.5 * h * k1p, k2u, k2p);
    f(r + 0.5 * h, u + 0.5 * h * k2u, up + 0.5 * h * k2p, k3u, k3p);
    f(r + h, u + h * k3u, up + h * k3p, k4u, k4p);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    up += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    r += h;
}

void integrate_to(const std::function<double(double)>& q, double& r, double& u,
                  double& up, double target, double h_max) {
    const double span = target - r;
    if (span == 0.0) return;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / h_max)));
    const double h = span / steps;
    for (int i = 0; i < steps; ++i) rk4_step(q, r, u, up, h);
}

GreenSolution green_solutions(const PairPotential& v, double lambda, double k,
                              const std::vector<double>& radii, double r_inf) {
    if (k <= 0.0) throw std::logic_error("green_solutions: k must be > 0");
    auto q = [&](double r) { return lambda * v.positive_part(r) + k * k; };
    GreenSolution sol;
    sol.u_reg.resize(radii.size());
    sol.u_dec.resize(radii.size());

    double r = 0.0, u = 0.0, up = 1.0;
    for (size_t i = 0; i < radii.size(); ++i) {
        integrate_to(q, r, u, up, radii[i], 5e-4);
        sol.u_reg[i] = u;
    }
    double w_at_end = 0.0;
    {
        double rr = r, uu = u, uup = up;
        integrate_to(q, rr, uu, uup, r_inf, 5e-4);
        const double ud = std::exp(-k * r_inf), udp = -k * ud;
        w_at_end = uup * ud - uu * udp;
    }

    double rd = r_inf, ud = std::exp(-k * r_inf), udp = -k * ud;
    for (int i = static_cast<int>(radii.size()) - 1; i >= 0; --i) {
        integrate_to(q, rd, ud, udp, radii[i], 5e-4);
        sol.u_dec[i] = ud;
    }
    sol.wronskian = w_at_end;
    return sol;
}

double max_eigenvalue_sym(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 0.0;
    // power iteration works well here (PSD kernels with a healthy gap);
    // fall back to a full solve if it stalls
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    double prev = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Eigen::VectorXd w = m * v;
        double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        double ray = v.dot(m * v);
        if (it > 4 && std::abs(ray - prev) <= 1e-13 * std::max(1.0, std::abs(ray)))
            return ray;
        prev = ray;
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
               m, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .maxCoeff();
}

} // namespace

BoundStateResult bound_states(const PairPotential& v, double lambda,
                              double r_max, int n) {
    if (lambda < 0.0) throw std::invalid_argument("bound_states: lambda must be >= 0");
    auto t = fd_matrix([&](double r) { return lambda * v(r); }, r_max, n);
    BoundStateResult out;
    const int below = sturm_count(t, 0.0);
    if (below == 0) return out;
    auto [lo, hi] = gershgorin(t);
    out.energies.reserve(below);
    for (int kk = 0; kk < below; ++kk)
        out.energies.push_back(sturm_eigenvalue(t, kk, lo, 0.0));
    const Eigen::VectorXd u0 = inverse_iteration(t, out.energies.front());
    out.grid_warning =
        std::abs(u0[n - 1]) > 1e-8 * u0.cwiseAbs().maxCoeff();
    return out;
}

std::vector<double> fd_low_eigenvalues(const PairPotential& v, double lambda,
                                       double r_max, int n, int num_eigs,
                                       double e_cap) {
    auto t = fd_matrix([&](double r) { return lambda * v(r); }, r_max, n);
    auto [lo, hi] = gershgorin(t);
    const int below = std::min(num_eigs, sturm_count(t, e_cap));
    std::vector<double> out;
    for (int kk = 0; kk < below; ++kk)
        out.push_back(sturm_eigenvalue(t, kk, lo, e_cap));
    return out;
}

ScatteringLengthResult scattering_length(const PairPotential& v, double lambda) {
    ScatteringLengthResult out;
    if (lambda == 0.0) return out;  // free motion: u = r exactly, a = 0
    const double r_v = v.support_radius();
    const double r_end = r_v * 1.5 + 2.0;
    const int steps = 200000;
    const double h = r_end / steps;
    // Numerov for u'' = f(r) u, f = lambda v (zero-energy s-wave)
    auto f = [&](double r) { return lambda * v(r); };
    double r = h;
    double u_prev = 0.0;
    double u = h;   // u ~ r near the origin
    auto w_of = [&](double rr, double uu) { return (1.0 - h * h / 12.0 * f(rr)) * uu; };
    double w_prev = 0.0, w = w_of(r, u);
    std::vector<double> rs, us;
    for (int i = 1; i < steps; ++i) {
        double w_next = 2.0 * w - w_prev + h * h * f(r) * u;
        w_prev = w;
        w = w_next;
        r += h;
        u = w / (1.0 - h * h / 12.0 * f(r));
        if (r > r_v && rs.size() < 3 &&
            (rs.empty() || r >= rs.back() + 0.4 * (r_end - r_v))) {
            rs.push_back(r);
            us.push_back(u);
        }
    }
    if (rs.size() < 2) {
        out.converged = false;
        return out;
    }
    const double r1 = rs[0], u1 = us[0], r2 = rs[1], u2 = us[1];
    const double du = u2 - u1;
    if (std::abs(du) < 1e-14 * std::max(std::abs(u1), std::abs(u2))) {
        out.divergent = true;
        return out;
    }
    out.a = (r1 * u2 - r2 * u1) / du;
    if (rs.size() >= 3) {
        // third point checks the asymptote really is linear
        const double pred = us[0] + (us[1] - us[0]) * (rs[2] - rs[0]) / (rs[1] - rs[0]);
        out.converged = std::abs(pred - us[2]) <=
                        1e-8 * std::max({std::abs(us[0]), std::abs(us[1]), std::abs(us[2])});
    }
    if (std::abs(out.a) > 1e8) out.divergent = true;
    return out;
}

BSMatrix build_bs_matrix(const PairPotential& v, double lambda, double k,
                         const RadialGrid& grid) {
    if (!(k > 0.0)) throw std::invalid_argument("build_bs_matrix: k must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("build_bs_matrix: lambda must be > 0");
    BSMatrix m;
    m.lambda = lambda;
    m.k = k;

    double vmax = 0.0;
    for (int i = 0; i < grid.n; ++i)
        vmax = std::max(vmax, v.negative_part(grid.nodes[i]));
    for (int i = 0; i < grid.n; ++i)
        if (v.negative_part(grid.nodes[i]) > 1e-14 * vmax) m.node_index.push_back(i);
    const int nk = static_cast<int>(m.node_index.size());
    m.entries = Eigen::MatrixXd::Zero(nk, nk);
    if (nk == 0) return m;

    std::vector<double> radii(nk);
    Eigen::VectorXd s(nk);
    for (int a = 0; a < nk; ++a) {
        const int i = m.node_index[a];
        radii[a] = grid.nodes[i];
        s[a] = std::sqrt(grid.weights[i] * v.negative_part(grid.nodes[i]));
    }

    bool has_plus = false;
    for (int i = 0; i < grid.n; ++i)
        if (v.positive_part(grid.nodes[i]) > 0.0) { has_plus = true; break; }

    if (!has_plus) {
        // analytic half-line kernel G_k(r,r') = sinh(k r_<) e^{-k r_>} / k
        for (int a = 0; a < nk; ++a)
            for (int b = 0; b <= a; ++b) {
                const double rl = radii[b], rg = radii[a];
                const double g = std::sinh(k * rl) * std::exp(-k * rg) / k;
                m.entries(a, b) = m.entries(b, a) = lambda * s[a] * s[b] * g;
            }
        return m;
    }

    const auto sol = green_solutions(v, lambda, k, radii, grid.r_max);
    if (!(sol.wronskian > 0.0))
        throw std::logic_error("build_bs_matrix: resolvent singular (unexpected for v_+ >= 0)");
    for (int a = 0; a < nk; ++a)
        for (int b = 0; b <= a; ++b) {
            const double g = sol.u_reg[b] * sol.u_dec[a] / sol.wronskian;
            m.entries(a, b) = m.entries(b, a) = lambda * s[a] * s[b] * g;
        }
    return m;
}

double bs_max_eigenvalue(const PairPotential& v, double lambda, double k,
                         const RadialGrid& grid) {
    if (k == 0.0) {
        // Richardson in k: the top eigenvalue is linear in k near zero
        const double mu1 = max_eigenvalue_sym(build_bs_matrix(v, lambda, 1e-3, grid).entries);
        const double mu2 = max_eigenvalue_sym(build_bs_matrix(v, lambda, 2e-3, grid).entries);
        return 2.0 * mu1 - mu2;
    }
    return max_eigenvalue_sym(build_bs_matrix(v, lambda, k, grid).entries);
}

int bs_count_above_one(const PairPotential& v, double lambda, double k,
                       const RadialGrid& grid) {
    const auto m = build_bs_matrix(v, lambda, k, grid);
    if (m.entries.rows() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.entries, Eigen::EigenvaluesOnly);
    int count = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] > 1.0) ++count;
    return count;
}

ThresholdReport critical_coupling_2b(const PairPotential& v,
                                     const RadialGrid& grid, double lambda_max) {
    if (!v.has_negative_part())
        throw std::domain_error("no attractive threshold: v has no negative part");
    auto mu0 = [&](double lam) { return bs_max_eigenvalue(v, lam, 0.0, grid); };

    double lo = 0.0, hi = 1.0;
    double mu_hi = mu0(hi);
    while (mu_hi < 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > lambda_max)
            throw std::domain_error("no attractive threshold: no crossing below lambda_max");
        mu_hi = mu0(hi);
    }
    ThresholdReport rep;
    int iters = 0;
    // secant-tightened initial bracket (exact when v_+ = 0, where mu is
    // linear in lambda), then plain bisection on mu - 1
    {
        const double guess = hi / mu_hi;
        const double a = std::max(lo, guess * (1.0 - 1e-3));
        const double b = std::min(hi, guess * (1.0 + 1e-3));
        if (a > lo && mu0(a) < 1.0) { lo = a; ++iters; }
        if (b < hi && mu0(b) >= 1.0) { hi = b; ++iters; }
    }
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        ++iters;
        if (mu0(mid) >= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    rep.lambda_lo = lo;
    rep.lambda_hi = hi;
    rep.lambda_cr = 0.5 * (lo + hi);
    rep.residual = hi - lo;
    rep.iterations = iters;
    return rep;
}

ResonanceClass resonance_check(const PairPotential& v, double lambda,
                               double tol, const RadialGrid& grid) {
    if (!(tol > 0.0)) throw std::invalid_argument("resonance_check: tol must be > 0");
    const double mu = bs_max_eigenvalue(v, lambda, 0.0, grid);
    if (mu < 1.0 - tol) return ResonanceClass::subcritical;
    if (mu > 1.0 + tol) return ResonanceClass::bound;
    return ResonanceClass::resonant;
}

DefsProbeReport defs_probe(const PairPotential& v, double lambda,
                           const std::vector<double>& epsilons, double r_max,
                           int n, double tol) {
    DefsProbeReport rep;
    rep.lambda = lambda;
    auto vr = [](double r) { return 1.0 / (1.0 + r * r); };
    auto lowest = [&](const std::function<double(double)>& q,
                      double kinetic_factor) {
        auto t = fd_matrix(q, r_max, n);
        if (kinetic_factor != 1.0) {
            t.off *= kinetic_factor;
            for (int i = 0; i < n; ++i)
                t.diag[i] = kinetic_factor * 2.0 / (t.h * t.h) + q(t.r[i]);
        }
        auto [lo, hi] = gershgorin(t);
        return sturm_eigenvalue(t, 0, lo, hi);
    };

    for (double eps : epsilons) {
        DefsProbeEntry e;
        e.epsilon = eps;
        // extra raw potential; extra kinetic fraction removed; regularizer drain
        e.def1_min_eig = lowest([&](double r) { return lambda * v(r) + eps * v(r); }, 1.0);
        e.def2_min_eig = lowest([&](double r) { return lambda * v(r); }, eps);
        e.def3_min_eig = lowest([&](double r) { return lambda * v(r) - eps * vr(r); }, 1.0);
        e.def1_holds = e.def1_min_eig < -tol;
        e.def2_holds = e.def2_min_eig < -tol;
        e.def3_holds = e.def3_min_eig < -tol;
        rep.entries.push_back(e);
    }

    // kinetic-reserve witness: largest eps0 on the scan grid keeping
    // (1 - eps0) T + lambda v non-negative
    const std::vector<double> scan = {0.001, 0.002, 0.005, 0.01, 0.02, 0.03,
                                      0.05, 0.075, 0.1, 0.15, 0.2};
    for (double eps0 : scan) {
        const double val = lowest([&](double r) { return lambda * v(r); }, 1.0 - eps0);
        if (val >= -tol) {
            rep.eps0_max = eps0;
            rep.eps0_witness_eig = val;
        }
    }
    if (rep.eps0_max > 0.0) {
        rep.hardy_witness_eig = lowest(
            [&](double r) { return lambda * v(r) - rep.eps0_max * 0.25 * vr(r); }, 1.0);
        rep.hardy_holds = rep.hardy_witness_eig >= -tol;
    }
    return rep;
}

} // namespace tlab
