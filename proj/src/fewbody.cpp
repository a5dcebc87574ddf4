#include "tlab/fewbody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "tlab/diagnostics.hpp"

namespace tlab {

namespace {

// least-squares gaussian representation of a radial shape on a weighted grid
std::pair<std::vector<GaussianTerm>, double> fit_gaussians(const PairPotential& v) {
    switch (v.kind()) {
        case PotentialKind::gaussian:
            return {{{v.depth(), v.range()}}, 0.0};
        case PotentialKind::gaussian_sum:
            return {v.terms(), 0.0};
        default:
            break;
    }
    const double b = v.range();
    const bool well = v.kind() == PotentialKind::square_well;
    const double lo = well ? 0.2 * b : 0.1 * b;
    const double hi = well ? 2.0 * b : 8.0 * b;
    const int m = 6;
    std::vector<double> ranges(m);
    for (int i = 0; i < m; ++i)
        ranges[i] = lo * std::pow(hi / lo, i / double(m - 1));
    const double r_fit = well ? 4.0 * b : 30.0 * b;
    const int pts = 600;
    Eigen::MatrixXd design(pts, m);
    Eigen::VectorXd target(pts);
    for (int p = 0; p < pts; ++p) {
        const double r = (p + 0.5) * r_fit / pts;
        const double w = r;  // radial measure weighting, softened near 0
        target[p] = w * v(r);
        for (int i = 0; i < m; ++i)
            design(p, i) = w * std::exp(-(r / ranges[i]) * (r / ranges[i]));
    }
    Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
    std::vector<GaussianTerm> terms(m);
    for (int i = 0; i < m; ++i) terms[i] = {coef[i], ranges[i]};
    const double res = (design * coef - target).norm() / std::max(1e-300, target.norm());
    return {terms, res};
}

struct RawElements {
    double s = 0.0, t = 0.0, v = 0.0, rho2 = 0.0;
};

struct ProblemCache {
    int d = 0;                      // internal dimension
    double s_prefactor = 0.0;       // (2 pi)^{3 d / 2}
};

} // namespace

FewBodyProblem::FewBodyProblem(SystemSpec system, bool symmetrize)
    : system_(std::move(system)) {
    system_.validate();
    const int n = system_.size();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    frame_ = build_frame(system_.masses, order);

    for (const auto& [key, pot] : system_.potentials) {
        PairChannel ch;
        ch.i = key.i;
        ch.j = key.j;
        ch.c = pair_separation_map(frame_, key.i, key.j);
        auto [terms, res] = fit_gaussians(pot);
        ch.terms = std::move(terms);
        ch.fit_residual = res;
        channels_.push_back(std::move(ch));
    }

    // symmetry group: permutations preserving masses and the potential table
    rotations_.push_back(Eigen::MatrixXd::Identity(n - 1, n - 1));
    if (symmetrize && n <= 6) {
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        auto same_pot = [&](int a, int b, int c, int d) {
            const PairPotential* p = system_.pair(a, b);
            const PairPotential* q = system_.pair(c, d);
            if (!p || !q) return p == q;
            return *p == *q;
        };
        while (std::next_permutation(perm.begin(), perm.end())) {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                ok = system_.masses[perm[i]] == system_.masses[i];
            for (int i = 0; i < n && ok; ++i)
                for (int j = i + 1; j < n && ok; ++j)
                    ok = same_pot(i, j, perm[i], perm[j]);
            if (!ok) continue;
            // xi' = C P W C^T xi with (P r)_i = r_{perm(i)}
            Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
            Eigen::VectorXd w(n);
            for (int i = 0; i < n; ++i) w[i] = 0.5 / system_.masses[i];
            rotations_.push_back(frame_.coords * p * w.asDiagonal() *
                                 frame_.coords.transpose());
        }
    }
}

Eigen::VectorXd FewBodyProblem::separation(int i, int j) const {
    return pair_separation_map(frame_, i, j);
}

namespace {

ProblemCache cache_for(const FewBodyProblem& pb) {
    ProblemCache c;
    c.d = pb.n_internal();
    c.s_prefactor = std::pow(2.0 * std::numbers::pi, 1.5 * c.d);
    return c;
}

// matrix elements between phi_A and phi_A' (one orbit member), closed forms
RawElements raw_elements(const FewBodyProblem& pb, const ProblemCache& cache,
                         const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2) {
    const Eigen::MatrixXd b = a1 + a2;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("basis element pair yields non-SPD overlap form");
    const Eigen::MatrixXd binv = llt.solve(Eigen::MatrixXd::Identity(cache.d, cache.d));
    double det = 1.0;
    for (int i = 0; i < cache.d; ++i) det *= llt.matrixL()(i, i);
    det *= det;

    RawElements e;
    e.s = cache.s_prefactor / std::pow(det, 1.5);
    e.t = 3.0 * (a1 * binv * a2).trace() * e.s;
    e.rho2 = 3.0 * binv.trace() * e.s;
    for (const auto& ch : pb.channels()) {
        const double q = ch.c.dot(binv * ch.c);
        for (const auto& term : ch.terms) {
            const double f = std::pow(1.0 + 2.0 * q / (term.range * term.range), -1.5);
            e.v += term.weight * f * e.s;
        }
    }
    return e;
}

RawElements orbit_elements(const FewBodyProblem& pb, const ProblemCache& cache,
                           const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2) {
    RawElements acc;
    for (const auto& r : pb.symmetry_rotations()) {
        const Eigen::MatrixXd a2r = r.transpose() * a2 * r;
        const RawElements e = raw_elements(pb, cache, a1, a2r);
        acc.s += e.s;
        acc.t += e.t;
        acc.v += e.v;
        acc.rho2 += e.rho2;
    }
    return acc;
}

void check_spd(const GaussianBasisElement& el) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(el.a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-10)
        throw std::invalid_argument("basis element correlation matrix not positive definite");
}

} // namespace

BasisMatrices assemble_matrices(const FewBodyProblem& problem,
                                const std::vector<GaussianBasisElement>& basis) {
    const int m = static_cast<int>(basis.size());
    if (m == 0) throw std::invalid_argument("assemble_matrices: empty basis");
    for (const auto& el : basis) check_spd(el);
    const ProblemCache cache = cache_for(problem);

    BasisMatrices out;
    out.s.resize(m, m);
    out.t.resize(m, m);
    out.v.resize(m, m);
    out.rho2.resize(m, m);
    out.norm.resize(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const RawElements e = orbit_elements(problem, cache, basis[i].a, basis[j].a);
            out.s(i, j) = out.s(j, i) = e.s;
            out.t(i, j) = out.t(j, i) = e.t;
            out.v(i, j) = out.v(j, i) = e.v;
            out.rho2(i, j) = out.rho2(j, i) = e.rho2;
        }
    for (int i = 0; i < m; ++i) out.norm[i] = std::sqrt(out.s(i, i));
    const Eigen::VectorXd inv = out.norm.cwiseInverse();
    for (auto* mat : {&out.s, &out.t, &out.v, &out.rho2})
        *mat = inv.asDiagonal() * (*mat) * inv.asDiagonal();
    return out;
}

SpectralResult ground_state(const BasisMatrices& m, double lambda) {
    const int n = static_cast<int>(m.s.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.s);
    const double smax = es.eigenvalues().maxCoeff();
    int keep0 = 0;
    while (keep0 < n && es.eigenvalues()[keep0] < 1e-12 * smax) ++keep0;
    const int kept = n - keep0;
    if (kept == 0) throw std::invalid_argument("ground_state: overlap numerically singular");
    const Eigen::MatrixXd z =
        es.eigenvectors().rightCols(kept) *
        es.eigenvalues().tail(kept).cwiseSqrt().cwiseInverse().asDiagonal();
    const Eigen::MatrixXd h = m.t + lambda * m.v;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(z.transpose() * h * z);
    SpectralResult r;
    r.energy = eh.eigenvalues()[0];
    r.coefficients = z * eh.eigenvectors().col(0);
    r.basis_size = n;
    r.overlap_condition = smax / es.eigenvalues().minCoeff();
    r.dropped = keep0;
    return r;
}

SpectralResult ground_state(const FewBodyProblem& problem,
                            const std::vector<GaussianBasisElement>& basis,
                            double lambda) {
    return ground_state(assemble_matrices(problem, basis), lambda);
}

std::vector<GaussianBasisElement> ladder_basis(int n_internal, double b_min,
                                               double b_max, int count) {
    if (count < 1 || !(b_min > 0.0) || !(b_max > b_min))
        throw std::invalid_argument("ladder_basis: bad parameters");
    std::vector<GaussianBasisElement> out;
    for (int i = 0; i < count; ++i) {
        const double b =
            count == 1 ? b_min : b_min * std::pow(b_max / b_min, i / double(count - 1));
        out.push_back({Eigen::MatrixXd::Identity(n_internal, n_internal) / (b * b)});
    }
    return out;
}

std::vector<GaussianBasisElement> grid_basis(const std::vector<double>& bx,
                                             const std::vector<double>& by) {
    std::vector<GaussianBasisElement> out;
    for (double x : bx)
        for (double y : by) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
            a(0, 0) = 1.0 / (x * x);
            a(1, 1) = 1.0 / (y * y);
            out.push_back({a});
        }
    return out;
}

std::vector<GaussianBasisElement> grow_basis(const FewBodyProblem& problem,
                                             std::vector<GaussianBasisElement> basis,
                                             const GrowOptions& opts) {
    if (opts.target_size < static_cast<int>(basis.size())) return basis;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = problem.system().size();
    const int d = problem.n_internal();

    std::vector<Eigen::VectorXd> seps;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) seps.push_back(problem.separation(i, j));

    auto draw = [&]() {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
        for (const auto& c : seps) {
            const double b =
                opts.b_min * std::pow(opts.b_max / opts.b_min, unif(rng));
            a += (c * c.transpose()) / (b * b);
        }
        // small diagonal floor keeps candidates safely SPD
        a += 1e-10 * Eigen::MatrixXd::Identity(d, d);
        return GaussianBasisElement{a};
    };

    while (static_cast<int>(basis.size()) < opts.target_size) {
        double best = std::numeric_limits<double>::infinity();
        GaussianBasisElement best_el;
        for (int p = 0; p < opts.pool; ++p) {
            GaussianBasisElement cand = draw();
            basis.push_back(cand);
            double e;
            try {
                e = ground_state(problem, basis, opts.lambda).energy;
            } catch (const std::invalid_argument&) {
                e = std::numeric_limits<double>::infinity();
            }
            basis.pop_back();
            if (e < best) {
                best = e;
                best_el = cand;
            }
        }
        basis.push_back(best_el);
    }
    return basis;
}

PreconditionReport subsystem_preconditions(const SystemSpec& system, double lambda,
                                           double tol, const RadialGrid& grid) {
    PreconditionReport rep;
    rep.all_subcritical = true;
    const int n = system.size();
    if (n == 2) return rep;  // no proper subsystem with internal dynamics
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const PairPotential* v = system.pair(i, j);
            if (!v || !v->has_negative_part()) continue;
            const double mu_ij = system.masses[i] * system.masses[j] /
                                 (system.masses[i] + system.masses[j]);
            const double alpha = 1.0 / std::sqrt(2.0 * mu_ij);
            PairVerdict pv;
            pv.i = i;
            pv.j = j;
            const PairPotential scaled = v->scaled(alpha);
            pv.margin = 1.0 - bs_max_eigenvalue(scaled, lambda, 0.0, grid);
            pv.cls = resonance_check(scaled, lambda, tol, grid);
            rep.all_subcritical =
                rep.all_subcritical && pv.cls == ResonanceClass::subcritical;
            rep.pairs.push_back(pv);
        }
    return rep;
}

ThresholdReport threshold_on_basis(const FewBodyProblem& problem,
                                   const std::vector<GaussianBasisElement>& basis,
                                   double lambda_hint) {
    const BasisMatrices m = assemble_matrices(problem, basis);
    auto e0 = [&](double lam) { return ground_state(m, lam).energy; };

    double hi = lambda_hint > 0.0 ? lambda_hint : 1.0;
    double lo = 0.0;
    // find a bound side
    double e_hi = e0(hi);
    int iters = 1;
    while (e_hi >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
            throw std::domain_error("threshold_on_basis: no binding below lambda = 1e6");
        e_hi = e0(hi);
        ++iters;
    }
    // walk the unbound side up toward hi if the hint started bound
    while (lo == 0.0 || e0(lo) < 0.0) {
        if (lo == 0.0) {
            lo = hi / 2.0;
            continue;
        }
        hi = lo;
        lo /= 2.0;
        ++iters;
    }
    ThresholdReport rep;
    double e_mid = 1.0;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        e_mid = e0(mid);
        ++iters;
        if (e_mid < 0.0)
            hi = mid;
        else
            lo = mid;
        if (std::abs(e_mid) < 1e-9) break;
    }
    rep.lambda_lo = lo;
    rep.lambda_hi = hi;
    rep.lambda_cr = 0.5 * (lo + hi);
    rep.residual = std::abs(e_mid);
    rep.iterations = iters;
    return rep;
}

NBodyThresholdReport critical_coupling_nb(const FewBodyProblem& problem,
                                          const NBodyThresholdOptions& opts) {
    std::vector<GaussianBasisElement> basis = opts.seed_basis;
    if (basis.empty())
        basis = ladder_basis(problem.n_internal(), opts.b_min,
                             std::min(opts.b_max, 50.0), 12);

    double lambda_work = opts.lambda_hint;
    if (lambda_work <= 0.0) {
        // coarse hunt for a bound coupling on the seed ladder
        lambda_work = 1.0;
        while (ground_state(problem, basis, lambda_work).energy >= 0.0) {
            lambda_work *= 2.0;
            if (lambda_work > 1e6)
                throw std::domain_error("critical_coupling_nb: no binding found");
        }
    }
    GrowOptions g;
    g.seed = opts.seed;
    g.target_size = opts.basis_size;
    g.pool = opts.pool;
    g.b_min = opts.b_min;
    g.b_max = opts.b_max;
    g.lambda = lambda_work;
    basis = grow_basis(problem, basis, g);

    NBodyThresholdReport rep;
    rep.threshold = threshold_on_basis(problem, basis, lambda_work);

    GrowOptions g2 = g;
    g2.seed = opts.seed + 1;
    g2.target_size = static_cast<int>(basis.size()) + opts.extra;
    const auto enlarged = grow_basis(problem, basis, g2);
    rep.lambda_cr_enlarged =
        threshold_on_basis(problem, enlarged, rep.threshold.lambda_cr).lambda_cr;
    rep.stability = std::abs(rep.lambda_cr_enlarged - rep.threshold.lambda_cr) /
                    rep.threshold.lambda_cr;
    rep.stable = rep.stability < opts.stability_tol;
    return rep;
}

SpreadingProfile absorption_trace(const FewBodyProblem& problem,
                                  const std::vector<GaussianBasisElement>& basis,
                                  const std::vector<double>& lambda_schedule,
                                  const AbsorptionOptions& opts) {
    SpreadingProfile profile;
    profile.pairs = opts.pairs;
    profile.l_values = opts.l_values;
    const BasisMatrices m = assemble_matrices(problem, basis);
    for (double lam : lambda_schedule) {
        const SpectralResult r = ground_state(m, lam);
        if (r.energy >= 0.0) {
            profile.truncated = true;
            break;
        }
        SpreadingRow row;
        row.lambda = lam;
        row.energy = r.energy;
        row.rho_sq = r.coefficients.dot(m.rho2 * r.coefficients);
        const ExpansionState state = make_state(problem, basis, m, r);
        for (const auto& [i, j] : opts.pairs)
            for (double l : opts.l_values)
                row.pair_probs.push_back(pair_probability(state, i, j, l));
        profile.rows.push_back(std::move(row));
    }
    return profile;
}

} // namespace tlab
