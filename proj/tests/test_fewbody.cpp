#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tlab/diagnostics.hpp"
#include "tlab/fewbody.hpp"

using namespace tlab;

namespace {
const double pi = std::numbers::pi;

SystemSpec three_bosons(double depth = -1.0, double range = 1.0) {
    auto g = PairPotential::gaussian(depth, range);
    return SystemSpec{{1.0, 1.0, 1.0}, {{{0, 1}, g}, {{0, 2}, g}, {{1, 2}, g}}, 1.0};
}
}  // namespace

TEST_CASE("closed-form overlap and kinetic elements, identity correlations") {
    // N = 3, A_i = A_j = I: S = (2 pi)^3 / det(2 I)^{3/2} = pi^3, T = 3 S.
    // assemble_matrices normalizes, so probe the raw values via the norms.
    FewBodyProblem pb(three_bosons(), /*symmetrize=*/false);
    std::vector<GaussianBasisElement> basis = {{Eigen::MatrixXd::Identity(2, 2)}};
    auto m = assemble_matrices(pb, basis);
    double s_raw = m.norm(0) * m.norm(0);   // rows scaled by 1/norm, diag = 1
    CHECK(s_raw == doctest::Approx(pi * pi * pi).epsilon(1e-12));
    CHECK(m.s(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m.t(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
    // <rho^2> for density ~ e^{-xi^2} over 6 internal dimensions is 3
    CHECK(m.rho2(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("matrix elements against a Monte Carlo oracle") {
    FewBodyProblem pb(three_bosons(), false);
    Eigen::MatrixXd a1(2, 2), a2(2, 2);
    a1 << 1.3, 0.4, 0.4, 0.9;
    a2 << 0.7, -0.2, -0.2, 1.6;
    std::vector<GaussianBasisElement> basis = {{a1}, {a2}};
    auto m = assemble_matrices(pb, basis);

    const Eigen::MatrixXd b = a1 + a2;
    const Eigen::MatrixXd a1a2 = a1 * a2;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(2, 2));
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    const int samples = 500000;

    // raw S and T by importance sampling from the standard normal; V, rho2
    // as ratios under the exact product-gaussian measure (covariance B^{-1})
    double sum_s = 0.0, sum_t = 0.0, sum_v = 0.0, sum_r2 = 0.0;
    std::vector<Eigen::VectorXd> seps;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) seps.push_back(pb.separation(i, j));
    for (int s = 0; s < samples; ++s) {
        Eigen::MatrixXd g(2, 3);
        for (int i = 0; i < 2; ++i)
            for (int d = 0; d < 3; ++d) g(i, d) = nd(rng);
        // standard-normal draw: weight e^{-1/2 xi^T (B - I) xi}
        double w = std::exp(-0.5 * ((b - Eigen::MatrixXd::Identity(2, 2)) *
                                    (g * g.transpose())).trace());
        sum_s += w;
        sum_t += w * (a1a2 * (g * g.transpose())).trace();

        Eigen::MatrixXd xi = linv.transpose() * g;   // covariance B^{-1}
        for (const auto& c : seps) {
            Eigen::RowVector3d sep = c(0) * xi.row(0) + c(1) * xi.row(1);
            sum_v += -std::exp(-sep.squaredNorm());
        }
        sum_r2 += xi.squaredNorm();
    }
    const double vol = std::pow(2.0 * pi, 3.0);
    double s_mc = vol * sum_s / samples;
    double t_mc = vol * sum_t / samples;

    double s01 = m.norm(0) * m.norm(1) * m.s(0, 1);
    CHECK(s01 == doctest::Approx(s_mc).epsilon(0.01));
    CHECK(m.t(0, 1) * m.norm(0) * m.norm(1) == doctest::Approx(t_mc).epsilon(0.01));
    CHECK(m.v(0, 1) * m.norm(0) * m.norm(1) / s01 ==
          doctest::Approx(sum_v / samples).epsilon(0.01));
    CHECK(m.rho2(0, 1) * m.norm(0) * m.norm(1) / s01 ==
          doctest::Approx(sum_r2 / samples).epsilon(0.01));
}

TEST_CASE("variational principle and free positivity") {
    FewBodyProblem pb(three_bosons());
    auto basis = ladder_basis(2, 0.5, 8.0, 10);
    CHECK(ground_state(pb, basis, 0.0).energy > 0.0);

    double e10 = ground_state(pb, basis, 3.0).energy;
    auto bigger = ladder_basis(2, 0.4, 12.0, 18);
    bigger.insert(bigger.end(), basis.begin(), basis.end());
    double e28 = ground_state(pb, bigger, 3.0).energy;
    CHECK(e28 <= e10 + 1e-12);
}

TEST_CASE("N = 2 reduction agrees with the radial FD solver") {
    auto g = PairPotential::gaussian(-1.0, 1.0);
    SystemSpec two{{1.0, 1.0}, {{{0, 1}, g}}, 1.0};
    FewBodyProblem pb(two);
    const double lam = 1.5 * 2.6839721348805465;

    auto basis = ladder_basis(1, 0.2, 30.0, 40);
    double e_var = ground_state(pb, basis, lam).energy;

    auto fd = bound_states(g, lam, 40.0, 20000);
    REQUIRE(fd.energies.size() >= 1);
    CHECK(e_var == doctest::Approx(fd.energies[0]).epsilon(1e-5));
}

TEST_CASE("scaling covariance: b -> s b gives E -> E/s^2, rho2 -> s^2 rho2") {
    const double s = 1.7;
    FewBodyProblem pb1(three_bosons(-1.0, 1.0));
    FewBodyProblem pb2(three_bosons(-1.0 / (s * s), s));
    const double lam = 3.2;

    auto basis1 = ladder_basis(2, 0.5, 10.0, 12);
    std::vector<GaussianBasisElement> basis2;
    for (const auto& el : basis1) basis2.push_back({el.a / (s * s)});

    auto m1 = assemble_matrices(pb1, basis1);
    auto m2 = assemble_matrices(pb2, basis2);
    auto r1 = ground_state(m1, lam);
    auto r2 = ground_state(m2, lam);
    CHECK(r2.energy == doctest::Approx(r1.energy / (s * s)).epsilon(1e-10));

    auto st1 = make_state(pb1, basis1, m1, r1);
    auto st2 = make_state(pb2, basis2, m2, r2);
    CHECK(hyperradius_sq(st2) ==
          doctest::Approx(s * s * hyperradius_sq(st1)).epsilon(1e-10));
}

TEST_CASE("permutation symmetry of pair probabilities for equal bosons") {
    FewBodyProblem pb(three_bosons());
    // deliberately asymmetric seed elements; orbit sums restore the symmetry
    Eigen::MatrixXd a(2, 2);
    a << 2.0, 0.3, 0.3, 0.4;
    std::vector<GaussianBasisElement> basis = {{a}};
    auto lad = ladder_basis(2, 0.5, 10.0, 10);
    basis.insert(basis.end(), lad.begin(), lad.end());

    auto m = assemble_matrices(pb, basis);
    auto r = ground_state(m, 3.2);
    REQUIRE(r.energy < 0.0);
    auto st = make_state(pb, basis, m, r);
    double p01 = pair_probability(st, 0, 1, 2.0);
    double p02 = pair_probability(st, 0, 2, 2.0);
    double p12 = pair_probability(st, 1, 2, 2.0);
    CHECK(std::abs(p01 - p02) < 1e-8);
    CHECK(std::abs(p01 - p12) < 1e-8);
}

TEST_CASE("grow_basis is deterministic and monotone") {
    FewBodyProblem pb(three_bosons());
    GrowOptions opts;
    opts.seed = 12345;
    opts.target_size = 8;
    opts.pool = 6;
    opts.b_min = 0.4;
    opts.b_max = 12.0;
    opts.lambda = 3.2;

    auto b1 = grow_basis(pb, {}, opts);
    auto b2 = grow_basis(pb, {}, opts);
    REQUIRE(b1.size() == 8);
    REQUIRE(b2.size() == 8);
    for (size_t i = 0; i < b1.size(); ++i)
        CHECK((b1[i].a - b2[i].a).cwiseAbs().maxCoeff() == 0.0);

    double prev = 1e300;
    for (size_t n = 1; n <= b1.size(); ++n) {
        std::vector<GaussianBasisElement> head(b1.begin(), b1.begin() + n);
        double e = ground_state(pb, head, 3.2).energy;
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
}

TEST_CASE("subsystem preconditions name the offending pair") {
    auto grid = RadialGrid::composite_gl(20.0, 2000);
    auto sys = three_bosons();
    // two-body threshold of the reduced pair problem (equal masses)
    FewBodyProblem pb(sys);
    double alpha = pb.frame().alpha();
    auto reduced = PairPotential::gaussian(-1.0, 1.0).scaled(alpha);
    double lcr2 = critical_coupling_2b(reduced, grid).lambda_cr;

    auto pass = subsystem_preconditions(sys, 0.9 * lcr2, 1e-3, grid);
    CHECK(pass.all_subcritical);

    auto fail = subsystem_preconditions(sys, 1.05 * lcr2, 1e-3, grid);
    CHECK_FALSE(fail.all_subcritical);
    bool named = false;
    for (const auto& p : fail.pairs)
        if (p.cls != ResonanceClass::subcritical) named = true;
    CHECK(named);

    SystemSpec two{{1.0, 1.0}, {{{0, 1}, PairPotential::gaussian(-1.0, 1.0)}}, 1.0};
    CHECK(subsystem_preconditions(two, 100.0, 1e-3, grid).all_subcritical);
}

TEST_CASE("threshold on a frozen basis scales linearly with depth") {
    FewBodyProblem pb1(three_bosons(-1.0, 1.0));
    FewBodyProblem pb2(three_bosons(-2.0, 1.0));
    auto basis = ladder_basis(2, 0.4, 25.0, 25);
    double l1 = threshold_on_basis(pb1, basis).lambda_cr;
    double l2 = threshold_on_basis(pb2, basis).lambda_cr;
    CHECK(l2 == doctest::Approx(l1 / 2.0).epsilon(1e-4));
}

TEST_CASE("absorption trace truncates at the threshold") {
    FewBodyProblem pb(three_bosons());
    auto basis = ladder_basis(2, 0.4, 25.0, 25);
    double lcr = threshold_on_basis(pb, basis).lambda_cr;

    AbsorptionOptions opts;
    opts.pairs = {{0, 1}};
    opts.l_values = {5.0};
    // last entry dips below the basis threshold: row must be dropped
    std::vector<double> schedule = {1.2 * lcr, 1.1 * lcr, 1.05 * lcr, 0.99 * lcr};
    auto prof = absorption_trace(pb, basis, schedule, opts);
    CHECK(prof.truncated);
    REQUIRE(prof.rows.size() == 3);
    for (const auto& row : prof.rows) {
        CHECK(row.energy < 0.0);
        CHECK(row.pair_probs.size() == 1);
        CHECK(row.pair_probs[0] >= 0.0);
        CHECK(row.pair_probs[0] <= 1.0);
    }
    // tighter binding -> smaller system
    CHECK(prof.rows.front().rho_sq < prof.rows.back().rho_sq);
}
