#include <doctest.h>

#include <cmath>
#include <random>

#include "tlab/jacobi.hpp"

using namespace tlab;

TEST_CASE("frame constants for the textbook mass sets") {
    // equal masses, pair (0,1): mu = 1/2 -> alpha = 1, M = 2/3 -> gamma = sqrt(3)/2
    auto f = build_frame({1.0, 1.0, 1.0}, {0, 1, 2});
    CHECK(f.alpha() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.gamma() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));

    // masses (1,2,3), pair (0,1): mu = 2/3 -> alpha = sqrt(3)/2, M = 3/2 -> gamma = 1/sqrt(3)
    auto g = build_frame({1.0, 2.0, 3.0}, {0, 1, 2});
    CHECK(g.alpha() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(g.gamma() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

    // two-body degenerate case: one coordinate
    auto h = build_frame({1.0, 1.0}, {0, 1});
    CHECK(h.coords.rows() == 1);
    CHECK(h.alpha() == doctest::Approx(1.0));

    CHECK_THROWS_AS(build_frame({1.0, 1.0, 1.0}, {0, 0, 2}), std::invalid_argument);
}

TEST_CASE("kinetic form is the identity in every frame") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mass(0.2, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);   // 2..5 particles
        std::vector<double> masses(n);
        for (auto& m : masses) m = mass(rng);
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        auto f = build_frame(masses, order);
        CHECK(kinetic_residual(f) < 1e-12);
    }
}

TEST_CASE("kinematic rotations are orthogonal and compose") {
    auto a = build_frame({1.0, 1.0, 1.0}, {0, 1, 2});
    auto b = build_frame({1.0, 1.0, 1.0}, {1, 2, 0});

    auto id = kinematic_rotation(a, a);
    CHECK((id - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);

    auto m = kinematic_rotation(a, b);
    CHECK(rotation_residual(m) < 1e-12);
    // equal masses (12)3 -> (23)1: the x-x entry of the 2x2 block is -1/2
    CHECK(m(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));

    // composition a->b->a is the identity
    auto back = kinematic_rotation(b, a);
    CHECK(((back * m) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    auto c = build_frame({1.0, 2.0}, {0, 1});
    CHECK_THROWS_AS(kinematic_rotation(a, build_frame({1.0, 1.0, 2.0}, {0, 1, 2})),
                    std::invalid_argument);
    (void)c;
}

TEST_CASE("pair separation map reproduces lab separations") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> masses = {1.0, 2.5, 0.7, 1.3};
    auto f = build_frame(masses, {0, 1, 2, 3});

    // r1 - r0 = alpha * x: the map on the built pair is (alpha, 0, 0)
    auto c01 = pair_separation_map(f, 0, 1);
    CHECK(c01(0) == doctest::Approx(-f.alpha()).epsilon(1e-12));
    CHECK(std::abs(c01(1)) < 1e-14);
    CHECK(std::abs(c01(2)) < 1e-14);

    // random configurations, every pair: sum_k c_k xi_k = r_i - r_j
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd lab(4, 3);
        for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 3; ++d) lab(i, d) = u(rng);
        Eigen::MatrixXd xi = f.coords * lab;   // (N-1) x 3 internal coordinates
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                auto c = pair_separation_map(f, i, j);
                Eigen::RowVector3d rec = c.transpose() * xi;
                Eigen::RowVector3d ref = lab.row(i) - lab.row(j);
                CHECK((rec - ref).cwiseAbs().maxCoeff() < 1e-12);
            }
    }
}

TEST_CASE("scale relation alpha/gamma = sqrt(M/mu)") {
    auto f = build_frame({1.0, 2.0, 3.0}, {0, 1, 2});
    double mu = 1.0 * 2.0 / 3.0;
    double bigm = 3.0 * 3.0 / 6.0;
    CHECK(f.alpha() / f.gamma() == doctest::Approx(std::sqrt(bigm / mu)).epsilon(1e-12));
}
