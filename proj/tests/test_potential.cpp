#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tlab/potential.hpp"
#include "tlab/quadrature.hpp"

using namespace tlab;
namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("sign split is exact pointwise") {
    auto g = PairPotential::gaussian(-1.0, 1.0);
    for (double r : {0.0, 0.5, 1.0, 3.0}) {
        CHECK(g.positive_part(r) == 0.0);
        CHECK(g.negative_part(r) == std::exp(-r * r));
    }
    // (r^2 - 1) e^{-r^2} as a two-gaussian combination changes sign at r = 1
    auto mixed = PairPotential::gaussian_sum({{2.0, 1.0}, {-3.0, 0.7}});
    for (double r = 0.0; r <= 6.0; r += 0.03) {
        CHECK(mixed.positive_part(r) * mixed.negative_part(r) == 0.0);
        CHECK(mixed.positive_part(r) - mixed.negative_part(r) ==
              doctest::Approx(mixed(r)).epsilon(1e-15));
    }
    CHECK(mixed.has_negative_part());
    CHECK_FALSE(PairPotential::gaussian(0.5, 1.0).has_negative_part());
}

TEST_CASE("norms match closed-form radial integrals") {
    auto g = PairPotential::gaussian(1.0, 1.0);
    auto ng = potential_norms(g);
    CHECK(ng.l1 == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-8));
    CHECK(ng.l2 == doctest::Approx(std::pow(pi / 2.0, 0.75)).epsilon(1e-8));

    auto well = PairPotential::square_well(-1.0, 1.0);
    auto nw = potential_norms(well);
    CHECK(nw.l1 == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-8));
    CHECK(nw.l2 == doctest::Approx(std::sqrt(4.0 * pi / 3.0)).epsilon(1e-8));

    auto yuk = PairPotential::screened_coulomb(1.0, 1.0);  // e^{-r}/r
    auto ny = potential_norms(yuk);
    CHECK(ny.l1 == doctest::Approx(4.0 * pi).epsilon(1e-8));
    CHECK(ny.l2 == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-8));
}

TEST_CASE("fourier transform of sqrt|v|") {
    auto g = PairPotential::gaussian(-1.0, 1.0);
    // sqrt|v| = e^{-r^2/2} is self-dual under the unitary convention
    for (double s : {0.0, 0.5, 1.0, 2.5})
        CHECK(fourier_sqrt_abs(g, s) ==
              doctest::Approx(std::exp(-s * s / 2.0)).epsilon(1e-8));

    // zero frequency = (2 pi)^{-3/2} * L1 norm of sqrt|v|
    auto well = PairPotential::square_well(-1.0, 1.0);
    CHECK(fourier_sqrt_abs(well, 0.0) ==
          doctest::Approx(std::pow(2.0 * pi, -1.5) * 4.0 * pi / 3.0).epsilon(1e-8));
    // radial quadrature oracle for the well at s = 1:
    // (2 pi)^{-3/2} 4 pi int_0^1 r sin(r) dr = (2 pi)^{-3/2} 4 pi (sin 1 - cos 1)
    CHECK(fourier_sqrt_abs(well, 1.0) ==
          doctest::Approx(std::pow(2.0 * pi, -1.5) * 4.0 * pi *
                          (std::sin(1.0) - std::cos(1.0))).epsilon(1e-8));

    // radial: direction independent
    Eigen::Vector3d s1(1.3, 0.0, 0.0), s2(0.0, 1.0, std::sqrt(0.69));
    CHECK(std::abs(fourier_sqrt_abs(g, s1) - fourier_sqrt_abs(g, s2)) < 1e-12);
}

TEST_CASE("regularizer values and domain") {
    CHECK(regularizer_vr(0.0) == 1.0);
    CHECK(regularizer_vr(1.0) == 0.5);
    CHECK(regularizer_vr(9.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(regularizer_vr(-1.0), std::invalid_argument);
}

TEST_CASE("scaling composes the argument: v.scaled(a)(r) = v(a r)") {
    auto g = PairPotential::gaussian(-2.0, 1.7);
    auto s = g.scaled(3.0);
    for (double r : {0.1, 0.9, 2.0}) CHECK(s(r) == doctest::Approx(g(3.0 * r)));
    auto sum = PairPotential::gaussian_sum({{1.0, 2.0}, {-0.5, 0.5}});
    auto ssum = sum.scaled(0.25);
    for (double r : {0.1, 0.9, 2.0}) CHECK(ssum(r) == doctest::Approx(sum(0.25 * r)));
}

TEST_CASE("system spec validation") {
    auto g = PairPotential::gaussian(-1.0, 1.0);
    SystemSpec ok{{1.0, 1.0, 1.0}, {{{0, 1}, g}, {{0, 2}, g}, {{1, 2}, g}}, 1.0};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.pair(0, 1) != nullptr);
    CHECK(ok.pair(1, 0) != nullptr);   // unordered lookup

    SystemSpec bad_mass{{1.0, -1.0}, {{{0, 1}, g}}, 1.0};
    CHECK_THROWS_AS(bad_mass.validate(), std::invalid_argument);
    SystemSpec bad_pair{{1.0, 1.0}, {{{0, 3}, g}}, 1.0};
    CHECK_THROWS_AS(bad_pair.validate(), std::invalid_argument);
    SystemSpec bad_coupling{{1.0, 1.0}, {{{0, 1}, g}}, -2.0};
    CHECK_THROWS_AS(bad_coupling.validate(), std::invalid_argument);
}
