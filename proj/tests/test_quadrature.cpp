#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tlab/quadrature.hpp"

using namespace tlab;

TEST_CASE("gauss-legendre rule integrates polynomials of degree 2n-1 exactly") {
    for (int order : {2, 4, 8, 15}) {
        GaussLegendreRule rule(order);
        REQUIRE(static_cast<int>(rule.x.size()) == order);
        // weights sum to the interval length
        double wsum = 0.0;
        for (double w : rule.w) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // x^(2n-2) is the highest even power integrated exactly
        double val = 0.0;
        int p = 2 * order - 2;
        for (size_t i = 0; i < rule.x.size(); ++i)
            val += rule.w[i] * std::pow(rule.x[i], p);
        CHECK(val == doctest::Approx(2.0 / (p + 1)).epsilon(1e-12));
    }
}

TEST_CASE("adaptive integrate hits analytic values") {
    const double pi = std::numbers::pi;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0) ==
          doctest::Approx(pi / 4.0).epsilon(1e-12));
    // integrable endpoint singularity
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-30, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("half-line integrals with automatic cutoff") {
    const double pi = std::numbers::pi;
    CHECK(integrate_to_infinity([](double r) { return std::exp(-r * r); }) ==
          doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-10));
    CHECK(integrate_to_infinity([](double r) { return r * r * std::exp(-r); }) ==
          doctest::Approx(2.0).epsilon(1e-10));
    // richardson check: the adaptive value is stable under a tighter tolerance
    double loose = integrate_to_infinity([](double r) { return std::exp(-r); }, 1e-8, 1e-6);
    double tight = integrate_to_infinity([](double r) { return std::exp(-r); }, 1e-13, 1e-12);
    CHECK(std::abs(loose - tight) < 1e-6);
    CHECK(tight == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tail cutoff grows past the peak and rejects non-decaying integrands") {
    double rc = tail_cutoff([](double r) { return std::exp(-(r - 3.0) * (r - 3.0)); });
    CHECK(rc > 3.0);
    CHECK(std::exp(-(rc - 3.0) * (rc - 3.0)) < 1e-13);
    CHECK_THROWS_AS(tail_cutoff([](double) { return 1.0; }, 1.0, 1e-14, 1e3),
                    std::domain_error);
}
