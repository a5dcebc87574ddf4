#pragma once

#include <functional>
#include <vector>

namespace tlab {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> x;
    std::vector<double> w;
    explicit GaussLegendreRule(int order);
};

// Adaptive integration on [a, b] by panel bisection; the error estimate
// compares a 15-point panel value against the sum over its halves.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-10);

// Integrate f over [0, inf). The upper cutoff is grown until the integrand
// has fallen below 1e-14 of its observed peak; throws if no such cutoff is
// found below r_cap.
double integrate_to_infinity(const std::function<double(double)>& f,
                             double abs_tol = 1e-12, double rel_tol = 1e-10,
                             double r_cap = 1e6);

// Smallest r >= r0 with |f| < tail_frac * max|f| on [0, r]; throws if the
// tail never drops below the threshold before r_cap.
double tail_cutoff(const std::function<double(double)>& f, double r0 = 1.0,
                   double tail_frac = 1e-14, double r_cap = 1e6);

} // namespace tlab
