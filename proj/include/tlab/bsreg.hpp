#pragma once

#include <complex>
#include <vector>

#include "tlab/jacobi.hpp"
#include "tlab/potential.hpp"
#include "tlab/twobody.hpp"

namespace tlab {

// Low-momentum correction t(p) = (sqrt(p) - 1) for p <= 1, zero beyond.
double t_multiplier(double p_norm);

// Pointwise multiplication of a momentum-space field by 1 + z + t(|p|);
// requires Re z > 0 so the multiplier never vanishes.
std::vector<std::complex<double>> apply_b(std::complex<double> z,
                                          const std::vector<double>& p_norms,
                                          std::vector<std::complex<double>> field);
std::vector<std::complex<double>> apply_b_inverse(std::complex<double> z,
                                                  const std::vector<double>& p_norms,
                                                  std::vector<std::complex<double>> field);

// Largest omega in (0, 1] with H0 + lambda*v - lambda*omega*v_- >= 0,
// located by bisection on the max BS eigenvalue of the deepened attraction.
// Throws if the pair is at or beyond critical coupling.
double find_omega(const PairPotential& v, double lambda, const RadialGrid& grid);

struct RTauEntry {
    double k = 0.0;
    double norm = 0.0;    // lambda * || sqrt(v_-) (H0 + lambda v_+ + k^2)^{-1} sqrt(v_-) ||
    double bound = 0.0;   // 1 / (1 + omega)
    bool ok = false;
};

struct RTauReport {
    double omega = 0.0;
    std::vector<RTauEntry> entries;
    double stead_residual = 0.0;  // | ||A^{-1/2} B A^{-1/2}|| - ||B^{1/2} A^{-1} B^{1/2}|| |
    bool all_ok = false;
};

RTauReport rtau_norm_bound(const PairPotential& v, double lambda,
                           const std::vector<double>& k_values,
                           const RadialGrid& grid);

struct KernelBoundReport {
    double c0 = 0.0;
    double factor1 = 0.0;   // int (V12)_-(alpha x) d^3x
    double factor2 = 0.0;   // int |fourier(|V23|^{1/2})(s/gamma)|^2 d^3s
    double factor3 = 0.0;   // int |t|^{-2} e^{-2|t|} d^3t = 2*pi
    double gamma = 0.0;
    double k_n = 0.0;
    double wegot_value = 0.0;
    double wegot_bound = 0.0;
};

// The constant C0 = factor1 * factor2 * factor3 / (2^7 pi^5 gamma^6).
// Throws std::domain_error naming the factor if a factor integral diverges.
KernelBoundReport c0_constant(const PairPotential& v12, const PairPotential& v23,
                              const JacobiFrame& frame);

// value = int_{|p|<=1} [1/(k + sqrt|p|) - 1/(k+1)]^2 / sqrt(p^2 + k^2) d^3p,
// bound = 4*pi (the majorant int_{|p|<=1} |p|^{-2} d^3p).
struct WegotCheck {
    double k_n = 0.0;
    double value = 0.0;
    double bound = 0.0;
    bool ok = false;
};

WegotCheck wegot_bound_check(double k_n);

} // namespace tlab
