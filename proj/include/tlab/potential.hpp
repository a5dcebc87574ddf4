#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tlab {

enum class PotentialKind { gaussian, square_well, screened_coulomb, gaussian_sum };

struct GaussianTerm {
    double weight = 0.0;
    double range = 1.0;
};

// Radial pair potential v(r). depth < 0 is attractive. For gaussian_sum the
// terms carry their own weights and the depth/range fields are unused.
class PairPotential {
public:
    static PairPotential gaussian(double depth, double range);
    static PairPotential square_well(double depth, double range);
    static PairPotential screened_coulomb(double depth, double range);
    static PairPotential gaussian_sum(std::vector<GaussianTerm> terms);

    PotentialKind kind() const { return kind_; }
    double depth() const { return depth_; }
    double range() const { return range_; }
    const std::vector<GaussianTerm>& terms() const { return terms_; }

    double operator()(double r) const;
    double positive_part(double r) const;   // v_+(r) = max(v, 0)
    double negative_part(double r) const;   // v_-(r) = max(-v, 0), so v = v_+ - v_-

    // v_alpha(x) = v(alpha x): closed within each family (range -> range/alpha).
    PairPotential scaled(double alpha) const;

    bool has_negative_part() const;
    // Radius beyond which |v| is below tail_frac of its peak.
    double support_radius(double tail_frac = 1e-14) const;

    bool operator==(const PairPotential& other) const;

private:
    PotentialKind kind_ = PotentialKind::gaussian;
    double depth_ = 0.0;
    double range_ = 1.0;
    std::vector<GaussianTerm> terms_;
};

struct PotentialNorms {
    double l1 = 0.0;   // ||v||_1 over R^3
    double l2 = 0.0;   // ||v||_2 over R^3
};

// Throws std::domain_error naming the offending norm if either integral
// fails to converge.
PotentialNorms potential_norms(const PairPotential& v);

// Fourier transform of sqrt(|v|) with the unitary convention
// (2*pi)^{-3/2} \int e^{-i s.x} sqrt(|v(x)|) d^3x; real and radial.
double fourier_sqrt_abs(const PairPotential& v, double s_mag);
double fourier_sqrt_abs(const PairPotential& v, const Eigen::Vector3d& s);

// Inverse-square regularizer V_R(xi) = 1 / (1 + |xi|^2), evaluated on |xi|^2.
double regularizer_vr(double xi_sq);

struct PairKey {
    int i = 0;
    int j = 0;
    bool operator<(const PairKey& o) const {
        return std::pair(i, j) < std::pair(o.i, o.j);
    }
};

// An N-body system: particle masses, pair potentials (absent pairs interact
// trivially), and a global coupling that multiplies every pair potential.
struct SystemSpec {
    std::vector<double> masses;
    std::map<PairKey, PairPotential> potentials;
    double coupling = 1.0;

    int size() const { return static_cast<int>(masses.size()); }
    const PairPotential* pair(int i, int j) const;
    void validate() const;  // throws std::invalid_argument on bad input
};

} // namespace tlab
