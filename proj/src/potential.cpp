#include "tlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tlab/quadrature.hpp"

namespace tlab {

PairPotential PairPotential::gaussian(double depth, double range) {
    if (range <= 0.0) throw std::invalid_argument("range must be > 0");
    PairPotential p;
    p.kind_ = PotentialKind::gaussian;
    p.depth_ = depth;
    p.range_ = range;
    return p;
}

PairPotential PairPotential::square_well(double depth, double range) {
    if (range <= 0.0) throw std::invalid_argument("range must be > 0");
    PairPotential p;
    p.kind_ = PotentialKind::square_well;
    p.depth_ = depth;
    p.range_ = range;
    return p;
}

PairPotential PairPotential::screened_coulomb(double depth, double range) {
    if (range <= 0.0) throw std::invalid_argument("range must be > 0");
    PairPotential p;
    p.kind_ = PotentialKind::screened_coulomb;
    p.depth_ = depth;
    p.range_ = range;
    return p;
}

PairPotential PairPotential::gaussian_sum(std::vector<GaussianTerm> terms) {
    for (const auto& t : terms)
        if (t.range <= 0.0) throw std::invalid_argument("range must be > 0");
    PairPotential p;
    p.kind_ = PotentialKind::gaussian_sum;
    p.terms_ = std::move(terms);
    return p;
}

double PairPotential::operator()(double r) const {
    switch (kind_) {
        case PotentialKind::gaussian: {
            double u = r / range_;
            return depth_ * std::exp(-u * u);
        }
        case PotentialKind::square_well:
            return r <= range_ ? depth_ : 0.0;
        case PotentialKind::screened_coulomb:
            // d * (b/r) e^{-r/b}; value at r = 0 is the (integrable) pole,
            // reported as a large finite number at r exactly 0
            return r > 0.0 ? depth_ * (range_ / r) * std::exp(-r / range_)
                           : depth_ * 1e300;
        case PotentialKind::gaussian_sum: {
            double s = 0.0;
            for (const auto& t : terms_) {
                double u = r / t.range;
                s += t.weight * std::exp(-u * u);
            }
            return s;
        }
    }
    return 0.0;
}

double PairPotential::positive_part(double r) const { return std::max(0.0, (*this)(r)); }
double PairPotential::negative_part(double r) const { return std::max(0.0, -(*this)(r)); }

PairPotential PairPotential::scaled(double alpha) const {
    if (alpha <= 0.0) throw std::invalid_argument("scale must be > 0");
    PairPotential p = *this;
    p.range_ = range_ / alpha;
    for (auto& t : p.terms_) t.range /= alpha;
    return p;
}

bool PairPotential::has_negative_part() const {
    switch (kind_) {
        case PotentialKind::gaussian:
        case PotentialKind::square_well:
        case PotentialKind::screened_coulomb:
            return depth_ < 0.0;
        case PotentialKind::gaussian_sum: {
            // a sum of gaussians is negative somewhere iff a scan finds it
            double rmax = 0.0;
            for (const auto& t : terms_) rmax = std::max(rmax, 8.0 * t.range);
            for (double r = 0.0; r <= rmax; r += rmax / 512.0)
                if ((*this)(r) < 0.0) return true;
            return false;
        }
    }
    return false;
}

double PairPotential::support_radius(double tail_frac) const {
    switch (kind_) {
        case PotentialKind::square_well:
            return range_;
        default:
            return tail_cutoff([this](double r) { return r > 0 ? (*this)(r) : (*this)(1e-12); },
                               std::max(1.0, range_), tail_frac);
    }
}

bool PairPotential::operator==(const PairPotential& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == PotentialKind::gaussian_sum) {
        if (terms_.size() != other.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].weight != other.terms_[i].weight ||
                terms_[i].range != other.terms_[i].range)
                return false;
        return true;
    }
    return depth_ == other.depth_ && range_ == other.range_;
}

PotentialNorms potential_norms(const PairPotential& v) {
    constexpr double four_pi = 4.0 * std::numbers::pi;
    PotentialNorms out;
    try {
        out.l1 = four_pi * integrate_to_infinity(
                               [&](double r) { return r * r * std::abs(v(r)); });
    } catch (const std::domain_error&) {
        throw std::domain_error("not integrable: L1 norm diverges");
    }
    try {
        double sq = four_pi * integrate_to_infinity(
                                  [&](double r) { return r * r * v(r) * v(r); });
        out.l2 = std::sqrt(sq);
    } catch (const std::domain_error&) {
        throw std::domain_error("not integrable: L2 norm diverges");
    }
    return out;
}

double fourier_sqrt_abs(const PairPotential& v, double s_mag) {
    // radial transform: F(s) = sqrt(2/pi) / s * int_0^inf r sin(s r) g(r) dr,
    // g = sqrt(|v|); the s -> 0 limit is sqrt(2/pi) int r^2 g dr.
    auto g = [&](double r) { return std::sqrt(std::abs(v(r))); };
    const double c = std::sqrt(2.0 / std::numbers::pi);
    if (s_mag < 1e-8) {
        return c * integrate_to_infinity([&](double r) { return r * r * g(r); });
    }
    double val = integrate_to_infinity(
        [&](double r) { return r * std::sin(s_mag * r) * g(r); });
    return c * val / s_mag;
}

double fourier_sqrt_abs(const PairPotential& v, const Eigen::Vector3d& s) {
    return fourier_sqrt_abs(v, s.norm());
}

double regularizer_vr(double xi_sq) {
    if (xi_sq < 0.0) throw std::invalid_argument("regularizer_vr: |xi|^2 must be >= 0");
    return 1.0 / (1.0 + xi_sq);
}

const PairPotential* SystemSpec::pair(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = potentials.find({i, j});
    return it == potentials.end() ? nullptr : &it->second;
}

void SystemSpec::validate() const {
    if (masses.size() < 2) throw std::invalid_argument("system needs >= 2 particles");
    for (double m : masses)
        if (!(m > 0.0)) throw std::invalid_argument("masses must be > 0");
    if (!(coupling > 0.0)) throw std::invalid_argument("coupling must be > 0");
    const int n = size();
    for (const auto& [key, pot] : potentials) {
        if (key.i < 0 || key.j >= n || key.i >= key.j)
            throw std::invalid_argument("potential pair index out of range");
    }
}

} // namespace tlab
