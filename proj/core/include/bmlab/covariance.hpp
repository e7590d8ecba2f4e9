#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace bmlab::cov {

enum class Kind { kDelta, kFiniteSupport, kPowerLaw, kGffGreen };

// Stationary covariance on Z^d.  Immutable after construction; all
// accessors are const and safe to call concurrently.
class CovarianceModel {
public:
    using Table = std::map<std::vector<int>, double>;

    // rho(0) = 1, rho(u) = 0 otherwise.
    static CovarianceModel delta(int d);
    // Symmetric finite table; entries for u are mirrored to -u.  Requires
    // rho(0) > 0 and |rho(u)| <= rho(0).
    static CovarianceModel finite_support(int d, const Table& table);
    // rho(0) = rho0, rho(u) = amplitude * (1 + |u|_2)^(-exponent) for u != 0.
    static CovarianceModel power_law(int d, double amplitude, double exponent,
                                     double rho0);
    // rho(u) = G(o,u), the Green function of the discrete Laplacian (d >= 3).
    static CovarianceModel gff_green(int d);

    int dimension() const { return d_; }
    Kind kind() const { return kind_; }
    // rho(0).
    double variance() const { return variance_; }
    double rho(std::span<const int> u) const;
    // Max |u|_inf with rho(u) != 0 for finite kinds, -1 otherwise.
    int support_radius() const { return support_radius_; }
    const Table& table() const { return table_; }
    // Stable identifier used as a cache key and in sample metadata.
    const std::string& id() const { return id_; }

private:
    CovarianceModel() = default;
    int d_ = 1;
    Kind kind_ = Kind::kDelta;
    double variance_ = 1.0;
    double amplitude_ = 1.0;
    double exponent_ = 1.0;
    int support_radius_ = 0;
    Table table_;
    std::string id_;
};

// Covariance of the forward-difference field X_{j+e_a} - X_j as a derived
// finite-support model: rho'(u) = 2 rho(u) - rho(u+e_a) - rho(u-e_a),
// tabulated up to `radius` for non-finite kinds.
CovarianceModel gradient_model(const CovarianceModel& model, int axis, int radius = 6);

struct LqSum {
    double partial = 0.0;         // sum over |u|_inf <= radius of |rho(u)|^q
    double signed_partial = 0.0;  // same with rho(u)^q
    bool converged = false;
    double tail_estimate = 0.0;   // estimated mass beyond the truncation radius
};

// Truncated l^q diagnostics for sum_u |rho(u)|^q.  Convergence is certified
// either by the doubling rule (radius/2 -> radius changes the partial sum by
// < 1e-8 relative; exact for finite-support models) or by an integral-test
// fit of the l-inf shell sums (decay exponent < -1 certifies summability and
// yields the tail estimate).
LqSum lq_sum(const CovarianceModel& model, int q, int radius);

// DFT of the M-periodized covariance; the circulant spectrum used by the
// torus sampler.  Asserts min >= -1e-9 * max, then clamps negatives to 0.
// Throws numerical_error (embedding failure) otherwise.
std::vector<double> spectral_density(const CovarianceModel& model, int M);

}  // namespace bmlab::cov
