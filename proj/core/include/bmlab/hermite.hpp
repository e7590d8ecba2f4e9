#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bmlab/covariance.hpp"

namespace bmlab::hermite {

// Probabilists' Hermite polynomial H_q(x):
// H_0 = 1, H_1 = x, H_{q+1} = x H_q - q H_{q-1}.
double eval_hermite(int q, double x);

// Scaled variant He_q^{(g)}(x) = g^{q/2} H_q(x / sqrt(g)), orthogonal for
// N(0, g) with E[(He_q^{(g)})^2] = q! g^q and, for jointly Gaussian fields,
// E[He_q(X_j) He_q(X_k)] = q! rho(j-k)^q against the raw covariance.
double eval_hermite_scaled(int q, double x, double g);

// Writes He_0^{(g)}(x) .. He_qmax^{(g)}(x) into out (size q_max + 1).
void eval_hermite_all(double x, double g, std::span<double> out);

// H(x) = h0 + sum_{q>=1} c_q He_q^{(g)}(x) + tail, taken against N(0, g)
// with g = variance_base.  c_q is the literal coefficient of He_q (the
// Theorem-style convention): c_q = E[H He_q] / (q! g^q).
struct HermiteExpansion {
    double variance_base = 1.0;
    double h0 = 0.0;
    std::vector<double> c;        // c[q] for q >= 1; c[0] stays 0
    double tail_variance = 0.0;   // Var[H] mass beyond q_max

    int q_max() const { return static_cast<int>(c.size()) - 1; }
    double coeff(int q) const {
        return (q >= 1 && q <= q_max()) ? c[static_cast<std::size_t>(q)] : 0.0;
    }
    // sum_q c_q He_q^{(g)}(x): the centered observable H(x) - h0 (exact for
    // polynomial H, truncated otherwise).
    double centered_eval(double x) const;
    // sum_q q! c_q^2 g^q + tail_variance = Var[H(X)], X ~ N(0, g).
    double variance() const;
    // Coefficients below 1e-12 * max_q |c_q| count as zero.
    double zero_threshold() const;

    std::string to_json() const;
    static HermiteExpansion from_json(const std::string& text);
};

// Exact expansion of sum_n a_n x^n (a = monomial coefficients, a[0] constant
// term).  Coefficients beyond q_max are folded into tail_variance exactly.
HermiteExpansion expand_polynomial(std::span<const double> monomial_coeffs,
                                   double variance_base, int q_max);

// Adaptive Gauss-Hermite projection for general square-integrable H: node
// count doubles until every coefficient moves by < 1e-10 (exact for
// polynomials at the first rule large enough).  Throws numerical_error when
// successive node counts keep disagreeing.
HermiteExpansion expand(const std::function<double(double)>& H,
                        double variance_base, int q_max);

// Smallest q >= 1 with c_q above the zero threshold; throws when all vanish.
int hermite_rank(const HermiteExpansion& e);

struct LimitConstant {
    double abs_value = 0.0;     // sum_q q! c_q^2 (sum_u |rho(u)|^q)
    double signed_value = 0.0;  // same with rho(u)^q (variance prediction)
    std::map<int, double> per_q_signed;
    std::map<int, double> per_q_abs;
    bool truncated = false;      // any lattice sum failed its convergence check
    double lattice_tail = 0.0;   // estimated truncation mass of the rho-sums
    double expansion_tail = 0.0; // bound on the q > q_max contribution
};

// C_m and the per-q variance summands sigma_q^2 = q! c_q^2 sum_u rho(u)^q,
// lattice sums truncated at |u|_inf <= radius.  Throws numerical_error when
// the rank-m sum fails the convergence diagnostic.
LimitConstant limit_constant(const HermiteExpansion& e,
                             const cov::CovarianceModel& model, int radius);

}  // namespace bmlab::hermite
