#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bmlab/covariance.hpp"
#include "bmlab/hermite.hpp"

namespace bmlab::chaos {

// Bounded test function on D = [-1/2, 1/2]^d.
class TestFunction {
public:
    enum class Kind { kConstantOne, kBoxIndicator, kEigenfunction, kCustom };

    static TestFunction constant_one();
    // Closed box Q = prod [lo_i, hi_i] inside D; boundary ties belong to the
    // box.  normalized multiplies by |Q|^{-1/2} so that int f^2 = 1.
    static TestFunction box_indicator(std::vector<double> lo, std::vector<double> hi,
                                      bool normalized);
    // Dirichlet Laplacian eigenfunction phi_k (see bmlab::basis).
    static TestFunction eigenfunction(std::vector<int> k);
    static TestFunction custom(std::function<double(std::span<const double>)> eval,
                               double sup_bound, std::string label);

    Kind kind() const { return kind_; }
    double operator()(std::span<const double> x) const;
    double sup_bound() const { return sup_; }
    const std::string& label() const { return label_; }
    // int_D f^2 (closed form except for custom, which uses tensor
    // Gauss-Legendre).
    double l2_norm_sq(int d) const;
    // <f, g>_{L^2(D)}; closed forms for the separable kinds.
    static double inner_product(const TestFunction& f, const TestFunction& g, int d);

    // Values f(j/N) on the window lattice j in [-h,h]^d, row-major.
    std::vector<double> tabulate(int d, int N) const;

    // Per-axis factor for the separable kinds (normalization excluded);
    // throws for custom evaluators.
    double axis_value(int axis, double x) const;

private:
    TestFunction() = default;
    Kind kind_ = Kind::kConstantOne;
    std::vector<double> lo_, hi_;
    bool normalized_ = false;
    std::vector<int> k_;
    std::function<double(std::span<const double>)> eval_;
    double sup_ = 1.0;
    std::string label_ = "1";
};

enum class Normalization { kRaw, kCentered, kCltScaled };

// One evaluated statistic; q = -1 marks the full functional.
struct ChaosStatistic {
    int N = 0;
    int q = -1;
    double value = 0.0;
    Normalization normalization = Normalization::kRaw;
};

// <Phi_N, f> = N^{-d} sum_{j in B_N} (H(X_j) - h0) f(j/N), then rescaled:
// kRaw keeps N^{-d}, kCentered multiplies by N^{d/2} (so the value equals
// sum_q S_{N,q}(f) for polynomial H), kCltScaled multiplies by
// N^{d/2}/sqrt(c_m) (Theorem normalization; requires c_m > 0).
ChaosStatistic functional(std::span<const double> window,
                          const hermite::HermiteExpansion& e,
                          const TestFunction& f, int N, int d,
                          Normalization normalization, double c_m = 0.0);

// S_{N,q}(f) = N^{-d/2} c_q sum_{j in B_N} He_q^{(g)}(X_j) f(j/N).
ChaosStatistic chaos_component(std::span<const double> window, int q, double c_q,
                               double variance_base, const TestFunction& f, int N,
                               int d);

// One pass over the window: T_q = sum_j He_q(X_j) f_j for q = 1..q_max and
// the centered functional sum derived from them.
struct WindowSums {
    std::vector<double> t_q;  // index q, [0] unused
    double centered_sum = 0.0;
};
WindowSums window_sums(std::span<const double> window,
                       const hermite::HermiteExpansion& e,
                       std::span<const double> f_values);

// Var(S_{N,q}(f)) by the exact finite-N double sum, organised as the
// lag-then-overlap sum; always >= 0 (asserted, clamped at roundoff scale).
double exact_variance(int q, double c_q, const cov::CovarianceModel& model,
                      const TestFunction& f, int N, int d);

// Cov(S_{N,q}(f), S_{N,q}(g)) by the same exact finite-N sum.
double exact_covariance(int q, double c_q, const cov::CovarianceModel& model,
                        const TestFunction& f, const TestFunction& g, int N, int d);

// sigma_q^2(f) = q! c_q^2 (sum_u rho(u)^q) int_D f^2.
double limit_variance(int q, double c_q, const cov::CovarianceModel& model,
                      const TestFunction& f, int d, int radius);

// Squared contraction norm |s_{N,q} x_r s_{N,q}|^2: the four-fold sum with
// weights rho(j1-j2)^r rho(j3-j4)^r rho(j1-j3)^{q-r} rho(j2-j4)^{q-r}, in the
// signed form (absolute_weights switches to the proof's |rho| bound).
// Guarded: |B_N|^4 must stay below 1e10 iterations.
double contraction_norm_sq(int q, int r, double c_q,
                           const cov::CovarianceModel& model,
                           const TestFunction& f, int N, int d,
                           bool absolute_weights = false);

// Empirical fourth moment of samples standardized to unit empirical
// variance, its gap from 3, and a delete-one jackknife standard error.
struct FourthMoment {
    double m4 = 0.0;
    double gap = 0.0;
    double se = 0.0;
};
FourthMoment fourth_moment_gap(std::span<const double> samples);

}  // namespace bmlab::chaos
