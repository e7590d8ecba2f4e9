#pragma once

#include <span>
#include <vector>

#include "bmlab/hermite.hpp"

namespace bmlab::basis {

// Dirichlet Laplacian eigenpair on D = [-1/2, 1/2]^d:
// phi_k(x) = prod_i sqrt(2) sin(k_i pi (x_i + 1/2)), lambda_k = pi^2 sum k_i^2.
struct EigenMode {
    std::vector<int> k;
    double lambda = 0.0;
    double eval(std::span<const double> x) const;
};

EigenMode eigenmode(std::vector<int> k);  // requires k_i >= 1

// <Phi_N, phi_k> = N^{-d/2} sum_{j in B_N} (H(X_j) - h0) phi_k(j/N),
// the scaling used by the tightness argument.
double project(std::span<const double> window, const hermite::HermiteExpansion& e,
               int N, int d, const EigenMode& mode);

// Coefficients <Phi_N, phi_k> for the full product grid k in {1..k_max}^d,
// flattened row-major over k - 1.
struct SobolevCoefficients {
    int d = 1;
    double alpha = 1.0;
    int k_max = 1;
    std::vector<double> coeffs;
};

// All coefficients at once; one pass over the window using per-axis sine
// tables (separable contraction, much cheaper than k_max^d projections).
SobolevCoefficients project_all(std::span<const double> window,
                                const hermite::HermiteExpansion& e, int N, int d,
                                double alpha, int k_max);

struct SobolevNorm {
    double value = 0.0;       // sum_{k <= k_max} (1+lambda_k)^{-alpha} coeff^2
    double tail_bound = 0.0;  // coefficient bound * weight tail (inf if alpha <= d/2)
};

// Truncated ||Phi_N||^2_{H^{-alpha}} plus an analytic tail bound.
// coeff_sup_bound bounds |<Phi_N, phi_k>| uniformly in k; pass
// project_bound(...) for the window at hand.
SobolevNorm sobolev_norm_sq(const SobolevCoefficients& coeffs, double coeff_sup_bound);

// |<Phi_N, phi_k>| <= N^{-d/2} |B_N| sup|H - h0| 2^{d/2}.
double project_bound(double centered_sup, int N, int d);

// Upper bound on sum over k outside {1..k_max}^d of (1+lambda_k)^{-alpha};
// +inf when alpha <= d/2 (integral test fails).
double weight_tail_bound(int d, double alpha, int k_max);

struct KernelBound {
    double value = 0.0;       // max over the grid of the truncated kernel sum
    double tail_bound = 0.0;  // 2^d * weight_tail_bound
};

// sup_{x,y} sum_k (1+lambda_k)^{-alpha} phi_k(x) phi_k(y), truncated at
// k_max and maximized over a uniform grid with grid_per_axis points.
KernelBound kernel_bound(int d, double alpha, int grid_per_axis, int k_max);

}  // namespace bmlab::basis
