#pragma once

// Independent brute-force oracles for the test suite.  Everything here is a
// plain nested loop straight off the defining formula, deliberately sharing
// no code with the library paths it checks.

#include <span>
#include <vector>

#include "bmlab/chaos.hpp"
#include "bmlab/covariance.hpp"

namespace oracles {

// Var(S_{N,q}(f)) = q! c_q^2 N^{-d} sum_{j,k in B_N} rho(j-k)^q f(j/N) f(k/N)
double variance_double_loop(int q, double c_q, const bmlab::cov::CovarianceModel& model,
                            const bmlab::chaos::TestFunction& f, int N, int d);

// c_q^4 N^{-2d} sum over (j1,j2,j3,j4) in B_N^4 of prod f(j_l/N) times
// rho(j1-j2)^r rho(j3-j4)^r rho(j1-j3)^{q-r} rho(j2-j4)^{q-r}
double contraction_quadruple_loop(int q, int r, double c_q,
                                  const bmlab::cov::CovarianceModel& model,
                                  const bmlab::chaos::TestFunction& f, int N, int d,
                                  bool absolute_weights = false);

// Finite-box Green function of the discrete Dirichlet Laplacian on
// {1..M-1}^d by the direct eigen-sum G(x,y) = sum_k psi_k(x) psi_k(y) / lambda_k.
double box_green_eigensum(int d, int M, const std::vector<int>& x,
                          const std::vector<int>& y);

// N^{-d/2} sum_j values[j] * phi_k(j/N) by a direct loop.
double projection_direct(std::span<const double> values, int N, int d,
                         const std::vector<int>& k);

// <Phi_N, f> = N^{-d} sum_j (H(X_j) - h0) f(j/N) with a caller-supplied H.
double functional_direct(std::span<const double> window, double h0,
                         double (*H)(double), const bmlab::chaos::TestFunction& f,
                         int N, int d);

}  // namespace oracles
