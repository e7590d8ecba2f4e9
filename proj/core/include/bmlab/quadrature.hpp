#pragma once

#include <functional>
#include <vector>

namespace bmlab::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b], exact for polynomials of degree <= 2n-1.
Rule gauss_legendre(int n, double a, double b);

// Gauss rule for the standard normal weight: sum_i w_i f(x_i) ~ E[f(Z)],
// Z ~ N(0,1); weights sum to 1, exact for polynomial f of degree <= 2n-1.
Rule gauss_hermite_prob(int n);

// Adaptive integral of f over [a, inf).
double integrate_upper(const std::function<double(double)>& f, double a,
                       double epsabs, double epsrel);

}  // namespace bmlab::quad
