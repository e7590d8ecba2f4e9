#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bmlab::green {

struct CrossCheckEntry {
    std::vector<int> u;
    double fourier = 0.0;  // quadrature value
    double walk = 0.0;     // random-walk occupation-time estimate
    double walk_se = 0.0;  // standard error of the walk estimate
};

// Green function of the discrete Laplacian on Z^d, d >= 3, solving
// (-Delta) G = delta_o with Delta f(x) = sum_j [f(x+e_j) + f(x-e_j) - 2f(x)].
//
// Values come from the lattice Fourier integral
//   G(u) = (2 pi)^{-d} int_{[-pi,pi]^d} e^{i theta.u} / (2 sum_j (1 - cos theta_j)) dtheta,
// reduced exactly to the 1-d form G(u) = int_0^inf prod_j e^{-2t} I_{u_j}(2t) dt
// and integrated adaptively.  At construction the table on |u|_inf <=
// check_radius is cross-checked against a random-walk Monte Carlo estimate;
// disagreement beyond 3 combined standard errors throws numerical_error.
class GreenFunction {
public:
    GreenFunction(int d, int check_radius, double quad_epsrel,
                  std::uint64_t mc_seed, long walkers);
    ~GreenFunction();
    GreenFunction(const GreenFunction&) = delete;
    GreenFunction& operator=(const GreenFunction&) = delete;

    int dimension() const { return d_; }
    // G(o,u); values cached, insert-once under an internal mutex.
    double at(std::span<const int> u) const;
    // G(o,o).
    double diagonal() const;
    const std::vector<CrossCheckEntry>& cross_checks() const { return checks_; }

private:
    struct Impl;
    int d_;
    double epsrel_;
    std::vector<CrossCheckEntry> checks_;
    Impl* impl_;
};

// Process-wide instance per dimension (validated on first use).
const GreenFunction& shared_green(int d);

// Convenience wrapper over shared_green.
double discrete_green(int d, std::span<const int> u);

// Whole-space continuous Green function c_d |x-y|^{2-d} with
// c_d = Gamma(d/2 - 1) / (4 pi^{d/2}); throws on x == y.
double continuous_green(int d, std::span<const double> x, std::span<const double> y);
double continuous_green_constant(int d);

// (2p+1)!! helper for the odd-power Hermite coefficient.
double double_factorial_odd(int p);

}  // namespace bmlab::green
