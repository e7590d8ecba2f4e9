#include "bmlab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmlab/errors.hpp"
#include "bmlab/lattice.hpp"
#include "bmlab/quadrature.hpp"

namespace bmlab::basis {

double EigenMode::eval(std::span<const double> x) const {
    if (x.size() != k.size())
        throw validation_error("EigenMode::eval: point arity != dimension");
    double v = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        v *= std::sqrt(2.0) * std::sin(k[i] * M_PI * (x[i] + 0.5));
    return v;
}

EigenMode eigenmode(std::vector<int> k) {
    if (k.empty()) throw validation_error("eigenmode: empty multi-index");
    double s = 0.0;
    for (int ki : k) {
        if (ki < 1) throw validation_error("eigenmode: requires k_i >= 1");
        s += static_cast<double>(ki) * ki;
    }
    EigenMode m;
    m.k = std::move(k);
    m.lambda = M_PI * M_PI * s;
    return m;
}

double project(std::span<const double> window, const hermite::HermiteExpansion& e,
               int N, int d, const EigenMode& mode) {
    const int h = lat::window_halfwidth(N);
    const int n = lat::window_points(N);
    if (window.size() != lat::cube_size(d, n))
        throw validation_error("project: window size != |B_N|");
    if (static_cast<int>(mode.k.size()) != d)
        throw validation_error("project: mode arity != dimension");
    // per-axis tables phi_{k_i}((j-h)/N)
    std::vector<std::vector<double>> t(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j)
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                std::sqrt(2.0) * std::sin(mode.k[static_cast<std::size_t>(i)] * M_PI *
                                          (static_cast<double>(j - h) / N + 0.5));
    std::vector<int> j(static_cast<std::size_t>(d), 0);
    std::size_t idx = 0;
    double sum = 0.0;
    do {
        double phi = 1.0;
        for (int i = 0; i < d; ++i)
            phi *= t[static_cast<std::size_t>(i)]
                    [static_cast<std::size_t>(j[static_cast<std::size_t>(i)])];
        sum += e.centered_eval(window[idx]) * phi;
        ++idx;
    } while (lat::advance(j, n));
    return sum / std::pow(static_cast<double>(N), 0.5 * d);
}

SobolevCoefficients project_all(std::span<const double> window,
                                const hermite::HermiteExpansion& e, int N, int d,
                                double alpha, int k_max) {
    const int h = lat::window_halfwidth(N);
    const int n = lat::window_points(N);
    if (window.size() != lat::cube_size(d, n))
        throw validation_error("project_all: window size != |B_N|");
    if (k_max < 1) throw validation_error("project_all: k_max must be >= 1");
    // sine table shared by every axis
    std::vector<double> table(static_cast<std::size_t>(k_max) *
                              static_cast<std::size_t>(n));
    for (int k = 1; k <= k_max; ++k)
        for (int j = 0; j < n; ++j)
            table[static_cast<std::size_t>(k - 1) * n + static_cast<std::size_t>(j)] =
                std::sqrt(2.0) *
                std::sin(k * M_PI * (static_cast<double>(j - h) / N + 0.5));

    // start from the centered observable values, then contract the trailing
    // lattice axis against the sine table d times; each pass moves a k axis
    // to the front, ending row-major in (k_1, ..., k_d)
    std::vector<double> cur(window.size());
    for (std::size_t i = 0; i < window.size(); ++i)
        cur[i] = e.centered_eval(window[i]);
    for (int pass = 0; pass < d; ++pass) {
        const std::size_t s_block = cur.size() / static_cast<std::size_t>(n);
        std::vector<double> next(static_cast<std::size_t>(k_max) * s_block);
        for (int k = 0; k < k_max; ++k) {
            const double* trow = &table[static_cast<std::size_t>(k) * n];
            for (std::size_t s = 0; s < s_block; ++s) {
                const double* in = &cur[s * static_cast<std::size_t>(n)];
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += in[j] * trow[j];
                next[static_cast<std::size_t>(k) * s_block + s] = acc;
            }
        }
        cur.swap(next);
    }
    const double scale = std::pow(static_cast<double>(N), -0.5 * d);
    for (auto& v : cur) v *= scale;
    SobolevCoefficients out;
    out.d = d;
    out.alpha = alpha;
    out.k_max = k_max;
    out.coeffs = std::move(cur);
    return out;
}

double project_bound(double centered_sup, int N, int d) {
    const std::size_t b = lat::cube_size(d, lat::window_points(N));
    return std::pow(static_cast<double>(N), -0.5 * d) * static_cast<double>(b) *
           centered_sup * std::pow(2.0, 0.5 * d);
}

namespace {

double axis_integral_constant(double beta) {
    // int_0^inf (A + pi^2 x^2)^{-beta} dx = C(beta) A^{1/2 - beta},
    // C(beta) = sqrt(pi) Gamma(beta - 1/2) / (2 pi Gamma(beta)), beta > 1/2
    return std::sqrt(M_PI) * std::tgamma(beta - 0.5) / (2.0 * M_PI * std::tgamma(beta));
}

}  // namespace

double weight_tail_bound(int d, double alpha, int k_max) {
    if (alpha <= 0.5 * d) return std::numeric_limits<double>::infinity();
    // modes outside {1..k_max}^d lie in the union over axes of {k_i > k_max};
    // bound each slab by integrals (summands decrease along every axis)
    double prefactor = static_cast<double>(d);
    for (int j = 0; j + 1 < d; ++j) prefactor *= axis_integral_constant(alpha - 0.5 * j);
    const double exponent = 0.5 * (d - 1) - alpha;
    const double tail_integral = quad::integrate_upper(
        [exponent](double x) { return std::pow(1.0 + M_PI * M_PI * x * x, exponent); },
        static_cast<double>(k_max), 1e-14, 1e-10);
    return prefactor * tail_integral;
}

SobolevNorm sobolev_norm_sq(const SobolevCoefficients& coeffs, double coeff_sup_bound) {
    const int d = coeffs.d;
    const int K = coeffs.k_max;
    if (coeffs.coeffs.size() != lat::cube_size(d, K))
        throw validation_error("sobolev_norm_sq: coefficient grid size mismatch");
    SobolevNorm out;
    std::vector<int> k(static_cast<std::size_t>(d), 0);  // zero-based, mode = k+1
    std::size_t idx = 0;
    do {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double ki = k[static_cast<std::size_t>(i)] + 1;
            s += ki * ki;
        }
        const double w = std::pow(1.0 + M_PI * M_PI * s, -coeffs.alpha);
        out.value += w * coeffs.coeffs[idx] * coeffs.coeffs[idx];
        ++idx;
    } while (lat::advance(k, K));
    out.tail_bound =
        coeff_sup_bound * coeff_sup_bound * weight_tail_bound(d, coeffs.alpha, K);
    return out;
}

KernelBound kernel_bound(int d, double alpha, int grid_per_axis, int k_max) {
    if (grid_per_axis < 1) throw validation_error("kernel_bound: empty grid");
    if (k_max < 1) throw validation_error("kernel_bound: k_max must be >= 1");
    const int G = grid_per_axis;
    // cell-center grid (the boundary itself contributes zero)
    std::vector<double> xs(static_cast<std::size_t>(G));
    for (int t = 0; t < G; ++t)
        xs[static_cast<std::size_t>(t)] = -0.5 + (t + 0.5) / static_cast<double>(G);
    std::vector<double> table(static_cast<std::size_t>(k_max) * G);
    for (int k = 1; k <= k_max; ++k)
        for (int t = 0; t < G; ++t)
            table[static_cast<std::size_t>(k - 1) * G + static_cast<std::size_t>(t)] =
                std::sqrt(2.0) * std::sin(k * M_PI * (xs[static_cast<std::size_t>(t)] + 0.5));
    auto weight = [alpha](double sumsq) {
        return std::pow(1.0 + M_PI * M_PI * sumsq, -alpha);
    };

    KernelBound out;
    if (d == 1) {
        for (int t = 0; t < G; ++t)
            for (int s = 0; s < G; ++s) {
                double acc = 0.0;
                for (int k = 1; k <= k_max; ++k)
                    acc += weight(static_cast<double>(k) * k) *
                           table[static_cast<std::size_t>(k - 1) * G + t] *
                           table[static_cast<std::size_t>(k - 1) * G + s];
                out.value = std::max(out.value, acc);
            }
    } else if (d == 2) {
        // inner contraction over k2 per (k1, t2, s2), then outer over k1
        std::vector<double> inner(static_cast<std::size_t>(k_max) * G * G);
        for (int k1 = 1; k1 <= k_max; ++k1)
            for (int t2 = 0; t2 < G; ++t2)
                for (int s2 = 0; s2 < G; ++s2) {
                    double acc = 0.0;
                    for (int k2 = 1; k2 <= k_max; ++k2)
                        acc += weight(static_cast<double>(k1) * k1 +
                                      static_cast<double>(k2) * k2) *
                               table[static_cast<std::size_t>(k2 - 1) * G + t2] *
                               table[static_cast<std::size_t>(k2 - 1) * G + s2];
                    inner[(static_cast<std::size_t>(k1 - 1) * G + t2) * G + s2] = acc;
                }
        for (int t1 = 0; t1 < G; ++t1)
            for (int s1 = 0; s1 < G; ++s1)
                for (int t2 = 0; t2 < G; ++t2)
                    for (int s2 = 0; s2 < G; ++s2) {
                        double acc = 0.0;
                        for (int k1 = 1; k1 <= k_max; ++k1)
                            acc += table[static_cast<std::size_t>(k1 - 1) * G + t1] *
                                   table[static_cast<std::size_t>(k1 - 1) * G + s1] *
                                   inner[(static_cast<std::size_t>(k1 - 1) * G + t2) * G +
                                         s2];
                        out.value = std::max(out.value, acc);
                    }
    } else {
        const double work = std::pow(static_cast<double>(G), 2.0 * d) *
                            std::pow(static_cast<double>(k_max), d);
        if (work > 1e9)
            throw numerical_error("kernel_bound: grid x mode workload too large");
        std::vector<int> t(static_cast<std::size_t>(2 * d), 0);
        do {
            double acc = 0.0;
            std::vector<int> k(static_cast<std::size_t>(d), 0);
            do {
                double sumsq = 0.0, prod = 1.0;
                for (int i = 0; i < d; ++i) {
                    const int ki = k[static_cast<std::size_t>(i)] + 1;
                    sumsq += static_cast<double>(ki) * ki;
                    prod *= table[static_cast<std::size_t>(ki - 1) * G +
                                  t[static_cast<std::size_t>(i)]] *
                            table[static_cast<std::size_t>(ki - 1) * G +
                                  t[static_cast<std::size_t>(d + i)]];
                }
                acc += weight(sumsq) * prod;
            } while (lat::advance(k, k_max));
            out.value = std::max(out.value, acc);
        } while (lat::advance(t, G));
    }
    out.tail_bound = std::pow(2.0, d) * weight_tail_bound(d, alpha, k_max);
    return out;
}

}  // namespace bmlab::basis
