#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bmlab/covariance.hpp"

namespace bmlab::sampler {

enum class FieldKind { kTorus, kZeroBoundaryBox };

struct FieldMeta {
    int d = 1;
    int M = 0;
    FieldKind kind = FieldKind::kTorus;
    std::string model_id;
    std::uint64_t seed = 0;
    std::uint64_t replica_index = 0;
};

// One realization on {0..M-1}^d, row-major.  Regenerating with identical
// (model, M, seed, replica_index) reproduces values bit-exactly.
struct FieldSample {
    FieldMeta meta;
    std::vector<double> values;
};

// Window B_N(center) = {center + j : |j|_inf <= N/2}, (2 floor(N/2) + 1)^d
// sites.  Default center is M/2 on every axis.
struct Window {
    int N = 0;
    std::vector<int> center;  // empty = box center
};

// Stationary field on the M-torus by circulant embedding: spectral
// coefficients sqrt(S_k) (a_k + i b_k) with a, b iid N(0,1) addressed by
// (seed, replica, frequency), inverse DFT, real part.  Construction does
// the spectral work once; sample() is safe to call concurrently.
class TorusSampler {
public:
    TorusSampler(const cov::CovarianceModel& model, int M);
    ~TorusSampler();
    TorusSampler(const TorusSampler&) = delete;
    TorusSampler& operator=(const TorusSampler&) = delete;

    int M() const { return M_; }
    int dimension() const { return d_; }
    const std::vector<double>& spectrum() const;
    FieldSample sample(std::uint64_t seed, std::uint64_t replica_index) const;

private:
    struct Impl;
    int d_, M_;
    std::string model_id_;
    std::unique_ptr<Impl> impl_;
};

// Zero-boundary discrete GFF on the box {1..M-1}^d (d >= 3) by sine-basis
// spectral synthesis: X = sum_k Z_k / sqrt(lambda_k) psi_k with
// lambda_k = sum_i 4 sin^2(pi k_i / (2M)) and psi_k the L^2-normalized
// discrete sine modes; synthesized by a fast DST-I.  Stored values cover
// {0..M-1}^d with zeros on the coordinate-0 faces.
class GffSampler {
public:
    GffSampler(int d, int M);
    ~GffSampler();
    GffSampler(const GffSampler&) = delete;
    GffSampler& operator=(const GffSampler&) = delete;

    int M() const { return M_; }
    int dimension() const { return d_; }
    FieldSample sample(std::uint64_t seed, std::uint64_t replica_index) const;

    // Exact finite-box Green function diagonal sum_k psi_k(x)^2 / lambda_k.
    double box_green_diagonal(const std::vector<int>& x) const;
    // w = (-Delta_box)^{-1} v for v on the interior lattice (row-major
    // (M-1)^d), via two sine transforms.
    std::vector<double> solve_dirichlet(const std::vector<double>& v) const;

private:
    struct Impl;
    int d_, M_;
    std::unique_ptr<Impl> impl_;
};

// Convenience one-shot wrappers (samplers cached per (model, M) / (d, M)).
FieldSample sample_stationary(const cov::CovarianceModel& model, int M,
                              std::uint64_t seed, std::uint64_t replica_index);
FieldSample sample_gff(int d, int M, std::uint64_t seed,
                       std::uint64_t replica_index);

// Forward difference X_{j+e_axis} - X_j: periodic on the torus, zero on the
// trailing face of the box (interior otherwise).
FieldSample gradient_field(const FieldSample& sample, int axis);

// Contiguous copy of the windowed values, row-major over j in [-h, h]^d,
// h = floor(N/2).  Requires the stated buffer margin: the window must keep
// ceil(N/2) sites from the torus edges, or M/4 sites from the box boundary.
std::vector<double> extract_window(const FieldSample& sample, const Window& window);

// Default torus size: max(2N, 2 support_radius + 2), rounded up to even.
int default_torus_size(const cov::CovarianceModel& model, int N);

}  // namespace bmlab::sampler
