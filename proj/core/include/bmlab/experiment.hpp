#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bmlab/chaos.hpp"
#include "bmlab/covariance.hpp"
#include "bmlab/hermite.hpp"

namespace bmlab::experiment {

struct ModelSpec {
    std::string kind = "delta";  // delta | finite_support | power_law | gff_green
    // finite_support rows [u_1, ..., u_d, rho] (JSON form)
    std::vector<std::vector<double>> entries;
    double amplitude = 1.0;
    double exponent = 1.0;
    double rho0 = 1.0;
};

struct ObservableSpec {
    std::string kind = "power";  // power | polynomial | hermite
    int p = 2;                   // for kind = power: H(x) = x^p
    std::vector<double> poly;    // monomial coefficients, constant first
    double h0 = 0.0;             // for kind = hermite
    std::vector<std::pair<int, double>> coeffs;  // (q, c_q) pairs
};

struct TestFunctionSpec {
    std::string kind = "constant_one";  // constant_one | box_indicator | eigenfunction
    std::vector<double> lo, hi;
    bool normalized = true;
    std::vector<int> k;
};

struct FieldSpec {
    std::string kind = "torus";  // torus | gff_box
    int M = 0;                   // 0 = auto (torus only)
    int gradient_axis = -1;      // >= 0: evaluate the forward-difference field
};

// Full experiment description; round-trips through JSON unchanged.
struct ExperimentConfig {
    int schema = 1;
    std::string title;
    int dimension = 1;
    ModelSpec model;
    ObservableSpec observable;
    double variance_base = 0.0;  // 0 = use the effective model variance
    std::vector<TestFunctionSpec> test_functions;
    std::vector<int> N_list;
    FieldSpec field;
    long replicas = 0;
    std::uint64_t seed = 1;
    double alpha = 0.0;  // > 0 enables Sobolev-norm accounting
    int sobolev_kmax = 8;
    int q_max = 8;
    int lattice_radius = 48;
    double se_rule = 3.0;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string to_json_text() const;

    // Cross-field constraints, each with its own message.  Runs that sample
    // need replicas >= 1; run_replicas itself accepts 0 (empty tables).
    void validate(bool require_replicas = true) const;

    cov::CovarianceModel build_model() const;
    // After the optional gradient derivation; the model whose rho enters
    // every variance formula.
    cov::CovarianceModel build_effective_model() const;
    double effective_variance_base() const;
    hermite::HermiteExpansion build_expansion() const;
    chaos::TestFunction build_test_function(std::size_t index) const;
    int torus_size_for(int N) const;
    // Stable id: hash of the canonical JSON and the seed.
    std::string run_id() const;
};

}  // namespace bmlab::experiment
