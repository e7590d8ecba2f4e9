#include "bmlab/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>

#include "bmlab/errors.hpp"

namespace bmlab::quad {

namespace {

// GSL aborts by default; turn handler off once, check return codes instead.
void disable_gsl_abort() {
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
    disable_gsl_abort();
    if (n < 1) throw validation_error("gauss_legendre: n must be >= 1");
    gsl_integration_glfixed_table* t =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!t) throw numerical_error("gauss_legendre: table allocation failed");
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x, w;
        gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, t);
        r.nodes[i] = x;
        r.weights[i] = w;
    }
    gsl_integration_glfixed_table_free(t);
    return r;
}

Rule gauss_hermite_prob(int n) {
    disable_gsl_abort();
    if (n < 1) throw validation_error("gauss_hermite_prob: n must be >= 1");
    // GSL's fixed Hermite rule integrates f against exp(-b(x-a)^2); with
    // a = 0, b = 1/2 the weights sum to sqrt(2*pi), so dividing by it turns
    // the rule into an expectation against N(0,1).
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
        gsl_integration_fixed_hermite, static_cast<std::size_t>(n), 0.0, 0.5, 0.0, 0.0);
    if (!ws) throw numerical_error("gauss_hermite_prob: workspace allocation failed");
    const double* x = gsl_integration_fixed_nodes(ws);
    const double* w = gsl_integration_fixed_weights(ws);
    const double norm = std::sqrt(2.0 * M_PI);
    Rule r;
    r.nodes.assign(x, x + n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) r.weights[i] = w[i] / norm;
    gsl_integration_fixed_free(ws);
    return r;
}

namespace {

double call_std_function(double x, void* params) {
    const auto* f = static_cast<const std::function<double(double)>*>(params);
    return (*f)(x);
}

}  // namespace

double integrate_upper(const std::function<double(double)>& f, double a,
                       double epsabs, double epsrel) {
    disable_gsl_abort();
    constexpr std::size_t kLimit = 2000;
    std::unique_ptr<gsl_integration_workspace,
                    decltype(&gsl_integration_workspace_free)>
        ws(gsl_integration_workspace_alloc(kLimit), gsl_integration_workspace_free);
    if (!ws) throw numerical_error("integrate_upper: workspace allocation failed");
    gsl_function gf;
    gf.function = &call_std_function;
    gf.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qagiu(&gf, a, epsabs, epsrel, kLimit,
                                             ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
        throw numerical_error("integrate_upper: qagiu failed with status " +
                              std::to_string(status));
    }
    return result;
}

}  // namespace bmlab::quad
