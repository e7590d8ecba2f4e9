#include "bmlab/hermite.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "bmlab/errors.hpp"
#include "bmlab/quadrature.hpp"

namespace bmlab::hermite {

namespace {

double factorial(int q) {
    double f = 1.0;
    for (int i = 2; i <= q; ++i) f *= i;
    return f;
}

}  // namespace

double eval_hermite(int q, double x) {
    if (q < 0) throw validation_error("eval_hermite: q must be >= 0");
    if (q == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int k = 1; k < q; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double eval_hermite_scaled(int q, double x, double g) {
    if (q < 0) throw validation_error("eval_hermite_scaled: q must be >= 0");
    if (g <= 0.0) throw validation_error("eval_hermite_scaled: variance must be > 0");
    if (q == 0) return 1.0;
    // same recurrence with an extra g on the downward term:
    // P_{q+1} = x P_q - q g P_{q-1} generates g^{q/2} H_q(x/sqrt(g)).
    double prev = 1.0, cur = x;
    for (int k = 1; k < q; ++k) {
        const double next = x * cur - k * g * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void eval_hermite_all(double x, double g, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = x;
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = x * out[k] - static_cast<double>(k) * g * out[k - 1];
}

double HermiteExpansion::centered_eval(double x) const {
    double prev = 1.0, cur = x, acc = 0.0;
    for (int q = 1; q <= q_max(); ++q) {
        acc += c[static_cast<std::size_t>(q)] * cur;
        const double next = x * cur - q * variance_base * prev;
        prev = cur;
        cur = next;
    }
    return acc;
}

double HermiteExpansion::variance() const {
    double v = tail_variance;
    double gq = variance_base;
    double fact = 1.0;
    for (int q = 1; q <= q_max(); ++q) {
        fact *= q;
        v += fact * c[static_cast<std::size_t>(q)] * c[static_cast<std::size_t>(q)] * gq;
        gq *= variance_base;
    }
    return v;
}

double HermiteExpansion::zero_threshold() const {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return 1e-12 * m;
}

std::string HermiteExpansion::to_json() const {
    nlohmann::json j;
    j["variance_base"] = variance_base;
    j["h0"] = h0;
    j["tail_variance"] = tail_variance;
    auto coeffs = nlohmann::json::array();
    const double thresh = zero_threshold();
    for (int q = 1; q <= q_max(); ++q) {
        const double v = c[static_cast<std::size_t>(q)];
        if (std::abs(v) > thresh)
            coeffs.push_back(nlohmann::json::array({q, v}));
    }
    j["coeffs"] = coeffs;
    return j.dump(2);
}

HermiteExpansion HermiteExpansion::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    HermiteExpansion e;
    e.variance_base = j.at("variance_base").get<double>();
    if (e.variance_base <= 0.0)
        throw validation_error("HermiteExpansion: variance_base must be > 0");
    e.h0 = j.value("h0", 0.0);
    e.tail_variance = j.value("tail_variance", 0.0);
    int qmax = 0;
    for (const auto& pair : j.at("coeffs"))
        qmax = std::max(qmax, pair.at(0).get<int>());
    e.c.assign(static_cast<std::size_t>(qmax) + 1, 0.0);
    for (const auto& pair : j.at("coeffs")) {
        const int q = pair.at(0).get<int>();
        if (q < 1) throw validation_error("HermiteExpansion: coefficient index q < 1");
        e.c[static_cast<std::size_t>(q)] = pair.at(1).get<double>();
    }
    return e;
}

HermiteExpansion expand_polynomial(std::span<const double> monomial_coeffs,
                                   double variance_base, int q_max) {
    if (variance_base <= 0.0)
        throw validation_error("expand_polynomial: variance_base must be > 0");
    if (q_max < 1) throw validation_error("expand_polynomial: q_max must be >= 1");
    const double g = variance_base;
    const int deg = monomial_coeffs.empty()
                        ? 0
                        : static_cast<int>(monomial_coeffs.size()) - 1;
    // Horner in the He basis: multiplication by x maps
    // He_q -> He_{q+1} + q g He_{q-1}, so the conversion is exact.
    std::vector<double> he(1, 0.0);
    for (int n = deg; n >= 0; --n) {
        std::vector<double> next(he.size() + 1, 0.0);
        for (std::size_t q = 0; q < he.size(); ++q) {
            if (he[q] == 0.0) continue;
            next[q + 1] += he[q];
            if (q >= 1) next[q - 1] += static_cast<double>(q) * g * he[q];
        }
        next[0] += monomial_coeffs[static_cast<std::size_t>(n)];
        he.swap(next);
        while (he.size() > 1 && he.back() == 0.0) he.pop_back();
    }

    HermiteExpansion e;
    e.variance_base = g;
    e.h0 = he.empty() ? 0.0 : he[0];
    const int full_deg = static_cast<int>(he.size()) - 1;
    const int keep = std::min(q_max, full_deg);
    e.c.assign(static_cast<std::size_t>(std::max(keep, 1)) + 1, 0.0);
    for (int q = 1; q <= keep; ++q) e.c[static_cast<std::size_t>(q)] = he[static_cast<std::size_t>(q)];
    e.tail_variance = 0.0;
    for (int q = keep + 1; q <= full_deg; ++q)
        e.tail_variance += factorial(q) * he[static_cast<std::size_t>(q)] *
                           he[static_cast<std::size_t>(q)] * std::pow(g, q);
    return e;
}

namespace {

struct QuadPass {
    double h0 = 0.0;
    double second_moment = 0.0;
    std::vector<double> c;
};

QuadPass project_with_nodes(const std::function<double(double)>& H, double g,
                            int q_max, int nodes) {
    const auto rule = quad::gauss_hermite_prob(nodes);
    QuadPass out;
    out.c.assign(static_cast<std::size_t>(q_max) + 1, 0.0);
    std::vector<double> hq(static_cast<std::size_t>(q_max) + 1);
    const double sg = std::sqrt(g);
    for (int i = 0; i < nodes; ++i) {
        const double z = rule.nodes[static_cast<std::size_t>(i)];
        const double w = rule.weights[static_cast<std::size_t>(i)];
        const double hv = H(sg * z);
        out.h0 += w * hv;
        out.second_moment += w * hv * hv;
        // standard H_q at the standard node; the g-scaling folds into the
        // normalization c_q = E[H He_q]/(q! g^q) with He_q(sg z) = g^{q/2} H_q(z)
        eval_hermite_all(z, 1.0, hq);
        for (int q = 1; q <= q_max; ++q)
            out.c[static_cast<std::size_t>(q)] += w * hv * hq[static_cast<std::size_t>(q)];
    }
    double fact = 1.0;
    double gq = std::sqrt(g);
    for (int q = 1; q <= q_max; ++q) {
        fact *= q;
        out.c[static_cast<std::size_t>(q)] /= fact * gq;
        gq *= std::sqrt(g);
    }
    return out;
}

}  // namespace

HermiteExpansion expand(const std::function<double(double)>& H, double variance_base,
                        int q_max) {
    if (variance_base <= 0.0)
        throw validation_error("expand: variance_base must be > 0");
    if (q_max < 1) throw validation_error("expand: q_max must be >= 1");
    constexpr double kTol = 1e-10;
    int nodes = std::max(64, 2 * (q_max + 1));
    QuadPass prev = project_with_nodes(H, variance_base, q_max, nodes);
    for (nodes *= 2; nodes <= 4096; nodes *= 2) {
        QuadPass cur = project_with_nodes(H, variance_base, q_max, nodes);
        double delta = std::abs(cur.h0 - prev.h0);
        delta = std::max(delta, std::abs(cur.second_moment - prev.second_moment));
        for (int q = 1; q <= q_max; ++q)
            delta = std::max(delta, std::abs(cur.c[static_cast<std::size_t>(q)] -
                                             prev.c[static_cast<std::size_t>(q)]));
        if (delta < kTol) {
            HermiteExpansion e;
            e.variance_base = variance_base;
            e.h0 = cur.h0;
            e.c = cur.c;
            e.c[0] = 0.0;
            const double var = cur.second_moment - cur.h0 * cur.h0;
            e.tail_variance = 0.0;
            e.tail_variance = std::max(0.0, var - e.variance());
            return e;
        }
        prev = std::move(cur);
    }
    throw numerical_error(
        "expand: Gauss-Hermite quadrature did not converge; successive node "
        "counts disagree beyond tolerance (is E[H(X)^2] finite?)");
}

int hermite_rank(const HermiteExpansion& e) {
    const double thresh = e.zero_threshold();
    for (int q = 1; q <= e.q_max(); ++q)
        if (std::abs(e.coeff(q)) > thresh && e.coeff(q) != 0.0) return q;
    throw validation_error(
        "hermite_rank: all coefficients vanish (H is a.s. constant)");
}

LimitConstant limit_constant(const HermiteExpansion& e,
                             const cov::CovarianceModel& model, int radius) {
    const int m = hermite_rank(e);
    const auto base = cov::lq_sum(model, m, radius);
    if (!base.converged)
        throw numerical_error(
            "limit_constant: sum_u |rho(u)|^m fails the convergence diagnostic "
            "(Hermite rank m = " + std::to_string(m) + ")");
    LimitConstant out;
    const double thresh = e.zero_threshold();
    const double g = e.variance_base;
    for (int q = m; q <= e.q_max(); ++q) {
        const double cq = e.coeff(q);
        if (std::abs(cq) <= thresh) continue;
        const auto lq = cov::lq_sum(model, q, radius);
        const double w = factorial(q) * cq * cq;
        out.per_q_signed[q] = w * lq.signed_partial;
        out.per_q_abs[q] = w * lq.partial;
        out.signed_value += w * lq.signed_partial;
        out.abs_value += w * lq.partial;
        out.lattice_tail += w * lq.tail_estimate;
        if (!lq.converged) out.truncated = true;
    }
    if (e.tail_variance > 0.0) {
        // |rho(u)| <= rho(0) = g makes sum_u |rho|^q monotone in q after
        // normalization, so the q > q_max block is bounded by
        // tail_variance * sum_u (|rho(u)|/g)^{q_max+1}.
        const auto lq = cov::lq_sum(model, e.q_max() + 1, radius);
        out.expansion_tail =
            e.tail_variance * lq.partial / std::pow(g, e.q_max() + 1);
        out.truncated = true;
    }
    return out;
}

}  // namespace bmlab::hermite
