#include "bmlab/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "bmlab/errors.hpp"
#include "bmlab/lattice.hpp"
#include "bmlab/parallel.hpp"
#include "bmlab/quadrature.hpp"

namespace bmlab::chaos {

namespace {

double factorial(int q) {
    double f = 1.0;
    for (int i = 2; i <= q; ++i) f *= i;
    return f;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

int gl_nodes_for(int d) { return d <= 3 ? 64 : 16; }

}  // namespace

TestFunction TestFunction::constant_one() {
    TestFunction f;
    f.kind_ = Kind::kConstantOne;
    f.sup_ = 1.0;
    f.label_ = "1";
    return f;
}

TestFunction TestFunction::box_indicator(std::vector<double> lo, std::vector<double> hi,
                                         bool normalized) {
    if (lo.size() != hi.size() || lo.empty())
        throw validation_error("box_indicator: lo/hi arity mismatch");
    double volume = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i]))
            throw validation_error("box_indicator: requires lo < hi on every axis");
        if (lo[i] < -0.5 - 1e-12 || hi[i] > 0.5 + 1e-12)
            throw validation_error("box_indicator: box must lie inside D");
        volume *= hi[i] - lo[i];
    }
    TestFunction f;
    f.kind_ = Kind::kBoxIndicator;
    f.lo_ = std::move(lo);
    f.hi_ = std::move(hi);
    f.normalized_ = normalized;
    f.sup_ = normalized ? 1.0 / std::sqrt(volume) : 1.0;
    f.label_ = normalized ? "nbox" : "box";
    for (std::size_t i = 0; i < f.lo_.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "[%g,%g]", f.lo_[i], f.hi_[i]);
        f.label_ += buf;
    }
    return f;
}

TestFunction TestFunction::eigenfunction(std::vector<int> k) {
    if (k.empty()) throw validation_error("eigenfunction: empty multi-index");
    for (int ki : k)
        if (ki < 1) throw validation_error("eigenfunction: requires k_i >= 1");
    TestFunction f;
    f.kind_ = Kind::kEigenfunction;
    f.k_ = std::move(k);
    f.sup_ = std::pow(std::sqrt(2.0), static_cast<double>(f.k_.size()));
    f.label_ = "phi";
    for (int ki : f.k_) f.label_ += "_" + std::to_string(ki);
    return f;
}

TestFunction TestFunction::custom(std::function<double(std::span<const double>)> eval,
                                  double sup_bound, std::string label) {
    if (!eval) throw validation_error("custom test function: empty evaluator");
    if (!(sup_bound > 0.0))
        throw validation_error("custom test function: sup bound must be > 0");
    TestFunction f;
    f.kind_ = Kind::kCustom;
    f.eval_ = std::move(eval);
    f.sup_ = sup_bound;
    f.label_ = std::move(label);
    return f;
}

double TestFunction::axis_value(int axis, double x) const {
    switch (kind_) {
        case Kind::kConstantOne:
            return 1.0;
        case Kind::kBoxIndicator:
            return (x >= lo_[static_cast<std::size_t>(axis)] &&
                    x <= hi_[static_cast<std::size_t>(axis)])
                       ? 1.0
                       : 0.0;
        case Kind::kEigenfunction:
            return std::sqrt(2.0) *
                   std::sin(k_[static_cast<std::size_t>(axis)] * M_PI * (x + 0.5));
        case Kind::kCustom:
            break;
    }
    throw validation_error("axis_value: not a separable kind");
}

double TestFunction::operator()(std::span<const double> x) const {
    if (kind_ == Kind::kCustom) return eval_(x);
    if (kind_ == Kind::kBoxIndicator || kind_ == Kind::kEigenfunction) {
        if (x.size() != (kind_ == Kind::kBoxIndicator ? lo_.size() : k_.size()))
            throw validation_error("test function: point arity mismatch");
    }
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) v *= axis_value(static_cast<int>(i), x[i]);
    if (kind_ == Kind::kBoxIndicator && normalized_) v *= sup_;
    return v;
}

double TestFunction::l2_norm_sq(int d) const {
    switch (kind_) {
        case Kind::kConstantOne:
            return 1.0;
        case Kind::kBoxIndicator: {
            if (static_cast<int>(lo_.size()) != d)
                throw validation_error("l2_norm_sq: box arity != dimension");
            if (normalized_) return 1.0;
            double volume = 1.0;
            for (std::size_t i = 0; i < lo_.size(); ++i) volume *= hi_[i] - lo_[i];
            return volume;
        }
        case Kind::kEigenfunction:
            if (static_cast<int>(k_.size()) != d)
                throw validation_error("l2_norm_sq: eigenfunction arity != dimension");
            return 1.0;
        case Kind::kCustom:
            return inner_product(*this, *this, d);
    }
    return 0.0;
}

double TestFunction::inner_product(const TestFunction& f, const TestFunction& g, int d) {
    const bool f_sep = f.kind_ != Kind::kCustom;
    const bool g_sep = g.kind_ != Kind::kCustom;
    if (f_sep && g_sep) {
        double prod = 1.0;
        for (int axis = 0; axis < d; ++axis) {
            double lo = -0.5, hi = 0.5;
            if (f.kind_ == Kind::kBoxIndicator) {
                lo = std::max(lo, f.lo_[static_cast<std::size_t>(axis)]);
                hi = std::min(hi, f.hi_[static_cast<std::size_t>(axis)]);
            }
            if (g.kind_ == Kind::kBoxIndicator) {
                lo = std::max(lo, g.lo_[static_cast<std::size_t>(axis)]);
                hi = std::min(hi, g.hi_[static_cast<std::size_t>(axis)]);
            }
            if (hi <= lo) return 0.0;
            const int fk = f.kind_ == Kind::kEigenfunction
                               ? f.k_[static_cast<std::size_t>(axis)]
                               : 0;
            const int gk = g.kind_ == Kind::kEigenfunction
                               ? g.k_[static_cast<std::size_t>(axis)]
                               : 0;
            double factor;
            if (fk > 0 && gk > 0) {
                // both trigonometric over the full axis: exact orthogonality
                if (fk == gk) {
                    factor = 1.0;
                } else {
                    factor = 0.0;
                }
            } else if (fk > 0 || gk > 0) {
                const int k = std::max(fk, gk);
                // int_lo^hi sqrt(2) sin(k pi (x + 1/2)) dx
                factor = std::sqrt(2.0) / (k * M_PI) *
                         (std::cos(k * M_PI * (lo + 0.5)) - std::cos(k * M_PI * (hi + 0.5)));
            } else {
                factor = hi - lo;
            }
            prod *= factor;
            if (prod == 0.0) break;
        }
        const double fn = (f.kind_ == Kind::kBoxIndicator && f.normalized_) ? f.sup_ : 1.0;
        const double gn = (g.kind_ == Kind::kBoxIndicator && g.normalized_) ? g.sup_ : 1.0;
        return prod * fn * gn;
    }
    // custom fallback: tensor Gauss-Legendre
    const auto rule = quad::gauss_legendre(gl_nodes_for(d), -0.5, 0.5);
    const int n = static_cast<int>(rule.nodes.size());
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    double acc = 0.0;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[static_cast<std::size_t>(i)] = rule.nodes[static_cast<std::size_t>(
                idx[static_cast<std::size_t>(i)])];
            w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        }
        acc += w * f(x) * g(x);
        if (!lat::advance(idx, n)) break;
    }
    return acc;
}

std::vector<double> TestFunction::tabulate(int d, int N) const {
    const int h = lat::window_halfwidth(N);
    const int n = lat::window_points(N);
    std::vector<double> out(lat::cube_size(d, n));
    if (kind_ == Kind::kCustom) {
        std::vector<int> j(static_cast<std::size_t>(d), 0);
        std::vector<double> x(static_cast<std::size_t>(d));
        std::size_t w = 0;
        do {
            for (int i = 0; i < d; ++i)
                x[static_cast<std::size_t>(i)] =
                    static_cast<double>(j[static_cast<std::size_t>(i)] - h) / N;
            out[w++] = eval_(x);
        } while (lat::advance(j, n));
        return out;
    }
    std::vector<std::vector<double>> axis(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j)
            axis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                axis_value(i, static_cast<double>(j - h) / N);
    const double prefactor =
        (kind_ == Kind::kBoxIndicator && normalized_) ? sup_ : 1.0;
    std::vector<int> j(static_cast<std::size_t>(d), 0);
    std::size_t w = 0;
    do {
        double v = prefactor;
        for (int i = 0; i < d; ++i)
            v *= axis[static_cast<std::size_t>(i)]
                     [static_cast<std::size_t>(j[static_cast<std::size_t>(i)])];
        out[w++] = v;
    } while (lat::advance(j, n));
    return out;
}

WindowSums window_sums(std::span<const double> window,
                       const hermite::HermiteExpansion& e,
                       std::span<const double> f_values) {
    if (window.size() != f_values.size())
        throw validation_error("window_sums: window/test-function size mismatch");
    const int q_max = e.q_max();
    const double g = e.variance_base;
    WindowSums out;
    out.t_q.assign(static_cast<std::size_t>(q_max) + 1, 0.0);
    for (std::size_t i = 0; i < window.size(); ++i) {
        const double fv = f_values[i];
        if (fv == 0.0) continue;
        const double x = window[i];
        double prev = 1.0, cur = x;
        for (int q = 1; q <= q_max; ++q) {
            out.t_q[static_cast<std::size_t>(q)] += cur * fv;
            const double next = x * cur - q * g * prev;
            prev = cur;
            cur = next;
        }
    }
    for (int q = 1; q <= q_max; ++q)
        out.centered_sum += e.coeff(q) * out.t_q[static_cast<std::size_t>(q)];
    return out;
}

namespace {

double apply_normalization(double raw, int N, int d, Normalization norm, double c_m) {
    const double nd2 = std::pow(static_cast<double>(N), 0.5 * d);
    switch (norm) {
        case Normalization::kRaw:
            return raw;
        case Normalization::kCentered:
            return raw * nd2;
        case Normalization::kCltScaled:
            if (!(c_m > 0.0))
                throw validation_error("functional: clt_scaled requires C_m > 0");
            return raw * nd2 / std::sqrt(c_m);
    }
    return raw;
}

}  // namespace

ChaosStatistic functional(std::span<const double> window,
                          const hermite::HermiteExpansion& e, const TestFunction& f,
                          int N, int d, Normalization normalization, double c_m) {
    const auto fv = f.tabulate(d, N);
    if (window.size() != fv.size())
        throw validation_error("functional: window size != |B_N|");
    const auto sums = window_sums(window, e, fv);
    const double raw = sums.centered_sum / std::pow(static_cast<double>(N), d);
    ChaosStatistic s;
    s.N = N;
    s.q = -1;
    s.normalization = normalization;
    s.value = apply_normalization(raw, N, d, normalization, c_m);
    return s;
}

ChaosStatistic chaos_component(std::span<const double> window, int q, double c_q,
                               double variance_base, const TestFunction& f, int N,
                               int d) {
    if (q < 1) throw validation_error("chaos_component: q must be >= 1");
    const auto fv = f.tabulate(d, N);
    if (window.size() != fv.size())
        throw validation_error("chaos_component: window size != |B_N|");
    double sum = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (fv[i] == 0.0) continue;
        sum += hermite::eval_hermite_scaled(q, window[i], variance_base) * fv[i];
    }
    ChaosStatistic s;
    s.N = N;
    s.q = q;
    s.normalization = Normalization::kCentered;
    s.value = c_q * sum / std::pow(static_cast<double>(N), 0.5 * d);
    return s;
}

namespace {

// Lag-then-overlap sum sum_u rho(u)^q w(u) with
// w(u) = sum_{k in B_N cap (B_N - u)} f((k+u)/N) g(k/N).
double lag_overlap_sum(int q, const cov::CovarianceModel& model,
                       const TestFunction& f, const TestFunction& g, int N, int d,
                       double* abs_accum) {
    const int h = lat::window_halfwidth(N);
    const int n = lat::window_points(N);
    const bool separable = f.kind() != TestFunction::Kind::kCustom &&
                           g.kind() != TestFunction::Kind::kCustom;
    double total = 0.0;
    *abs_accum = 0.0;

    if (separable) {
        // per-axis cross-correlations: w(u) = pref * prod_i w_i(u_i)
        std::vector<std::vector<double>> corr(static_cast<std::size_t>(d));
        double pref = 1.0;
        {
            std::vector<double> fa(static_cast<std::size_t>(n)),
                ga(static_cast<std::size_t>(n));
            for (int axis = 0; axis < d; ++axis) {
                for (int j = 0; j < n; ++j) {
                    const double x = static_cast<double>(j - h) / N;
                    fa[static_cast<std::size_t>(j)] = f.axis_value(axis, x);
                    ga[static_cast<std::size_t>(j)] = g.axis_value(axis, x);
                }
                auto& w = corr[static_cast<std::size_t>(axis)];
                w.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
                for (int u = -(n - 1); u <= n - 1; ++u) {
                    double s = 0.0;
                    const int klo = std::max(0, -u), khi = std::min(n - 1, n - 1 - u);
                    for (int k = klo; k <= khi; ++k)
                        s += fa[static_cast<std::size_t>(k + u)] *
                             ga[static_cast<std::size_t>(k)];
                    w[static_cast<std::size_t>(u + n - 1)] = s;
                }
            }
            // sup_bound holds |Q|^{-1/2} for normalized boxes, 1 for plain ones
            if (f.kind() == TestFunction::Kind::kBoxIndicator) pref *= f.sup_bound();
            if (g.kind() == TestFunction::Kind::kBoxIndicator) pref *= g.sup_bound();
        }
        const bool finite = model.support_radius() >= 0;
        if (finite) {
            for (const auto& [u, r] : model.table()) {
                if (r == 0.0) continue;
                bool in_range = true;
                double wprod = pref;
                for (int i = 0; i < d && in_range; ++i) {
                    const int ui = u[static_cast<std::size_t>(i)];
                    if (std::abs(ui) > n - 1) in_range = false;
                    else
                        wprod *= corr[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(ui + n - 1)];
                }
                if (!in_range) continue;
                const double term = std::pow(r, q) * wprod;
                total += term;
                *abs_accum += std::abs(term);
            }
        } else {
            std::vector<int> u(static_cast<std::size_t>(d), -(n - 1));
            std::vector<int> uv(static_cast<std::size_t>(d));
            for (;;) {
                double wprod = pref;
                for (int i = 0; i < d; ++i) {
                    uv[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
                    wprod *= corr[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                        u[static_cast<std::size_t>(i)] + n - 1)];
                }
                if (wprod != 0.0) {
                    const double r = model.rho(uv);
                    if (r != 0.0) {
                        const double term = std::pow(r, q) * wprod;
                        total += term;
                        *abs_accum += std::abs(term);
                    }
                }
                int i = d - 1;
                for (; i >= 0; --i) {
                    if (++u[static_cast<std::size_t>(i)] <= n - 1) break;
                    u[static_cast<std::size_t>(i)] = -(n - 1);
                }
                if (i < 0) break;
            }
        }
        return total;
    }

    // generic (custom test functions): direct overlap per lag
    const auto fv = f.tabulate(d, N);
    const auto gv = g.tabulate(d, N);
    std::vector<int> u(static_cast<std::size_t>(d), -(n - 1));
    std::vector<int> uv(static_cast<std::size_t>(d));
    std::vector<int> k(static_cast<std::size_t>(d));
    for (;;) {
        for (int i = 0; i < d; ++i) uv[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
        const double r = model.rho(uv);
        if (r != 0.0) {
            double w = 0.0;
            for (int i = 0; i < d; ++i)
                k[static_cast<std::size_t>(i)] = std::max(0, -u[static_cast<std::size_t>(i)]);
            bool more = true;
            while (more) {
                std::size_t ik = 0, iku = 0;
                for (int i = 0; i < d; ++i) {
                    ik = ik * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(k[static_cast<std::size_t>(i)]);
                    iku = iku * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(k[static_cast<std::size_t>(i)] +
                                                   u[static_cast<std::size_t>(i)]);
                }
                w += fv[iku] * gv[ik];
                more = false;
                for (int i = d - 1; i >= 0; --i) {
                    const int hi_k = std::min(n - 1, n - 1 - u[static_cast<std::size_t>(i)]);
                    const int lo_k = std::max(0, -u[static_cast<std::size_t>(i)]);
                    if (++k[static_cast<std::size_t>(i)] <= hi_k) {
                        more = true;
                        break;
                    }
                    k[static_cast<std::size_t>(i)] = lo_k;
                }
            }
            const double term = std::pow(r, q) * w;
            total += term;
            *abs_accum += std::abs(term);
        }
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++u[static_cast<std::size_t>(i)] <= n - 1) break;
            u[static_cast<std::size_t>(i)] = -(n - 1);
        }
        if (i < 0) break;
    }
    return total;
}

}  // namespace

double exact_covariance(int q, double c_q, const cov::CovarianceModel& model,
                        const TestFunction& f, const TestFunction& g, int N, int d) {
    if (q < 1) throw validation_error("exact_covariance: q must be >= 1");
    double abs_accum = 0.0;
    const double lag_sum = lag_overlap_sum(q, model, f, g, N, d, &abs_accum);
    return factorial(q) * c_q * c_q * lag_sum / std::pow(static_cast<double>(N), d);
}

double exact_variance(int q, double c_q, const cov::CovarianceModel& model,
                      const TestFunction& f, int N, int d) {
    if (q < 1) throw validation_error("exact_variance: q must be >= 1");
    double abs_accum = 0.0;
    const double lag_sum = lag_overlap_sum(q, model, f, f, N, d, &abs_accum);
    const double scale = factorial(q) * c_q * c_q / std::pow(static_cast<double>(N), d);
    double value = scale * lag_sum;
    // a variance: tolerate only roundoff-scale negatives
    if (value < 0.0) {
        if (value < -1e-9 * std::max(scale * abs_accum, 1e-300))
            throw numerical_error("exact_variance: negative value beyond roundoff");
        value = 0.0;
    }
    return value;
}

double limit_variance(int q, double c_q, const cov::CovarianceModel& model,
                      const TestFunction& f, int d, int radius) {
    if (q < 1) throw validation_error("limit_variance: q must be >= 1");
    const auto lq = cov::lq_sum(model, q, radius);
    if (!lq.converged)
        throw numerical_error(
            "limit_variance: sum_u |rho(u)|^q fails the convergence diagnostic");
    return factorial(q) * c_q * c_q * lq.signed_partial * f.l2_norm_sq(d);
}

double contraction_norm_sq(int q, int r, double c_q, const cov::CovarianceModel& model,
                           const TestFunction& f, int N, int d, bool absolute_weights) {
    if (q < 2) throw validation_error("contraction_norm_sq: q must be >= 2");
    if (r < 1 || r > q - 1)
        throw validation_error("contraction_norm_sq: requires 1 <= r <= q-1");
    const int n = lat::window_points(N);
    const std::size_t B = lat::cube_size(d, n);
    const double iterations = std::pow(static_cast<double>(B), 4.0);
    if (iterations > 1e10)
        throw numerical_error(
            "contraction_norm_sq: |B_N|^4 = " + std::to_string(iterations) +
            " iterations exceeds the 1e10 feasibility guard");

    const auto fv = f.tabulate(d, N);
    // difference-indexed weight tables over [-(n-1), n-1]^d
    const int side = 2 * n - 1;
    const std::size_t diff_total = lat::cube_size(d, side);
    std::vector<double> w_r(diff_total), w_qr(diff_total);
    {
        std::vector<int> u(static_cast<std::size_t>(d), -(n - 1));
        std::vector<int> uv(static_cast<std::size_t>(d));
        std::size_t idx = 0;
        for (;;) {
            for (int i = 0; i < d; ++i) uv[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
            double rho = model.rho(uv);
            if (absolute_weights) rho = std::abs(rho);
            w_r[idx] = std::pow(rho, r);
            w_qr[idx] = std::pow(rho, q - r);
            ++idx;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++u[static_cast<std::size_t>(i)] <= n - 1) break;
                u[static_cast<std::size_t>(i)] = -(n - 1);
            }
            if (i < 0) break;
        }
    }
    // decode cache: site -> per-axis coordinates
    std::vector<std::vector<int>> coord(B, std::vector<int>(static_cast<std::size_t>(d)));
    {
        std::vector<int> j(static_cast<std::size_t>(d), 0);
        std::size_t idx = 0;
        do {
            coord[idx] = j;
            ++idx;
        } while (lat::advance(j, n));
    }
    auto diff_index = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i)
            idx = idx * static_cast<std::size_t>(side) +
                  static_cast<std::size_t>(a[static_cast<std::size_t>(i)] -
                                           b[static_cast<std::size_t>(i)] + n - 1);
        return idx;
    };

    // brute-force four-fold sum, parallel over j1 with a fixed reduction
    // order (per-j1 partials combined pairwise) for thread-count-stable sums
    std::vector<double> partial(B, 0.0);
    par::parallel_for(B, [&](std::size_t j1) {
        if (fv[j1] == 0.0) return;
        double acc = 0.0;
        for (std::size_t j3 = 0; j3 < B; ++j3) {
            if (fv[j3] == 0.0) continue;
            const double w13 = w_qr[diff_index(coord[j1], coord[j3])];
            if (w13 == 0.0) continue;
            double mid = 0.0;
            for (std::size_t j2 = 0; j2 < B; ++j2) {
                if (fv[j2] == 0.0) continue;
                const double w12 = w_r[diff_index(coord[j1], coord[j2])];
                if (w12 == 0.0) continue;
                double inner = 0.0;
                for (std::size_t j4 = 0; j4 < B; ++j4) {
                    if (fv[j4] == 0.0) continue;
                    inner += w_r[diff_index(coord[j3], coord[j4])] *
                             w_qr[diff_index(coord[j2], coord[j4])] * fv[j4];
                }
                mid += w12 * fv[j2] * inner;
            }
            acc += w13 * fv[j3] * mid;
        }
        partial[j1] = acc * fv[j1];
    }, 1);
    const double c4 = c_q * c_q * c_q * c_q;
    return c4 * pairwise_sum(partial) / std::pow(static_cast<double>(N), 2.0 * d);
}

FourthMoment fourth_moment_gap(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 100)
        throw validation_error("fourth_moment_gap: need at least 100 samples");
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double x : samples) {
        s1 += x;
        const double x2 = x * x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
    }
    auto kurtosis_from = [](double t1, double t2, double t3, double t4, double count) {
        const double m = t1 / count;
        const double m2 = t2 / count - m * m;
        const double m4 =
            t4 / count - 4.0 * m * t3 / count + 6.0 * m * m * t2 / count - 3.0 * m * m * m * m;
        return m4 / (m2 * m2);
    };
    const double nn = static_cast<double>(n);
    FourthMoment out;
    out.m4 = kurtosis_from(s1, s2, s3, s4, nn);
    out.gap = out.m4 - 3.0;
    // delete-one jackknife from the power sums
    double jk_sum = 0.0, jk_sum_sq = 0.0;
    for (double x : samples) {
        const double x2 = x * x;
        const double v =
            kurtosis_from(s1 - x, s2 - x2, s3 - x2 * x, s4 - x2 * x2, nn - 1.0);
        jk_sum += v;
        jk_sum_sq += v * v;
    }
    const double jk_mean = jk_sum / nn;
    const double jk_var = std::max(0.0, jk_sum_sq / nn - jk_mean * jk_mean);
    out.se = std::sqrt((nn - 1.0) * jk_var);
    return out;
}

}  // namespace bmlab::chaos
