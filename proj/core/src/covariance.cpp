#include "bmlab/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "bmlab/errors.hpp"
#include "bmlab/fft.hpp"
#include "bmlab/green.hpp"
#include "bmlab/lattice.hpp"

namespace bmlab::cov {

namespace {

std::vector<int> negate(const std::vector<int>& u) {
    std::vector<int> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = -u[i];
    return v;
}

int linf(std::span<const int> u) {
    int m = 0;
    for (int x : u) m = std::max(m, std::abs(x));
    return m;
}

double l2(std::span<const int> u) {
    double s = 0.0;
    for (int x : u) s += static_cast<double>(x) * x;
    return std::sqrt(s);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

CovarianceModel CovarianceModel::delta(int d) {
    if (d < 1) throw validation_error("CovarianceModel: dimension must be >= 1");
    CovarianceModel m;
    m.d_ = d;
    m.kind_ = Kind::kDelta;
    m.variance_ = 1.0;
    m.support_radius_ = 0;
    m.table_[std::vector<int>(d, 0)] = 1.0;
    m.id_ = "delta:d=" + std::to_string(d);
    return m;
}

CovarianceModel CovarianceModel::finite_support(int d, const Table& table) {
    if (d < 1) throw validation_error("CovarianceModel: dimension must be >= 1");
    CovarianceModel m;
    m.d_ = d;
    m.kind_ = Kind::kFiniteSupport;
    for (const auto& [u, v] : table) {
        if (static_cast<int>(u.size()) != d)
            throw validation_error("finite_support: lag arity != dimension");
        m.table_[u] += 0.0;  // touch
        m.table_[u] = v;
        const auto nu = negate(u);
        auto it = table.find(nu);
        if (it != table.end() && std::abs(it->second - v) > 1e-12)
            throw validation_error("finite_support: table breaks rho(u) = rho(-u)");
        m.table_[nu] = v;  // mirror
    }
    const std::vector<int> origin(d, 0);
    auto it0 = m.table_.find(origin);
    if (it0 == m.table_.end() || it0->second <= 0.0)
        throw validation_error("finite_support: rho(0) must be present and > 0");
    m.variance_ = it0->second;
    m.support_radius_ = 0;
    for (const auto& [u, v] : m.table_) {
        if (v == 0.0) continue;
        if (std::abs(v) > m.variance_ + 1e-12)
            throw validation_error("finite_support: |rho(u)| must not exceed rho(0)");
        m.support_radius_ = std::max(m.support_radius_, linf(u));
    }
    std::ostringstream id;
    id << "fs:d=" << d;
    for (const auto& [u, v] : m.table_) {
        id << ";";
        for (int x : u) id << x << ",";
        id << format_double(v);
    }
    m.id_ = id.str();
    return m;
}

CovarianceModel CovarianceModel::power_law(int d, double amplitude, double exponent,
                                           double rho0) {
    if (d < 1) throw validation_error("CovarianceModel: dimension must be >= 1");
    if (rho0 <= 0.0) throw validation_error("power_law: rho0 must be > 0");
    if (exponent <= 0.0) throw validation_error("power_law: exponent must be > 0");
    if (std::abs(amplitude) * std::pow(2.0, -exponent) > rho0)
        throw validation_error("power_law: |rho(u)| must not exceed rho(0)");
    CovarianceModel m;
    m.d_ = d;
    m.kind_ = Kind::kPowerLaw;
    m.variance_ = rho0;
    m.amplitude_ = amplitude;
    m.exponent_ = exponent;
    m.support_radius_ = -1;
    m.id_ = "pl:d=" + std::to_string(d) + ";a=" + format_double(amplitude) +
            ";b=" + format_double(exponent) + ";v=" + format_double(rho0);
    return m;
}

CovarianceModel CovarianceModel::gff_green(int d) {
    if (d < 3) throw validation_error("gff_green: requires d >= 3");
    CovarianceModel m;
    m.d_ = d;
    m.kind_ = Kind::kGffGreen;
    m.variance_ = green::shared_green(d).diagonal();
    m.support_radius_ = -1;
    m.id_ = "gff:d=" + std::to_string(d);
    return m;
}

double CovarianceModel::rho(std::span<const int> u) const {
    if (static_cast<int>(u.size()) != d_)
        throw validation_error("rho: lag arity != dimension");
    switch (kind_) {
        case Kind::kDelta:
            for (int x : u)
                if (x != 0) return 0.0;
            return 1.0;
        case Kind::kFiniteSupport: {
            const std::vector<int> key(u.begin(), u.end());
            auto it = table_.find(key);
            return it == table_.end() ? 0.0 : it->second;
        }
        case Kind::kPowerLaw: {
            bool origin = true;
            for (int x : u)
                if (x != 0) origin = false;
            if (origin) return variance_;
            return amplitude_ * std::pow(1.0 + l2(u), -exponent_);
        }
        case Kind::kGffGreen:
            return green::shared_green(d_).at(u);
    }
    return 0.0;
}

CovarianceModel gradient_model(const CovarianceModel& model, int axis, int radius) {
    const int d = model.dimension();
    if (axis < 0 || axis >= d) throw validation_error("gradient_model: bad axis");
    int r = model.support_radius() >= 0 ? model.support_radius() + 1 : radius;
    CovarianceModel::Table table;
    std::vector<int> u(d, -r);
    for (;;) {
        std::vector<int> up = u, um = u;
        up[axis] += 1;
        um[axis] -= 1;
        const double v = 2.0 * model.rho(u) - model.rho(up) - model.rho(um);
        if (v != 0.0) table[u] = v;
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++u[i] <= r) break;
            u[i] = -r;
        }
        if (i < 0) break;
    }
    return CovarianceModel::finite_support(d, table);
}

namespace {

// Sum of |rho|^q and rho^q over the l-inf shell |u|_inf = s.
void shell_sums(const CovarianceModel& model, int q, int s, double* abs_sum,
                double* signed_sum) {
    const int d = model.dimension();
    *abs_sum = 0.0;
    *signed_sum = 0.0;
    // Finite-support models beyond the support contribute nothing.
    if (model.support_radius() >= 0 && s > model.support_radius()) return;
    std::vector<int> u(d, -s);
    for (;;) {
        if (linf(u) == s) {
            const double r = model.rho(u);
            if (r != 0.0) {
                const double p = std::pow(std::abs(r), q);
                *abs_sum += p;
                *signed_sum += (r < 0.0 && (q % 2 == 1)) ? -p : p;
            }
        }
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++u[i] <= s) break;
            u[i] = -s;
        }
        if (i < 0) break;
    }
}

}  // namespace

LqSum lq_sum(const CovarianceModel& model, int q, int radius) {
    if (q < 1) throw validation_error("lq_sum: q must be >= 1");
    if (radius < 1) throw validation_error("lq_sum: radius must be >= 1");
    LqSum out;
    std::vector<double> shell_abs(radius + 1, 0.0);
    double half_partial = 0.0;
    for (int s = 0; s <= radius; ++s) {
        double a, g;
        shell_sums(model, q, s, &a, &g);
        shell_abs[s] = a;
        out.partial += a;
        out.signed_partial += g;
        if (s == radius / 2) half_partial = out.partial;
    }
    // Doubling rule: exact for finite support once the support is covered.
    if (model.support_radius() >= 0 && radius >= model.support_radius()) {
        out.converged = true;
        out.tail_estimate = 0.0;
        return out;
    }
    if (out.partial > 0.0 &&
        std::abs(out.partial - half_partial) < 1e-8 * out.partial) {
        out.converged = true;
        out.tail_estimate = std::abs(out.partial - half_partial);
        return out;
    }
    // Integral-test certificate: fit shell sums ~ A s^p over the outer
    // shells; p < -1 certifies summability and gives a tail estimate.
    int lo = std::max(2, radius / 2);
    int count = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int s = lo; s <= radius; ++s) {
        if (shell_abs[s] <= 0.0) continue;
        const double x = std::log(static_cast<double>(s));
        const double y = std::log(shell_abs[s]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 3) {
        const double denom = count * sxx - sx * sx;
        if (denom > 0.0) {
            const double p = (count * sxy - sx * sy) / denom;
            const double log_a = (sy - p * sx) / count;
            if (p < -1.0 - 1e-6) {
                // tail ~ A * integral_radius^inf s^p ds
                out.converged = true;
                out.tail_estimate =
                    std::exp(log_a) * std::pow(radius, p + 1.0) / (-p - 1.0);
            }
        }
    }
    return out;
}

std::vector<double> spectral_density(const CovarianceModel& model, int M) {
    const int d = model.dimension();
    if (M < 2 || M % 2 != 0)
        throw validation_error("spectral_density: M must be even and >= 2");
    if (model.support_radius() >= 0 && 2 * model.support_radius() >= M)
        throw numerical_error(
            "spectral_density: embedding failure, support does not fit the torus; "
            "increase M beyond twice the support radius");
    const std::size_t total = lat::cube_size(d, M);
    fft::Buffer<std::complex<double>> in(total), out(total);

    if (model.support_radius() >= 0) {
        for (const auto& [u, v] : model.table()) {
            if (v == 0.0) continue;
            std::size_t idx = 0;
            for (int x : u) {
                const int w = ((x % M) + M) % M;
                idx = idx * M + static_cast<std::size_t>(w);
            }
            in[idx] += v;
        }
    } else {
        // Decaying kinds: periodize with the centered principal image.
        std::vector<int> j(d, 0), u(d, 0);
        std::size_t idx = 0;
        do {
            for (int i = 0; i < d; ++i) u[i] = j[i] > M / 2 ? j[i] - M : j[i];
            in[idx] = model.rho(u);
            ++idx;
        } while (lat::advance(j, M));
    }

    fft::ComplexDft dft(d, M, /*backward=*/false);
    dft.execute(in, out);

    std::vector<double> s(total);
    double max_val = 0.0, min_val = 0.0, max_imag = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        s[i] = out[i].real();
        max_val = std::max(max_val, s[i]);
        min_val = std::min(min_val, s[i]);
        max_imag = std::max(max_imag, std::abs(out[i].imag()));
    }
    if (max_imag > 1e-9 * std::max(1.0, max_val))
        throw numerical_error("spectral_density: spectrum not real (asymmetric table?)");
    if (min_val < -1e-9 * max_val)
        throw numerical_error(
            "spectral_density: embedding failure, negative circulant eigenvalue " +
            std::to_string(min_val) + "; increase M");
    for (auto& v : s) v = std::max(v, 0.0);
    return s;
}

}  // namespace bmlab::cov
