#include "bmlab/green.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "bmlab/errors.hpp"
#include "bmlab/lattice.hpp"
#include "bmlab/parallel.hpp"
#include "bmlab/quadrature.hpp"
#include "bmlab/rng.hpp"

namespace bmlab::green {

double double_factorial_odd(int p) {
    if (p < 0) throw validation_error("double_factorial_odd: p must be >= 0");
    double v = 1.0;
    for (int k = 3; k <= 2 * p + 1; k += 2) v *= k;
    return v;
}

double continuous_green_constant(int d) {
    if (d < 3) throw validation_error("continuous_green: requires d >= 3");
    return std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(M_PI, 0.5 * d));
}

double continuous_green(int d, std::span<const double> x, std::span<const double> y) {
    if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
        throw validation_error("continuous_green: point arity != dimension");
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double dx = x[i] - y[i];
        r2 += dx * dx;
    }
    if (r2 == 0.0) throw validation_error("continuous_green: singular at x == y");
    return continuous_green_constant(d) * std::pow(std::sqrt(r2), 2.0 - d);
}

struct GreenFunction::Impl {
    mutable std::mutex mu;
    mutable std::map<std::vector<int>, double> cache;
    std::uint64_t mc_seed = 0;
    long walkers = 0;
};

namespace {

std::vector<int> canonical(std::span<const int> u) {
    std::vector<int> key(u.begin(), u.end());
    for (auto& x : key) x = std::abs(x);
    std::sort(key.begin(), key.end(), std::greater<int>());
    return key;
}

// G(u) = int_0^inf prod_j e^{-2t} I_{|u_j|}(2t) dt, the exact 1-d reduction
// of the lattice Fourier integral via 1/lambda = int_0^inf e^{-lambda t} dt.
double fourier_value(int d, const std::vector<int>& key, double epsrel) {
    auto integrand = [&](double t) {
        double prod = 1.0;
        for (int i = 0; i < d; ++i)
            prod *= gsl_sf_bessel_In_scaled(key[static_cast<std::size_t>(i)], 2.0 * t);
        return prod;
    };
    return quad::integrate_upper(integrand, 0.0, 1e-13, epsrel);
}

struct WalkAccum {
    std::vector<double> sum;
    std::vector<double> sum_sq;
};

// Occupation-time estimate of G_rw(u) = E[#visits to u] for the simple
// random walk started at the origin, for all |u|_inf <= rc at once.  Walks
// are truncated on exit from the l2 ball of radius `exit_radius`; the
// expected future visits from the exit point are added back through the
// asymptotic G_rw(x) ~ 2d c_d |x|^{2-d}, leaving a bias of higher order.
// Per-walk values are pooled over the lattice-symmetry orbit of each lag
// (the walk law is exactly symmetric), which shrinks both the standard
// error and the number of independent comparisons.
void run_walk_block(int d, int rc, double exit_radius, std::uint64_t seed,
                    long walk_lo, long walk_hi,
                    const std::vector<int>& orbit_of, int n_orbits,
                    const std::vector<double>& orbit_size, WalkAccum* acc) {
    const int side = 2 * rc + 1;
    const std::size_t n_targets = lat::cube_size(d, side);
    const double crw = 2.0 * d * continuous_green_constant(d);
    const double exit_r2 = exit_radius * exit_radius;
    std::vector<int> x(d), visits(n_targets);
    std::vector<double> orbit_est(static_cast<std::size_t>(n_orbits));
    for (long w = walk_lo; w < walk_hi; ++w) {
        std::fill(x.begin(), x.end(), 0);
        std::fill(visits.begin(), visits.end(), 0);
        std::fill(orbit_est.begin(), orbit_est.end(), 0.0);
        const std::uint64_t stream = rng::kStreamDomainWalk + static_cast<std::uint64_t>(w);
        double r2 = 0.0;
        std::uint64_t step = 0;
        while (r2 <= exit_r2 && step < 4000000) {
            bool inside = true;
            for (int i = 0; i < d; ++i)
                if (std::abs(x[i]) > rc) { inside = false; break; }
            if (inside) {
                std::size_t idx = 0;
                for (int i = 0; i < d; ++i)
                    idx = idx * side + static_cast<std::size_t>(x[i] + rc);
                ++visits[idx];
            }
            const std::uint64_t mv =
                rng::uniform_index(seed, stream, step++, static_cast<std::uint64_t>(2 * d));
            const int axis = static_cast<int>(mv >> 1);
            x[axis] += (mv & 1) ? 1 : -1;
            r2 = 0.0;
            for (int i = 0; i < d; ++i) r2 += static_cast<double>(x[i]) * x[i];
        }
        // tail correction per target from the actual exit point
        std::size_t idx = 0;
        std::vector<int> u(d, -rc);
        for (;;) {
            double dist2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double dx = static_cast<double>(x[i] - u[i]);
                dist2 += dx * dx;
            }
            orbit_est[static_cast<std::size_t>(orbit_of[idx])] +=
                visits[idx] + crw * std::pow(std::sqrt(dist2), 2.0 - d);
            ++idx;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++u[i] <= rc) break;
                u[i] = -rc;
            }
            if (i < 0) break;
        }
        for (int o = 0; o < n_orbits; ++o) {
            const double est = orbit_est[static_cast<std::size_t>(o)] /
                               orbit_size[static_cast<std::size_t>(o)];
            acc->sum[static_cast<std::size_t>(o)] += est;
            acc->sum_sq[static_cast<std::size_t>(o)] += est * est;
        }
    }
}

}  // namespace

GreenFunction::GreenFunction(int d, int check_radius, double quad_epsrel,
                             std::uint64_t mc_seed, long walkers)
    : d_(d), epsrel_(quad_epsrel), impl_(new Impl) {
    if (d < 3) throw validation_error("GreenFunction: requires d >= 3");
    if (check_radius < 0) throw validation_error("GreenFunction: bad check radius");
    impl_->mc_seed = mc_seed;
    impl_->walkers = walkers;

    const int rc = check_radius;
    const int side = 2 * rc + 1;
    const std::size_t n_targets = lat::cube_size(d, side);
    const double exit_radius = 32.0;

    // symmetry orbits (sorted absolute coordinates) over the checked ball
    std::vector<int> orbit_of(n_targets, -1);
    std::map<std::vector<int>, int> orbit_index;
    std::vector<double> orbit_size;
    {
        std::vector<int> u(d, -rc);
        std::size_t idx = 0;
        for (;;) {
            const auto key = canonical(u);
            auto it = orbit_index.find(key);
            if (it == orbit_index.end()) {
                it = orbit_index.emplace(key, static_cast<int>(orbit_size.size())).first;
                orbit_size.push_back(0.0);
            }
            orbit_of[idx] = it->second;
            orbit_size[static_cast<std::size_t>(it->second)] += 1.0;
            ++idx;
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++u[i] <= rc) break;
                u[i] = -rc;
            }
            if (i < 0) break;
        }
    }
    const int n_orbits = static_cast<int>(orbit_size.size());

    // Monte Carlo estimate, block-parallel with per-walk Philox streams;
    // block results merge in index order so the outcome is thread-count
    // independent.
    const long block = 4096;
    const long n_blocks = (walkers + block - 1) / block;
    std::vector<WalkAccum> accs(static_cast<std::size_t>(n_blocks));
    for (auto& a : accs) {
        a.sum.assign(static_cast<std::size_t>(n_orbits), 0.0);
        a.sum_sq.assign(static_cast<std::size_t>(n_orbits), 0.0);
    }
    par::parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t b) {
        const long lo = static_cast<long>(b) * block;
        const long hi = std::min(walkers, lo + block);
        run_walk_block(d, rc, exit_radius, impl_->mc_seed, lo, hi, orbit_of,
                       n_orbits, orbit_size, &accs[b]);
    });
    WalkAccum total;
    total.sum.assign(static_cast<std::size_t>(n_orbits), 0.0);
    total.sum_sq.assign(static_cast<std::size_t>(n_orbits), 0.0);
    for (const auto& a : accs) {
        for (int o = 0; o < n_orbits; ++o) {
            total.sum[static_cast<std::size_t>(o)] += a.sum[static_cast<std::size_t>(o)];
            total.sum_sq[static_cast<std::size_t>(o)] += a.sum_sq[static_cast<std::size_t>(o)];
        }
    }

    std::vector<int> u(d, -rc);
    std::size_t idx = 0;
    const double K = static_cast<double>(walkers);
    double worst_excess = 0.0;
    std::string worst_info;
    for (;;) {
        const int o = orbit_of[idx];
        const double mean = total.sum[static_cast<std::size_t>(o)] / K;
        const double var = std::max(
            0.0, total.sum_sq[static_cast<std::size_t>(o)] / K - mean * mean);
        const double se = std::sqrt(var / K) / (2.0 * d);
        CrossCheckEntry e;
        e.u = u;
        e.walk = mean / (2.0 * d);
        e.walk_se = se;
        e.fourier = at(u);
        checks_.push_back(e);
        const double combined = 3.0 * (se + epsrel_ * std::abs(e.fourier) + 1e-12);
        const double gap = std::abs(e.fourier - e.walk);
        if (gap > combined && gap - combined > worst_excess) {
            worst_excess = gap - combined;
            char buf[160];
            std::string lag;
            for (int x : u) lag += std::to_string(x) + ",";
            std::snprintf(buf, sizeof buf,
                          "lag (%s) fourier %.8g walk %.8g +- %.2g", lag.c_str(),
                          e.fourier, e.walk, se);
            worst_info = buf;
        }
        ++idx;
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++u[i] <= rc) break;
            u[i] = -rc;
        }
        if (i < 0) break;
    }
    if (worst_excess > 0.0)
        throw numerical_error(
            "GreenFunction: Fourier quadrature and random-walk estimates disagree "
            "beyond 3 combined standard errors; worst " + worst_info);
}

GreenFunction::~GreenFunction() { delete impl_; }

double GreenFunction::at(std::span<const int> u) const {
    if (static_cast<int>(u.size()) != d_)
        throw validation_error("GreenFunction::at: lag arity != dimension");
    const auto key = canonical(u);
    {
        std::lock_guard<std::mutex> lock(impl_->mu);
        auto it = impl_->cache.find(key);
        if (it != impl_->cache.end()) return it->second;
    }
    const double v = fourier_value(d_, key, epsrel_);
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->cache.emplace(key, v).first->second;
}

double GreenFunction::diagonal() const {
    const std::vector<int> origin(d_, 0);
    return at(origin);
}

const GreenFunction& shared_green(int d) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GreenFunction>> instances;
    std::lock_guard<std::mutex> lock(mu);
    auto it = instances.find(d);
    if (it == instances.end()) {
        // mc_seed pinned so the construction-time cross-check is reproducible
        it = instances
                 .emplace(d, std::make_unique<GreenFunction>(
                                 d, /*check_radius=*/2, /*quad_epsrel=*/1e-10,
                                 /*mc_seed=*/101, /*walkers=*/60000))
                 .first;
    }
    return *it->second;
}

double discrete_green(int d, std::span<const int> u) {
    return shared_green(d).at(u);
}

}  // namespace bmlab::green
