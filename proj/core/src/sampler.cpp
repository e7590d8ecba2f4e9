#include "bmlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "bmlab/errors.hpp"
#include "bmlab/fft.hpp"
#include "bmlab/lattice.hpp"
#include "bmlab/rng.hpp"

namespace bmlab::sampler {

struct TorusSampler::Impl {
    std::vector<double> sqrt_spectrum;
    std::vector<double> spectrum;
    std::unique_ptr<fft::ComplexDft> dft;
};

TorusSampler::TorusSampler(const cov::CovarianceModel& model, int M)
    : d_(model.dimension()), M_(M), model_id_(model.id()), impl_(new Impl) {
    impl_->spectrum = cov::spectral_density(model, M);
    impl_->sqrt_spectrum.resize(impl_->spectrum.size());
    for (std::size_t i = 0; i < impl_->spectrum.size(); ++i)
        impl_->sqrt_spectrum[i] = std::sqrt(impl_->spectrum[i]);
    impl_->dft = std::make_unique<fft::ComplexDft>(d_, M, /*backward=*/true);
}

TorusSampler::~TorusSampler() = default;

const std::vector<double>& TorusSampler::spectrum() const { return impl_->spectrum; }

FieldSample TorusSampler::sample(std::uint64_t seed, std::uint64_t replica_index) const {
    const std::size_t total = impl_->dft->size();
    fft::Buffer<std::complex<double>> in(total), out(total);
    for (std::size_t k = 0; k < total; ++k) {
        const auto z = rng::normal_pair(seed, rng::kStreamDomainField + replica_index, k);
        in[k] = impl_->sqrt_spectrum[k] * std::complex<double>(z[0], z[1]);
    }
    impl_->dft->execute(in, out);
    // X_j = Re(T^{-1/2} sum_k sqrt(S_k)(a_k + i b_k) e^{2 pi i k.j / M}) has
    // exactly the M-periodized covariance.
    const double scale = 1.0 / std::sqrt(static_cast<double>(total));
    FieldSample s;
    s.meta = {d_, M_, FieldKind::kTorus, model_id_, seed, replica_index};
    s.values.resize(total);
    for (std::size_t j = 0; j < total; ++j) s.values[j] = scale * out[j].real();
    return s;
}

struct GffSampler::Impl {
    std::vector<double> inv_sqrt_lambda;  // (M-1)^d, flattened over k-1
    std::vector<double> lambda;
    std::unique_ptr<fft::DstI> dst;
    double coeff_scale = 1.0;  // (2/M)^{d/2} / 2^d folded into the synthesis
};

GffSampler::GffSampler(int d, int M) : d_(d), M_(M), impl_(new Impl) {
    if (d < 3) throw validation_error("GffSampler: requires d >= 3");
    if (M < 8) throw validation_error("GffSampler: requires M >= 8");
    const int n = M - 1;
    const std::size_t total = lat::cube_size(d, n);
    impl_->lambda.resize(total);
    impl_->inv_sqrt_lambda.resize(total);
    std::vector<double> axis_lambda(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double s = std::sin(M_PI * k / (2.0 * M));
        axis_lambda[static_cast<std::size_t>(k - 1)] = 4.0 * s * s;
    }
    std::vector<int> kidx(static_cast<std::size_t>(d), 0);
    for (std::size_t f = 0; f < total; ++f) {
        double lam = 0.0;
        std::size_t rest = f;
        for (int i = d - 1; i >= 0; --i) {
            lam += axis_lambda[rest % static_cast<std::size_t>(n)];
            rest /= static_cast<std::size_t>(n);
        }
        impl_->lambda[f] = lam;
        impl_->inv_sqrt_lambda[f] = 1.0 / std::sqrt(lam);
    }
    impl_->dst = std::make_unique<fft::DstI>(d, n);
    // psi_k(x) = prod (2/M)^{1/2} sin(pi k x / M); FFTW's RODFT00 carries a
    // factor 2 per axis, so fold (2/M)^{d/2} / 2^d into the input.
    impl_->coeff_scale = std::pow(2.0 / M, 0.5 * d) / std::pow(2.0, d);
}

GffSampler::~GffSampler() = default;

FieldSample GffSampler::sample(std::uint64_t seed, std::uint64_t replica_index) const {
    const int n = M_ - 1;
    const std::size_t total = lat::cube_size(d_, n);
    fft::Buffer<double> in(total), out(total);
    for (std::size_t k = 0; k < total; ++k) {
        const double z = rng::normal(seed, rng::kStreamDomainField + replica_index, k);
        in[k] = impl_->coeff_scale * impl_->inv_sqrt_lambda[k] * z;
    }
    impl_->dst->execute(in, out);

    FieldSample s;
    s.meta = {d_, M_, FieldKind::kZeroBoundaryBox, "gff:d=" + std::to_string(d_),
              seed, replica_index};
    s.values.assign(lat::cube_size(d_, M_), 0.0);
    // embed the interior {1..M-1}^d; faces at coordinate 0 stay zero
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rest = f, site = 0, mul = 1;
        for (int i = d_ - 1; i >= 0; --i) {
            const std::size_t xi = rest % static_cast<std::size_t>(n);
            rest /= static_cast<std::size_t>(n);
            site += (xi + 1) * mul;
            mul *= static_cast<std::size_t>(M_);
        }
        s.values[site] = out[f];
    }
    return s;
}

double GffSampler::box_green_diagonal(const std::vector<int>& x) const {
    if (static_cast<int>(x.size()) != d_)
        throw validation_error("box_green_diagonal: point arity != dimension");
    const int n = M_ - 1;
    const double norm = std::pow(2.0 / M_, d_);
    std::vector<int> k(static_cast<std::size_t>(d_), 1);
    double sum = 0.0;
    for (;;) {
        double psi = 1.0;
        double lam = 0.0;
        for (int i = 0; i < d_; ++i) {
            psi *= std::sin(M_PI * k[static_cast<std::size_t>(i)] *
                            x[static_cast<std::size_t>(i)] / M_);
            const double sv = std::sin(M_PI * k[static_cast<std::size_t>(i)] / (2.0 * M_));
            lam += 4.0 * sv * sv;
        }
        sum += norm * psi * psi / lam;
        int i = d_ - 1;
        for (; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] <= n) break;
            k[static_cast<std::size_t>(i)] = 1;
        }
        if (i < 0) break;
    }
    return sum;
}

std::vector<double> GffSampler::solve_dirichlet(const std::vector<double>& v) const {
    const int n = M_ - 1;
    const std::size_t total = lat::cube_size(d_, n);
    if (v.size() != total)
        throw validation_error("solve_dirichlet: interior size mismatch");
    fft::Buffer<double> a(total), b(total);
    for (std::size_t i = 0; i < total; ++i) a[i] = v[i];
    impl_->dst->execute(a, b);
    const double inv = 1.0 / impl_->dst->inverse_factor();
    for (std::size_t i = 0; i < total; ++i) b[i] = b[i] / impl_->lambda[i] * inv;
    impl_->dst->execute(b, a);
    return std::vector<double>(a.data(), a.data() + total);
}

namespace {

std::mutex& cache_mutex() {
    static std::mutex mu;
    return mu;
}

const TorusSampler& cached_torus(const cov::CovarianceModel& model, int M) {
    static std::map<std::pair<std::string, int>, std::unique_ptr<TorusSampler>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto key = std::make_pair(model.id(), M);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(std::move(key), std::make_unique<TorusSampler>(model, M)).first;
    return *it->second;
}

const GffSampler& cached_gff(int d, int M) {
    static std::map<std::pair<int, int>, std::unique_ptr<GffSampler>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto key = std::make_pair(d, M);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(std::move(key), std::make_unique<GffSampler>(d, M)).first;
    return *it->second;
}

}  // namespace

FieldSample sample_stationary(const cov::CovarianceModel& model, int M,
                              std::uint64_t seed, std::uint64_t replica_index) {
    return cached_torus(model, M).sample(seed, replica_index);
}

FieldSample sample_gff(int d, int M, std::uint64_t seed, std::uint64_t replica_index) {
    return cached_gff(d, M).sample(seed, replica_index);
}

FieldSample gradient_field(const FieldSample& sample, int axis) {
    const int d = sample.meta.d;
    const int M = sample.meta.M;
    if (axis < 0 || axis >= d) throw validation_error("gradient_field: bad axis");
    FieldSample out;
    out.meta = sample.meta;
    out.meta.model_id = "grad" + std::to_string(axis) + "(" + sample.meta.model_id + ")";
    out.values.assign(sample.values.size(), 0.0);
    std::size_t stride = 1;
    for (int i = axis + 1; i < d; ++i) stride *= static_cast<std::size_t>(M);
    const bool torus = sample.meta.kind == FieldKind::kTorus;
    std::vector<int> j(static_cast<std::size_t>(d), 0);
    std::size_t idx = 0;
    do {
        const int ja = j[static_cast<std::size_t>(axis)];
        if (ja + 1 < M) {
            out.values[idx] = sample.values[idx + stride] - sample.values[idx];
        } else if (torus) {
            // wrap: neighbor of the last slab is slab 0
            out.values[idx] =
                sample.values[idx + stride - stride * static_cast<std::size_t>(M)] -
                sample.values[idx];
        } else {
            out.values[idx] = 0.0;
        }
        ++idx;
    } while (lat::advance(j, M));
    return out;
}

std::vector<double> extract_window(const FieldSample& sample, const Window& window) {
    const int d = sample.meta.d;
    const int M = sample.meta.M;
    const int h = lat::window_halfwidth(window.N);
    if (window.N < 1) throw validation_error("extract_window: N must be >= 1");
    std::vector<int> center = window.center;
    if (center.empty()) center.assign(static_cast<std::size_t>(d), M / 2);
    if (static_cast<int>(center.size()) != d)
        throw validation_error("extract_window: center arity != dimension");
    // Buffer margin: N/2 sites of clearance on the torus, M/4 for the
    // zero-boundary box (windows restricted to the central half).
    for (int i = 0; i < d; ++i) {
        const int lo = center[static_cast<std::size_t>(i)] - h;
        const int hi = center[static_cast<std::size_t>(i)] + h;
        const bool ok = sample.meta.kind == FieldKind::kTorus
                            ? (lo >= 0 && hi <= M - 1 && 2 * lo >= window.N &&
                               2 * (M - 1 - hi) >= window.N)
                            : (4 * lo >= M && 4 * (M - 1 - hi) >= M);
        if (!ok)
            throw validation_error(
                "extract_window: window violates the buffer margin (torus needs "
                "N/2, box needs M/4 sites of clearance)");
    }
    const int n = lat::window_points(window.N);
    std::vector<double> out(lat::cube_size(d, n));
    std::vector<int> j(static_cast<std::size_t>(d), 0);
    std::size_t w = 0;
    do {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i)
            idx = idx * static_cast<std::size_t>(M) +
                  static_cast<std::size_t>(center[static_cast<std::size_t>(i)] - h +
                                           j[static_cast<std::size_t>(i)]);
        out[w++] = sample.values[idx];
    } while (lat::advance(j, n));
    return out;
}

int default_torus_size(const cov::CovarianceModel& model, int N) {
    const int support = std::max(model.support_radius(), 0);
    // 2N + 2 rather than 2N: a centered size-N window then keeps the N/2
    // buffer margin on both sides.
    int M = std::max(2 * N + 2, 2 * support + 2);
    if (M % 2 != 0) ++M;
    return std::max(M, 4);
}

}  // namespace bmlab::sampler
