#include "bmlab/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "bmlab/errors.hpp"
#include "bmlab/lattice.hpp"

namespace bmlab::fft {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

template <typename T>
Buffer<T>::Buffer(std::size_t n) : n_(n) {
    ptr_ = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!ptr_) throw numerical_error("fft: allocation failed");
    for (std::size_t i = 0; i < n; ++i) ptr_[i] = T{};
}

template <typename T>
Buffer<T>::~Buffer() {
    if (ptr_) fftw_free(ptr_);
}

template <typename T>
Buffer<T>::Buffer(Buffer&& other) noexcept : ptr_(other.ptr_), n_(other.n_) {
    other.ptr_ = nullptr;
    other.n_ = 0;
}

template <typename T>
Buffer<T>& Buffer<T>::operator=(Buffer&& other) noexcept {
    if (this != &other) {
        if (ptr_) fftw_free(ptr_);
        ptr_ = other.ptr_;
        n_ = other.n_;
        other.ptr_ = nullptr;
        other.n_ = 0;
    }
    return *this;
}

template class Buffer<double>;
template class Buffer<std::complex<double>>;

struct ComplexDft::Impl {
    fftw_plan plan = nullptr;
};

ComplexDft::ComplexDft(int d, int n, bool backward) : impl_(new Impl) {
    if (d < 1 || n < 1) throw validation_error("ComplexDft: need d >= 1, n >= 1");
    total_ = lat::cube_size(d, n);
    Buffer<std::complex<double>> in(total_), out(total_);
    std::vector<int> dims(d, n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic (no timing-based choices).
    impl_->plan = fftw_plan_dft(d, dims.data(),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                backward ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    if (!impl_->plan) throw numerical_error("ComplexDft: planning failed");
}

ComplexDft::~ComplexDft() {
    if (impl_ && impl_->plan) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(impl_->plan);
    }
}

void ComplexDft::execute(Buffer<std::complex<double>>& in,
                         Buffer<std::complex<double>>& out) const {
    if (in.size() != total_ || out.size() != total_)
        throw validation_error("ComplexDft::execute: buffer size mismatch");
    fftw_execute_dft(impl_->plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

struct DstI::Impl {
    fftw_plan plan = nullptr;
};

DstI::DstI(int d, int n) : impl_(new Impl) {
    if (d < 1 || n < 1) throw validation_error("DstI: need d >= 1, n >= 1");
    total_ = lat::cube_size(d, n);
    inv_factor_ = 1.0;
    for (int i = 0; i < d; ++i) inv_factor_ *= 2.0 * (n + 1);
    Buffer<double> in(total_), out(total_);
    std::vector<int> dims(d, n);
    std::vector<fftw_r2r_kind> kinds(d, FFTW_RODFT00);
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->plan = fftw_plan_r2r(d, dims.data(), in.data(), out.data(), kinds.data(),
                                FFTW_ESTIMATE);
    if (!impl_->plan) throw numerical_error("DstI: planning failed");
}

DstI::~DstI() {
    if (impl_ && impl_->plan) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(impl_->plan);
    }
}

void DstI::execute(Buffer<double>& in, Buffer<double>& out) const {
    if (in.size() != total_ || out.size() != total_)
        throw validation_error("DstI::execute: buffer size mismatch");
    fftw_execute_r2r(impl_->plan, in.data(), out.data());
}

}  // namespace bmlab::fft
