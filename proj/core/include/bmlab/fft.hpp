#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace bmlab::fft {

// Aligned buffer compatible with FFTW's new-array execute interface.
template <typename T>
class Buffer {
public:
    Buffer() = default;
    explicit Buffer(std::size_t n);
    ~Buffer();
    Buffer(Buffer&& other) noexcept;
    Buffer& operator=(Buffer&& other) noexcept;
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;

    T* data() { return ptr_; }
    const T* data() const { return ptr_; }
    std::size_t size() const { return n_; }
    T& operator[](std::size_t i) { return ptr_[i]; }
    const T& operator[](std::size_t i) const { return ptr_[i]; }

private:
    T* ptr_ = nullptr;
    std::size_t n_ = 0;
};

// d-dimensional complex DFT of cube edge n (same length per axis).
// Plans once (thread-safe), executes concurrently on caller buffers.
class ComplexDft {
public:
    ComplexDft(int d, int n, bool backward);
    ~ComplexDft();
    ComplexDft(const ComplexDft&) = delete;
    ComplexDft& operator=(const ComplexDft&) = delete;

    std::size_t size() const { return total_; }
    // out_j = sum_k in_k exp(+-2*pi*i*k.j/n), unnormalized.
    void execute(Buffer<std::complex<double>>& in,
                 Buffer<std::complex<double>>& out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t total_ = 0;
};

// d-dimensional DST-I (FFTW RODFT00) of cube edge n per axis:
// out_j = prod-of-axes 2 * sum_k in_k sin(pi (j_i+1)(k_i+1)/(n+1)).
// Self-inverse up to the factor (2(n+1))^d.
class DstI {
public:
    DstI(int d, int n);
    ~DstI();
    DstI(const DstI&) = delete;
    DstI& operator=(const DstI&) = delete;

    std::size_t size() const { return total_; }
    double inverse_factor() const { return inv_factor_; }
    void execute(Buffer<double>& in, Buffer<double>& out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t total_ = 0;
    double inv_factor_ = 1.0;
};

}  // namespace bmlab::fft
