#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bmlab/errors.hpp"

namespace bmlab::stats {

// Streaming central moments to order 4.  Merging is exact (Pebay update
// rules), so partial accumulators from parallel workers combine to the same
// moments as a single pass, independent of data ordering up to roundoff.
class ReplicaAccumulator {
public:
    void push(double x) {
        ReplicaAccumulator single;
        single.n_ = 1;
        single.mean_ = x;
        merge(single);
    }

    void merge(const ReplicaAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double delta = o.mean_ - mean_;
        const double d2 = delta * delta;
        m4_ = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
              6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
              4.0 * delta * (na * o.m3_ - nb * m3_) / n;
        m3_ = m3_ + o.m3_ + delta * d2 * na * nb * (na - nb) / (n * n) +
              3.0 * delta * (na * o.m2_ - nb * m2_) / n;
        m2_ = m2_ + o.m2_ + d2 * na * nb / n;
        mean_ = mean_ + delta * nb / n;
        n_ += o.n_;
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    // unbiased sample variance
    double variance() const {
        if (n_ < 2) return 0.0;
        return m2_ / static_cast<double>(n_ - 1);
    }
    double variance_population() const {
        return n_ == 0 ? 0.0 : m2_ / static_cast<double>(n_);
    }
    double central_moment2() const { return variance_population(); }
    double central_moment3() const {
        return n_ == 0 ? 0.0 : m3_ / static_cast<double>(n_);
    }
    double central_moment4() const {
        return n_ == 0 ? 0.0 : m4_ / static_cast<double>(n_);
    }
    double kurtosis() const {
        const double v = variance_population();
        return v > 0.0 ? central_moment4() / (v * v) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

// Streaming mean vector + comoment matrix for k-dimensional statistics.
class VectorAccumulator {
public:
    VectorAccumulator() = default;
    explicit VectorAccumulator(std::size_t k)
        : k_(k), mean_(k, 0.0), comoment_(k * k, 0.0) {}

    void push(std::span<const double> x) {
        if (x.size() != k_) throw validation_error("VectorAccumulator: arity mismatch");
        VectorAccumulator single(k_);
        single.n_ = 1;
        for (std::size_t i = 0; i < k_; ++i) single.mean_[i] = x[i];
        merge(single);
    }

    void merge(const VectorAccumulator& o) {
        if (o.n_ == 0) return;
        if (k_ == 0) *this = VectorAccumulator(o.k_);
        if (o.k_ != k_) throw validation_error("VectorAccumulator: arity mismatch");
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double n = na + nb;
        std::vector<double> delta(k_);
        for (std::size_t i = 0; i < k_; ++i) delta[i] = o.mean_[i] - mean_[i];
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j)
                comoment_[i * k_ + j] +=
                    o.comoment_[i * k_ + j] + delta[i] * delta[j] * na * nb / n;
        for (std::size_t i = 0; i < k_; ++i) mean_[i] += delta[i] * nb / n;
        n_ += o.n_;
    }

    std::size_t count() const { return n_; }
    std::size_t arity() const { return k_; }
    double mean(std::size_t i) const { return mean_[i]; }
    // unbiased sample covariance
    double covariance(std::size_t i, std::size_t j) const {
        if (n_ < 2) return 0.0;
        return comoment_[i * k_ + j] / static_cast<double>(n_ - 1);
    }

private:
    std::size_t k_ = 0;
    std::size_t n_ = 0;
    std::vector<double> mean_;
    std::vector<double> comoment_;
};

}  // namespace bmlab::stats
