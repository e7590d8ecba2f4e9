#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bmlab::lat {

// Row-major cube indexing: site (j_0,...,j_{d-1}) with 0 <= j_i < n maps to
// j_0*n^{d-1} + ... + j_{d-1}.
inline std::size_t cube_size(int d, int n) {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

inline std::size_t flatten(const std::vector<int>& j, int n) {
    std::size_t idx = 0;
    for (int v : j) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
    return idx;
}

inline void unflatten(std::size_t idx, int d, int n, std::vector<int>& j) {
    j.resize(d);
    for (int i = d - 1; i >= 0; --i) {
        j[i] = static_cast<int>(idx % static_cast<std::size_t>(n));
        idx /= static_cast<std::size_t>(n);
    }
}

// Odometer increment over {0..n-1}^d; returns false after the last site.
inline bool advance(std::vector<int>& j, int n) {
    for (int i = static_cast<int>(j.size()) - 1; i >= 0; --i) {
        if (++j[i] < n) return true;
        j[i] = 0;
    }
    return false;
}

// Half-width of the window B_N = {j : |j|_inf <= N/2}: floor(N/2).
inline int window_halfwidth(int N) { return N / 2; }

// Points per axis in B_N: 2*floor(N/2) + 1.
inline int window_points(int N) { return 2 * (N / 2) + 1; }

}  // namespace bmlab::lat
