#pragma once

// Iterative radix-2 FFT for power-of-two lengths. Epoch lengths in this
// library are powers of two by contract, so no mixed-radix support is needed.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "eegloop/core.hpp"

namespace eegloop {

inline constexpr bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place forward DFT, no normalization: X[k] = sum_n x[n] e^{-2*pi*i*k*n/N}.
inline void fft_in_place(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw InputError("fft: length must be a power of two");
    if (n < 2) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w =
                    std::polar(1.0, ang * static_cast<double>(k));
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

inline std::vector<std::complex<double>> fft_real(std::span<const double> x) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    fft_in_place(a);
    return a;
}

}  // namespace eegloop
