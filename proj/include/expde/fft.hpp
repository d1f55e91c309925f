// Radix-2 complex FFT for power-of-two grids.
//
// Unnormalized transforms: forward applies e^{-2pi i jk/n}, inverse applies
// e^{+2pi i jk/n}. Callers own the normalization convention. Twiddle tables
// are cached per size and shared read-only across threads.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace expde::fft {

using Complex = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// Half-length table of e^{-2pi i j/n}, j = 0 .. n/2-1.
inline std::shared_ptr<const std::vector<Complex>> twiddles(std::size_t n)
{
    static std::mutex mtx;
    static std::unordered_map<std::size_t, std::shared_ptr<const std::vector<Complex>>> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<std::vector<Complex>>(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        (*table)[j] = std::polar(1.0, angle);
    }
    cache.emplace(n, table);
    return table;
}

inline void bit_reverse_permute(std::span<Complex> data)
{
    const std::size_t n = data.size();
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
}

} // namespace detail

// In-place transform of length n = 2^m. inverse=false: e^{-i..}; true: e^{+i..}.
inline void transform_pow2(std::span<Complex> data, bool inverse)
{
    const std::size_t n = data.size();
    if (n == 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    const auto tw = detail::twiddles(n);
    detail::bit_reverse_permute(data);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                Complex w = (*tw)[j * stride];
                if (inverse) w = std::conj(w);
                const Complex u = data[start + j];
                const Complex v = data[start + j + len / 2] * w;
                data[start + j] = u + v;
                data[start + j + len / 2] = u - v;
            }
        }
    }
}

// 2D transform of an n-by-n row-major array (rows, then strided columns).
inline void transform_pow2_2d(std::span<Complex> data, std::size_t n, bool inverse)
{
    if (data.size() != n * n) throw std::invalid_argument("fft: 2d size mismatch");
    for (std::size_t row = 0; row < n; ++row)
        transform_pow2(data.subspan(row * n, n), inverse);
    std::vector<Complex> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = data[r * n + c];
        transform_pow2(col, inverse);
        for (std::size_t r = 0; r < n; ++r) data[r * n + c] = col[r];
    }
}

} // namespace expde::fft
