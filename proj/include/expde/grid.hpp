// Periodic grid description: dimension, points per axis, period length.
//
// Wavenumbers are integers k in [-n/2, n/2) per axis; the scaled (physical)
// wavenumber is kappa = 2 pi k / length. With length = 2 pi the two coincide.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "expde/fft.hpp"

namespace expde {

struct Grid {
    int dim = 1;        // 1 or 2
    int n = 256;        // points per axis, power of two, >= 8
    double length = 2.0 * std::numbers::pi;

    Grid() = default;
    Grid(int dim_, int n_, double length_ = 2.0 * std::numbers::pi)
        : dim(dim_), n(n_), length(length_)
    {
        validate();
    }

    void validate() const
    {
        if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
        if (n < 8 || !fft::is_pow2(static_cast<std::size_t>(n)))
            throw std::invalid_argument("Grid: n must be a power of two >= 8");
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("Grid: length must be positive and finite");
    }

    [[nodiscard]] std::size_t size() const
    {
        return dim == 1 ? static_cast<std::size_t>(n)
                        : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }

    // Integer wavenumber for a 1D axis index.
    [[nodiscard]] int axis_wavenumber(int idx) const { return idx < n / 2 ? idx : idx - n; }

    // Physical coordinate of an axis index.
    [[nodiscard]] double axis_coord(int idx) const
    {
        return length * static_cast<double>(idx) / static_cast<double>(n);
    }

    [[nodiscard]] double scale() const { return 2.0 * std::numbers::pi / length; }

    // |kappa|^2 at flat index i (row-major in 2D).
    [[nodiscard]] double kappa_sq(std::size_t i) const
    {
        const double s = scale();
        if (dim == 1) {
            const double k = s * axis_wavenumber(static_cast<int>(i));
            return k * k;
        }
        const int iy = static_cast<int>(i) / n;
        const int ix = static_cast<int>(i) % n;
        const double kx = s * axis_wavenumber(ix);
        const double ky = s * axis_wavenumber(iy);
        return kx * kx + ky * ky;
    }

    [[nodiscard]] double kappa_abs(std::size_t i) const { return std::sqrt(kappa_sq(i)); }

    // Largest |kappa| representable on the grid.
    [[nodiscard]] double kappa_max() const
    {
        const double axis = scale() * (n / 2);
        return dim == 1 ? axis : std::sqrt(2.0) * axis;
    }

    // True when every axis wavenumber satisfies |k| <= n/3 (2/3-rule band).
    [[nodiscard]] bool in_dealias_band(std::size_t i) const
    {
        const int cut = n / 3;
        if (dim == 1) return std::abs(axis_wavenumber(static_cast<int>(i))) <= cut;
        const int iy = static_cast<int>(i) / n;
        const int ix = static_cast<int>(i) % n;
        return std::abs(axis_wavenumber(ix)) <= cut && std::abs(axis_wavenumber(iy)) <= cut;
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

} // namespace expde
