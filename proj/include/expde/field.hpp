// Periodic scalar field with synchronized physical samples and Fourier
// coefficients.
//
// Convention: Fourier-series coefficients on the torus,
//   hhat_k = (1/N) sum_x h(x) e^{-i kappa . x},   h(x) = sum_k hhat_k e^{+i kappa . x},
// so h = A sin(x) on [0, 2pi] has hhat_{+-1} = -+ i A/2 and s-norm A at every s.
// Representations sync lazily; a field is confined to one thread at a time.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "expde/fft.hpp"
#include "expde/grid.hpp"

namespace expde {

using Complex = std::complex<double>;

class SpectralField {
public:
    SpectralField() : SpectralField(zero(Grid{})) {}

    static SpectralField zero(const Grid& grid)
    {
        SpectralField f(grid);
        f.spectral_.assign(grid.size(), Complex{0.0, 0.0});
        f.has_spectral_ = true;
        return f;
    }

    static SpectralField from_physical(const Grid& grid, std::vector<double> samples)
    {
        if (samples.size() != grid.size())
            throw std::invalid_argument("SpectralField: sample count does not match grid");
        for (double v : samples)
            if (!std::isfinite(v)) throw std::invalid_argument("SpectralField: non-finite physical sample");
        SpectralField f(grid);
        f.physical_ = std::move(samples);
        f.has_physical_ = true;
        return f;
    }

    static SpectralField from_spectral(const Grid& grid, std::vector<Complex> coeffs)
    {
        if (coeffs.size() != grid.size())
            throw std::invalid_argument("SpectralField: coefficient count does not match grid");
        for (const Complex& c : coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::invalid_argument("SpectralField: non-finite spectral coefficient");
        SpectralField f(grid);
        f.spectral_ = std::move(coeffs);
        f.has_spectral_ = true;
        return f;
    }

    [[nodiscard]] const Grid& grid() const { return grid_; }

    [[nodiscard]] const std::vector<double>& physical() const
    {
        sync_physical();
        return physical_;
    }

    [[nodiscard]] const std::vector<Complex>& spectral() const
    {
        sync_spectral();
        return spectral_;
    }

    // Domain average; equals hhat_0 under the series convention.
    [[nodiscard]] double mean() const { return spectral()[0].real(); }

    [[nodiscard]] double max_abs_physical() const
    {
        double m = 0.0;
        for (double v : physical()) m = std::max(m, std::abs(v));
        return m;
    }

    // Spectral multiplication by -|kappa|^2.
    [[nodiscard]] SpectralField laplacian() const
    {
        const auto& c = spectral();
        std::vector<Complex> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) out[i] = -grid_.kappa_sq(i) * c[i];
        SpectralField f(grid_);
        f.spectral_ = std::move(out);
        f.has_spectral_ = true;
        return f;
    }

    // Zero every mode with an axis wavenumber above n/3 (2/3 rule).
    [[nodiscard]] SpectralField dealiased() const
    {
        const auto& c = spectral();
        std::vector<Complex> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            out[i] = grid_.in_dealias_band(i) ? c[i] : Complex{0.0, 0.0};
        SpectralField f(grid_);
        f.spectral_ = std::move(out);
        f.has_spectral_ = true;
        return f;
    }

    [[nodiscard]] SpectralField scaled(double c) const
    {
        const auto& s = spectral();
        std::vector<Complex> out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = c * s[i];
        return from_spectral(grid_, std::move(out));
    }

    [[nodiscard]] SpectralField operator+(const SpectralField& other) const
    {
        return combine(other, +1.0);
    }

    [[nodiscard]] SpectralField operator-(const SpectralField& other) const
    {
        return combine(other, -1.0);
    }

    [[nodiscard]] bool spectral_finite() const
    {
        for (const Complex& c : spectral())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }

private:
    explicit SpectralField(const Grid& grid) : grid_(grid) { grid_.validate(); }

    SpectralField combine(const SpectralField& other, double sign) const
    {
        if (!(grid_ == other.grid_)) throw std::invalid_argument("SpectralField: grid mismatch");
        const auto& a = spectral();
        const auto& b = other.spectral();
        std::vector<Complex> out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sign * b[i];
        SpectralField f(grid_);
        f.spectral_ = std::move(out);
        f.has_spectral_ = true;
        return f;
    }

    void sync_spectral() const
    {
        if (has_spectral_) return;
        std::vector<Complex> buf(physical_.begin(), physical_.end());
        if (grid_.dim == 1)
            fft::transform_pow2(buf, /*inverse=*/false);
        else
            fft::transform_pow2_2d(buf, static_cast<std::size_t>(grid_.n), /*inverse=*/false);
        const double inv_n = 1.0 / static_cast<double>(grid_.size());
        for (Complex& c : buf) c *= inv_n;
        spectral_ = std::move(buf);
        has_spectral_ = true;
    }

    void sync_physical() const
    {
        if (has_physical_) return;
        std::vector<Complex> buf = spectral_;
        if (grid_.dim == 1)
            fft::transform_pow2(buf, /*inverse=*/true);
        else
            fft::transform_pow2_2d(buf, static_cast<std::size_t>(grid_.n), /*inverse=*/true);
        physical_.resize(buf.size());
        // Hermitian input: imaginary residue is round-off only.
        for (std::size_t i = 0; i < buf.size(); ++i) physical_[i] = buf[i].real();
        has_physical_ = true;
    }

    Grid grid_;
    mutable std::vector<double> physical_;
    mutable std::vector<Complex> spectral_;
    mutable bool has_physical_ = false;
    mutable bool has_spectral_ = false;
};

} // namespace expde
