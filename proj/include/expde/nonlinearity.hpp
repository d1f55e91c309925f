// Right-hand side Delta e^{-Delta h}, evaluated two independent ways:
// the direct exponential in physical space, and the truncated Taylor form
// -Delta^2 h + Delta sum_{j=2}^{J} (-Delta h)^j / j!. Each path is the
// other's oracle; the difference is controlled by the series tail bound
// ||h||_6 sum_{j>J} j^4/j! ||h||_2^{j-1} plus measured aliasing slack.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "expde/field.hpp"
#include "expde/norms.hpp"
#include "expde/series.hpp"

namespace expde {

// exp underflow/overflow sentinel: sup(-Delta h) beyond this is a blow-up signal.
inline constexpr double kBlowupExponent = 700.0;

enum class RhsMethod { direct, taylor };

struct RhsEvaluation {
    SpectralField rhs;
    RhsMethod method = RhsMethod::direct;
    int taylor_terms = 0;          // 0 for direct
    double truncation_bound = 0.0; // 0 for direct
    bool blowup = false;
    double sup_neg_laplacian = 0.0;
};

[[nodiscard]] inline double sup_neg_laplacian(const SpectralField& h)
{
    double m = 0.0;
    for (double v : h.laplacian().physical()) m = std::max(m, -v);
    return m;
}

// u = Delta h spectrally, e^{-u} pointwise, Delta of the result spectrally.
[[nodiscard]] inline RhsEvaluation rhs_direct(const SpectralField& h, bool dealias = true)
{
    RhsEvaluation out;
    out.method = RhsMethod::direct;

    SpectralField lap = h.laplacian();
    if (dealias) lap = lap.dealiased();
    const auto& u = lap.physical();
    double sup_neg = 0.0;
    for (double v : u) sup_neg = std::max(sup_neg, -v);
    out.sup_neg_laplacian = sup_neg;
    if (sup_neg > kBlowupExponent) {
        out.blowup = true;
        out.rhs = SpectralField::zero(h.grid());
        return out;
    }

    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::exp(-u[i]);
    SpectralField rhs = SpectralField::from_physical(h.grid(), std::move(w)).laplacian();
    out.rhs = dealias ? rhs.dealiased() : std::move(rhs);
    return out;
}

// Taylor truncation: Delta applied to v + sum_{j=2}^{J} v^j/j! with v = -Delta h
// (the j=1 term carries the -Delta^2 h linearization; J=1 returns it alone).
[[nodiscard]] inline RhsEvaluation rhs_taylor(const SpectralField& h, int order, bool dealias = true)
{
    if (order < 1) throw std::invalid_argument("rhs_taylor: order must be >= 1");
    RhsEvaluation out;
    out.method = RhsMethod::taylor;
    out.taylor_terms = order;

    SpectralField lap = h.laplacian();
    if (dealias) lap = lap.dealiased();
    const auto& u = lap.physical();
    double sup_neg = 0.0;
    for (double v : u) sup_neg = std::max(sup_neg, -v);
    out.sup_neg_laplacian = sup_neg;

    // Horner over the truncated exponential remainder, evaluated pointwise.
    std::vector<double> poly(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = -u[i];
        double p = 0.0;
        for (int j = order; j >= 2; --j) p = (p + 1.0 / std::tgamma(j + 1.0)) * v;
        poly[i] = (p + 1.0) * v;  // v + sum_{j=2}^{J} v^j/j!
    }
    SpectralField rhs = SpectralField::from_physical(h.grid(), std::move(poly)).laplacian();
    out.rhs = dealias ? rhs.dealiased() : std::move(rhs);

    const double y = s_norm(h, 2.0);
    out.truncation_bound = (y == 0.0) ? 0.0 : s_norm(h, 6.0) * series::series_tail(2.0, y, order + 1);
    return out;
}

// Default Taylor order matching the Lyapunov tail structure.
[[nodiscard]] inline int default_taylor_order(double h0_norm2, double eps = 1e-12)
{
    return series::truncation_order(4.0, h0_norm2, eps);
}

struct ConvolutionBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

namespace detail {

// Dense lattice function on integer wavenumbers, per-axis range [lo, hi].
struct Lattice {
    int dim = 1;
    int lo = 0;
    int hi = 0;
    std::vector<Complex> v;

    [[nodiscard]] int extent() const { return hi - lo + 1; }
    [[nodiscard]] Complex& at(int kx) { return v[static_cast<std::size_t>(kx - lo)]; }
    [[nodiscard]] Complex& at(int kx, int ky)
    {
        return v[static_cast<std::size_t>(ky - lo) * extent() + static_cast<std::size_t>(kx - lo)];
    }
};

inline Lattice convolve(const Lattice& a, const Lattice& b)
{
    Lattice c;
    c.dim = a.dim;
    c.lo = a.lo + b.lo;
    c.hi = a.hi + b.hi;
    if (a.dim == 1) {
        c.v.assign(static_cast<std::size_t>(c.extent()), Complex{});
        for (int i = a.lo; i <= a.hi; ++i)
            for (int j = b.lo; j <= b.hi; ++j)
                c.v[static_cast<std::size_t>(i + j - c.lo)] +=
                    a.v[static_cast<std::size_t>(i - a.lo)] * b.v[static_cast<std::size_t>(j - b.lo)];
        return c;
    }
    c.v.assign(static_cast<std::size_t>(c.extent()) * c.extent(), Complex{});
    const auto av = [&](int x, int y) {
        return a.v[static_cast<std::size_t>(y - a.lo) * a.extent() + static_cast<std::size_t>(x - a.lo)];
    };
    const auto bv = [&](int x, int y) {
        return b.v[static_cast<std::size_t>(y - b.lo) * b.extent() + static_cast<std::size_t>(x - b.lo)];
    };
    for (int iy = a.lo; iy <= a.hi; ++iy)
        for (int ix = a.lo; ix <= a.hi; ++ix) {
            const Complex va = av(ix, iy);
            if (va == Complex{}) continue;
            for (int jy = b.lo; jy <= b.hi; ++jy)
                for (int jx = b.lo; jx <= b.hi; ++jx)
                    c.v[static_cast<std::size_t>(iy + jy - c.lo) * c.extent() +
                        static_cast<std::size_t>(ix + jx - c.lo)] += va * bv(jx, jy);
        }
    return c;
}

} // namespace detail

// Both sides of the discrete Young-type bound
//   sum_k |kappa|^s |(|.|^2 hhat)^{*j}(k)| <= j^s ||h||_{s+2} ||h||_2^{j-1},
// with the j-fold convolution computed exactly on the expanded integer lattice.
[[nodiscard]] inline ConvolutionBound convolution_bound_check(const SpectralField& h, double s, int j)
{
    if (j < 1) throw std::invalid_argument("convolution_bound_check: j must be >= 1");
    const Grid& g = h.grid();
    if ((g.dim == 1 && g.n > 64) || (g.dim == 2 && g.n > 32))
        throw std::invalid_argument("convolution_bound_check: grid too large for exact convolution");

    detail::Lattice a;
    a.dim = g.dim;
    a.lo = -g.n / 2;
    a.hi = g.n / 2 - 1;
    const auto& c = h.spectral();
    if (g.dim == 1) {
        a.v.assign(static_cast<std::size_t>(a.extent()), Complex{});
        for (int i = 0; i < g.n; ++i) {
            const int k = g.axis_wavenumber(i);
            a.at(k) = g.kappa_sq(static_cast<std::size_t>(i)) * c[static_cast<std::size_t>(i)];
        }
    } else {
        a.v.assign(static_cast<std::size_t>(a.extent()) * a.extent(), Complex{});
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t flat = static_cast<std::size_t>(iy) * g.n + ix;
                a.at(g.axis_wavenumber(ix), g.axis_wavenumber(iy)) = g.kappa_sq(flat) * c[flat];
            }
    }

    detail::Lattice conv = a;
    for (int m = 1; m < j; ++m) conv = detail::convolve(conv, a);

    const double scale = g.scale();
    CompensatedSum lhs;
    if (g.dim == 1) {
        for (int k = conv.lo; k <= conv.hi; ++k) {
            const double ka = scale * std::abs(k);
            if (ka == 0.0) continue;
            const double mag = std::abs(conv.v[static_cast<std::size_t>(k - conv.lo)]);
            if (mag > 0.0) lhs.add(std::pow(ka, s) * mag);
        }
    } else {
        for (int ky = conv.lo; ky <= conv.hi; ++ky)
            for (int kx = conv.lo; kx <= conv.hi; ++kx) {
                const double ka = scale * std::hypot(static_cast<double>(kx), static_cast<double>(ky));
                if (ka == 0.0) continue;
                const double mag = std::abs(conv.v[static_cast<std::size_t>(ky - conv.lo) * conv.extent() +
                                                   static_cast<std::size_t>(kx - conv.lo)]);
                if (mag > 0.0) lhs.add(std::pow(ka, s) * mag);
            }
    }

    ConvolutionBound out;
    out.lhs = lhs.value();
    out.rhs = std::pow(static_cast<double>(j), s) * s_norm(h, s + 2.0) *
              std::pow(s_norm(h, 2.0), j - 1);
    return out;
}

} // namespace expde
