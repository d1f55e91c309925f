#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "expde/nonlinearity.hpp"

using namespace expde;

namespace {

SpectralField sine_field(const Grid& g, double A)
{
    std::vector<double> h(g.size());
    for (int i = 0; i < g.n; ++i) h[static_cast<std::size_t>(i)] = A * std::sin(g.axis_coord(i));
    return SpectralField::from_physical(g, std::move(h));
}

SpectralField random_small_field(const Grid& g, unsigned seed, double target_s2)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.3, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> c(g.size(), Complex{});
    const int kmax = std::min(8, g.n / 4);
    for (int k = 1; k <= kmax; ++k) {
        const Complex v = unif(rng) / std::pow(static_cast<double>(k), 2.5) *
                          std::polar(0.5, phase(rng));
        c[static_cast<std::size_t>(k)] = v;
        c[static_cast<std::size_t>(g.n - k)] = std::conj(v);
    }
    auto f = SpectralField::from_spectral(g, std::move(c));
    return f.scaled(target_s2 / s_norm(f, 2.0));
}

} // namespace

TEST_CASE("rhs of zero and constant fields vanishes")
{
    const Grid g{1, 64};
    const auto r0 = rhs_direct(SpectralField::zero(g));
    CHECK_FALSE(r0.blowup);
    CHECK(s_norm(r0.rhs, 0.0) == 0.0);
    CHECK(r0.rhs.mean() == 0.0);

    std::vector<double> c(g.size(), 1.7);
    const auto rc = rhs_direct(SpectralField::from_physical(g, std::move(c)));
    CHECK(s_norm(rc.rhs, 0.0) < 1e-13);
    CHECK(std::abs(rc.rhs.mean()) < 1e-15);

    const auto t0 = rhs_taylor(SpectralField::zero(g), 8);
    CHECK(s_norm(t0.rhs, 0.0) == 0.0);
    CHECK(t0.truncation_bound == 0.0);
}

TEST_CASE("rhs has zero mean (it is a full Laplacian)")
{
    const Grid g{1, 128};
    const auto h = sine_field(g, 0.1);
    const auto r = rhs_direct(h);
    CHECK(std::abs(r.rhs.mean()) <= 1e-13);
    const auto t = rhs_taylor(h, 10);
    CHECK(std::abs(t.rhs.mean()) <= 1e-13);
}

TEST_CASE("taylor J=1 is exactly the negative bilaplacian")
{
    const Grid g{1, 64};
    const auto h = random_small_field(g, 4, 0.08);
    const auto t1 = rhs_taylor(h, 1, /*dealias=*/false);
    const auto& got = t1.rhs.spectral();
    const auto& hc = h.spectral();
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double k2 = g.kappa_sq(i);
        const Complex want = -k2 * k2 * hc[i];
        CHECK(std::abs(got[i] - want) <= 1e-12 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("the two evaluators are mutual oracles")
{
    const Grid g{1, 128};
    const auto h = sine_field(g, 0.1);
    const int J = default_taylor_order(s_norm(h, 2.0), 1e-12);
    CHECK(J == 11);
    const auto d = rhs_direct(h);
    const auto t = rhs_taylor(h, J);
    // mode-wise, the two paths differ only by the pointwise Taylor tail plus
    // transform round-off (~1e-15 per mode)
    const auto diff_field = d.rhs - t.rhs;
    const auto& dc = diff_field.spectral();
    double worst = 0.0;
    for (const auto& v : dc) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-13);
    // the |k|^2-weighted sum amplifies that round-off to ~1e-9 at n=128
    const double diff = s_norm(diff_field, 2.0);
    CHECK(diff <= t.truncation_bound + 2e-9);
}

TEST_CASE("blow-up signal when the exponent overflows")
{
    const Grid g{1, 64};
    const auto h = sine_field(g, 800.0);  // sup(-Delta h) = 800 > 700
    const auto r = rhs_direct(h);
    CHECK(r.blowup);
    CHECK(r.sup_neg_laplacian > kBlowupExponent);
    CHECK(sup_neg_laplacian(h) > kBlowupExponent);
}

TEST_CASE("linearization limit: nonlinear remainder is quadratically small")
{
    const Grid g{1, 128};
    const auto base = sine_field(g, 1.0);
    double prev_ratio = -1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto h = base.scaled(eps);
        const auto r = rhs_direct(h, /*dealias=*/false);
        const auto lin = rhs_taylor(h, 1, /*dealias=*/false);  // -Delta^2 h
        const double remainder = s_norm(r.rhs - lin.rhs, 2.0) / (eps * eps);
        CHECK(remainder > 0.0);
        CHECK(remainder < 10.0);  // bounded as eps -> 0
        if (prev_ratio > 0.0) CHECK(remainder < 2.0 * prev_ratio);
        prev_ratio = remainder;
    }
}

TEST_CASE("convolution bound: single mode saturates at j=1")
{
    const Grid g{1, 64};
    std::vector<Complex> coeffs(g.size(), Complex{});
    coeffs[1] = Complex{0.0, -0.225};
    coeffs[63] = Complex{0.0, 0.225};
    const auto h = SpectralField::from_spectral(g, std::move(coeffs));
    const auto c = convolution_bound_check(h, 4.0, 1);
    CHECK_THAT(c.lhs, Catch::Matchers::WithinRel(0.45, 1e-12));
    CHECK_THAT(c.rhs, Catch::Matchers::WithinRel(0.45, 1e-12));
}

TEST_CASE("convolution bound: zero field gives (0, 0)")
{
    const auto c = convolution_bound_check(SpectralField::zero(Grid{1, 32}), 4.0, 2);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
}

TEST_CASE("convolution bound holds on random small fields")
{
    const Grid g{1, 32};
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto h = random_small_field(g, seed, 0.09);
        for (int j : {1, 2, 3}) {
            for (double s : {0.0, 2.0, 4.0}) {
                const auto c = convolution_bound_check(h, s, j);
                CHECK(c.lhs <= c.rhs * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("convolution bound in 2D")
{
    const Grid g{2, 16};
    std::vector<double> h(g.size());
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            h[static_cast<std::size_t>(iy) * g.n + ix] =
                0.05 * std::sin(g.axis_coord(ix)) + 0.03 * std::cos(g.axis_coord(iy));
    const auto f = SpectralField::from_physical(g, std::move(h));
    const auto c = convolution_bound_check(f, 4.0, 2);
    CHECK(c.lhs <= c.rhs * (1.0 + 1e-12));
}

TEST_CASE("convolution cost guard refuses large grids")
{
    CHECK_THROWS_AS(convolution_bound_check(SpectralField::zero(Grid{1, 128}), 4.0, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(convolution_bound_check(SpectralField::zero(Grid{2, 64}), 4.0, 2),
                    std::invalid_argument);
}

TEST_CASE("taylor order guard")
{
    CHECK_THROWS_AS(rhs_taylor(SpectralField::zero(Grid{1, 32}), 0), std::invalid_argument);
}
