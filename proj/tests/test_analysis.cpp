#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "expde/analysis.hpp"
#include "expde/time_integration.hpp"

using namespace expde;

namespace {

// Synthetic log with named columns; values supplied per row.
TimeSeriesLog make_log(const std::vector<std::string>& columns,
                       const std::vector<double>& ts,
                       const std::function<std::vector<double>(double)>& row_fn)
{
    TimeSeriesLog log;
    log.columns = columns;
    for (double t : ts) {
        TimeSeriesLog::Row row;
        row.t = t;
        row.dt = ts.size() > 1 ? ts[1] - ts[0] : 0.0;
        row.values = row_fn(t);
        log.rows.push_back(std::move(row));
    }
    return log;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

SpectralField geometric_spectrum_field(const Grid& g, double nu, double peak = 1.0)
{
    std::vector<Complex> c(g.size(), Complex{});
    for (int k = 1; k < g.n / 2; ++k) {
        const Complex v = peak * std::exp(-nu * k) * Complex{1.0, 0.0};
        c[static_cast<std::size_t>(k)] = 0.5 * v;
        c[static_cast<std::size_t>(g.n - k)] = 0.5 * v;
    }
    return SpectralField::from_spectral(g, std::move(c));
}

} // namespace

TEST_CASE("lyapunov monitor on synthetic logs")
{
    // zero run
    const auto zero = make_log({"snorm_2", "snorm_6"}, linspace(0, 1, 11),
                               [](double) { return std::vector<double>{0.0, 0.0}; });
    CHECK(lyapunov_monitor(zero, 0.05) == 0.0);

    // exact dissipative pair: s2(t) = e^{-t}, s6 = s2, sigma < 1 gives slack
    const auto ok = make_log({"snorm_2", "snorm_6"}, linspace(0, 2, 201), [](double t) {
        const double v = std::exp(-t);
        return std::vector<double>{v, v};
    });
    CHECK(lyapunov_monitor(ok, 0.5) <= 0.0);
    // sigma > 1 must flag a violation on the same data
    CHECK(lyapunov_monitor(ok, 1.5) > 0.0);
}

TEST_CASE("lyapunov monitor is stable under subsampling")
{
    const auto dense = make_log({"snorm_2", "snorm_6"}, linspace(0, 2, 401), [](double t) {
        const double v = std::exp(-t);
        return std::vector<double>{v, v};
    });
    TimeSeriesLog sparse;
    sparse.columns = dense.columns;
    for (std::size_t i = 0; i < dense.rows.size(); i += 2) sparse.rows.push_back(dense.rows[i]);
    const double a = lyapunov_monitor(dense, 0.9);
    const double b = lyapunov_monitor(sparse, 0.9);
    // integral quadrature error is O(dt^2); both are far below zero here
    CHECK(std::abs(a - b) < 1e-4);
}

TEST_CASE("dissipation integral is nondecreasing")
{
    const auto log = make_log({"snorm_2", "snorm_6"}, linspace(0, 3, 100), [](double t) {
        const double v = std::exp(-t);
        return std::vector<double>{v, 0.5 * v};
    });
    const auto I = trapezoid_integral(log, "snorm_6");
    for (std::size_t i = 1; i < I.size(); ++i) CHECK(I[i] >= I[i - 1]);
}

TEST_CASE("fsp decrease monitor")
{
    const auto mono = make_log({"fsp_0_2"}, linspace(0, 1, 50),
                               [](double t) { return std::vector<double>{std::exp(-2.0 * t)}; });
    CHECK(fsp_decrease_monitor(mono, 0.0, 2.0) == 0.0);

    const auto bump = make_log({"fsp_0_2"}, linspace(0, 1, 50), [](double t) {
        return std::vector<double>{std::exp(-t) * (1.0 + 0.2 * std::sin(6.0 * t))};
    });
    CHECK(fsp_decrease_monitor(bump, 0.0, 2.0) > 0.0);
}

TEST_CASE("fit_decay recovers its own models")
{
    const auto algebraic = make_log({"snorm_2"}, linspace(0.0, 20.0, 60), [](double t) {
        return std::vector<double>{std::pow(1.0 + t, -0.75)};
    });
    const auto fa = fit_decay(algebraic, 2.0, 0.0, 20.0);
    REQUIRE(fa.valid);
    CHECK(fa.model == DecayModel::algebraic);
    CHECK_THAT(fa.rate, Catch::Matchers::WithinAbs(0.75, 0.01));

    const auto exponential = make_log({"snorm_2"}, linspace(0.0, 10.0, 60), [](double t) {
        return std::vector<double>{3.0 * std::exp(-t)};
    });
    const auto fe = fit_decay(exponential, 2.0, 0.0, 10.0);
    REQUIRE(fe.valid);
    CHECK(fe.model == DecayModel::exponential);
    CHECK_THAT(fe.rate, Catch::Matchers::WithinAbs(1.0, 0.01));
}

TEST_CASE("fit_decay flags degenerate windows")
{
    const auto small = make_log({"snorm_2"}, linspace(0, 1, 5),
                                [](double t) { return std::vector<double>{std::exp(-t)}; });
    CHECK_FALSE(fit_decay(small, 2.0, 0.0, 1.0).valid);

    const auto with_zero = make_log({"snorm_2"}, linspace(0, 1, 20), [](double t) {
        return std::vector<double>{t < 0.5 ? std::exp(-t) : 0.0};
    });
    CHECK_FALSE(fit_decay(with_zero, 2.0, 0.0, 1.0).valid);
}

TEST_CASE("estimate_radius recovers a synthetic geometric spectrum")
{
    const Grid g{1, 128};
    const auto f = geometric_spectrum_field(g, 0.7);
    const auto est = estimate_radius(f, 1e-14);
    CHECK_FALSE(est.degenerate);
    CHECK_THAT(est.nu, Catch::Matchers::WithinAbs(0.7, 0.02));
}

TEST_CASE("estimate_radius degenerates on a single-mode field")
{
    const Grid g{1, 64};
    std::vector<double> h(g.size());
    for (int i = 0; i < g.n; ++i) h[static_cast<std::size_t>(i)] = 0.3 * std::sin(g.axis_coord(i));
    const auto est = estimate_radius(SpectralField::from_physical(g, std::move(h)));
    CHECK(est.degenerate);
    CHECK(est.nu == 0.0);
    CHECK(est.modes_used < 3);

    const auto zero = estimate_radius(SpectralField::zero(g));
    CHECK(zero.degenerate);
}

TEST_CASE("estimate_radius is invariant under field scaling")
{
    const Grid g{1, 128};
    const auto f = geometric_spectrum_field(g, 0.55);
    const auto base = estimate_radius(f);
    for (double c : {0.5, 2.0}) {
        const auto scaled = estimate_radius(f.scaled(c));
        CHECK_THAT(scaled.nu, Catch::Matchers::WithinRel(base.nu, 1e-6));
    }
}

TEST_CASE("radius model fit recovers generating parameters")
{
    const double a = 0.8, c = std::pow(0.3, 4);
    std::vector<double> ts, nus;
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.05 * i;
        ts.push_back(t);
        nus.push_back(std::pow(c + a * t, 0.25));
    }
    const auto fit = fit_radius_model(ts, nus);
    CHECK_THAT(fit.a, Catch::Matchers::WithinRel(a, 1e-10));
    CHECK_THAT(fit.c, Catch::Matchers::WithinAbs(c, 1e-10));
}

TEST_CASE("radius estimate grows along a short decaying run")
{
    // gain of analyticity on the measured spectrum after the filling transient
    const Grid g{1, 128};
    std::vector<double> h(g.size());
    for (int i = 0; i < g.n; ++i) h[static_cast<std::size_t>(i)] = 0.1 * std::sin(g.axis_coord(i));
    SchemeConfig cfg;
    cfg.adapt = false;
    cfg.dt_init = 1e-3;
    const auto res = integrate(SpectralField::from_physical(g, std::move(h)), 1.0, cfg);
    REQUIRE(res.status == StepStatus::ok);
    const auto radius = res.log.column("radius");
    const auto times = res.log.times();
    double nu_02 = 0.0, nu_10 = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= 0.2) nu_02 = radius[i];
        nu_10 = radius[i];
    }
    CHECK(nu_02 > 0.0);
    CHECK(nu_10 > nu_02);
}

TEST_CASE("column helpers format indices compactly")
{
    CHECK(snorm_column(2.0) == "snorm_2");
    CHECK(snorm_column(-1.0) == "snorm_-1");
    CHECK(fsp_column(0.0, 2.0) == "fsp_0_2");
    CHECK(fsp_column(1.5, 1.0) == "fsp_1.5_1");
    CHECK(analytic_column(2.0, 0.5) == "anorm_2_0.5");
}
