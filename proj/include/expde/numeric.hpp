// Small numeric helpers shared across modules.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace expde {

// Kahan-Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};

// Ordinary least squares for y = intercept + slope * x.
[[nodiscard]] inline LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching samples");
    const double n = static_cast<double>(x.size());
    CompensatedSum sx, sy, sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const double denom = n * sxx.value() - sx.value() * sx.value();
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy.value() - sx.value() * sy.value()) / denom;
    f.intercept = (sy.value() - f.slope * sx.value()) / n;
    CompensatedSum rss;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss.add(r * r);
    }
    f.rms_residual = std::sqrt(rss.value() / n);
    return f;
}

} // namespace expde
