// SPDX-License-Identifier: Apache-2.0
#include <liftfem/eoc.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace liftfem {

EocFit eoc_fit(std::span<const double> h, std::span<const double> error)
{
    const std::size_t n = h.size();
    if (n != error.size() || n < 3) {
        throw std::invalid_argument("eoc_fit needs at least three (h, error) pairs");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(error[i] > 0.0) || !std::isfinite(error[i])) {
            throw std::invalid_argument(
                "eoc_fit: non-positive error at position " + std::to_string(i) +
                " (below the quadrature floor?)");
        }
        if (i > 0 && !(h[i] < h[i - 1])) {
            throw std::invalid_argument("eoc_fit: mesh sizes must be strictly decreasing");
        }
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(h[i]);
        my += std::log(error[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(h[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(error[i]) - my);
    }
    EocFit fit;
    fit.slope = sxy / sxx;
    for (std::size_t i = 0; i < n; ++i) {
        const double predicted = my + fit.slope * (std::log(h[i]) - mx);
        fit.residual = std::max(fit.residual, std::abs(std::log(error[i]) - predicted));
    }
    return fit;
}

double eoc_last(std::span<const double> h, std::span<const double> error)
{
    const std::size_t n = h.size();
    if (n < 2 || error.size() != n) {
        throw std::invalid_argument("eoc_last needs at least two points");
    }
    return std::log(error[n - 1] / error[n - 2]) / std::log(h[n - 1] / h[n - 2]);
}

} // namespace liftfem
