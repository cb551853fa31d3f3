// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>

namespace liftfem {

struct EocFit
{
    double slope = 0.0;
    double residual = 0.0; // max |log e_i - fit(log h_i)|
};

/// Least-squares slope of log(error) against log(h). Needs at least three
/// points, strictly decreasing h and strictly positive errors; throws
/// std::invalid_argument otherwise (truncate series that hit the noise floor).
EocFit eoc_fit(std::span<const double> h, std::span<const double> error);

/// Pairwise order over the last interval of the series.
double eoc_last(std::span<const double> h, std::span<const double> error);

} // namespace liftfem
