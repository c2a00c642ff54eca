#pragma once

#include <span>
#include <vector>

namespace nslab {

/// Composite trapezoid rule over (possibly non-uniform) sample times.
double trapezoid(std::span<const double> t, std::span<const double> y);

/// Running trapezoid integral: out[i] = integral from t[0] to t[i].
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y);

/// Running trapezoid integral with the endpoint derivative correction
/// h^2 (y'_a - y'_b) / 12 on every panel; fourth order for smooth y.
std::vector<double> cumulative_hermite(std::span<const double> t, std::span<const double> y,
                                       std::span<const double> dy);

}  // namespace nslab
