#pragma once

#include <cstddef>
#include <functional>

namespace spiral {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;     ///< summed per-panel |Kronrod - Gauss| estimate
    std::size_t panels = 0;
    bool converged = false;
};

struct QuadratureOptions {
    std::size_t initial_panels = 8;
    std::size_t max_panels = 200000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b] with
/// absolute error target `tol`. The worst panel is bisected until the summed
/// error estimate drops below tol or the panel budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol, const QuadratureOptions& options = {});

} // namespace spiral
