#include "spiral/quadrature.hpp"

#include "spiral/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace spiral {

namespace {

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double unit_error = 0.0;
    // max_depth 0: a single GK15 application on [-1, 1].
    const double unit = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0, 0.0, &unit_error);
    return {a, b, half * unit, std::abs(half) * unit_error};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol, const QuadratureOptions& options) {
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("integration limits must be finite");
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }

    std::priority_queue<Panel> queue;
    const std::size_t initial = std::max<std::size_t>(1, options.initial_panels);
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i < initial; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(initial);
        const double hi = i + 1 == initial ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(initial);
        Panel p = evaluate_panel(f, lo, hi);
        total += p.value;
        error += p.error;
        queue.push(p);
    }

    while (error > tol && queue.size() < options.max_panels) {
        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) break; // interval exhausted at double resolution
        queue.pop();
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }

    // Re-sum from the panels so running-update cancellation does not leak into the result.
    total = 0.0;
    error = 0.0;
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    for (const Panel& p : panels) {
        total += p.value;
        error += p.error;
    }
    result.value = total;
    result.error = error;
    result.panels = panels.size();
    result.converged = error <= tol;
    return result;
}

} // namespace spiral
