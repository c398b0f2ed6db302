#include "spiral/profiles.hpp"

#include "spiral/errors.hpp"
#include "spiral/io.hpp"
#include "spiral/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace spiral {

/// Fritsch-Carlson monotone cubic Hermite interpolant.
class MonotoneTable {
public:
    MonotoneTable(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        std::vector<double> secant(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) secant[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
        slope_.assign(n, 0.0);
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const double h0 = x_[k] - x_[k - 1];
            const double h1 = x_[k + 1] - x_[k];
            if (secant[k - 1] * secant[k] > 0.0) slope_[k] = (h1 * secant[k - 1] + h0 * secant[k]) / (h0 + h1);
        }
        slope_[0] = end_slope(x_[1] - x_[0], n > 2 ? x_[2] - x_[1] : 0.0, secant[0], n > 2 ? secant[1] : secant[0]);
        slope_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], n > 2 ? x_[n - 2] - x_[n - 3] : 0.0, secant[n - 2],
                                  n > 2 ? secant[n - 3] : secant[n - 2]);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (secant[k] == 0.0) {
                slope_[k] = slope_[k + 1] = 0.0;
                continue;
            }
            const double alpha = slope_[k] / secant[k];
            const double beta = slope_[k + 1] / secant[k];
            const double radius = alpha * alpha + beta * beta;
            if (radius > 9.0) {
                const double tau = 3.0 / std::sqrt(radius);
                slope_[k] = tau * alpha * secant[k];
                slope_[k + 1] = tau * beta * secant[k];
            }
        }
    }

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    double min_value() const { return y_.back(); }
    std::size_t size() const { return x_.size(); }

    double operator()(double t) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        if (k + 1 >= x_.size()) return y_.back();
        const double h = x_[k + 1] - x_[k];
        const double s = (t - x_[k]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * slope_[k] +
               (-2 * s3 + 3 * s2) * y_[k + 1] + (s3 - s2) * h * slope_[k + 1];
    }

    /// First t with interpolated value below eps, by bisection on the monotone curve.
    double time_below(double eps) const {
        if (!(eps > y_.back())) throw RangeError("table never falls below the requested level");
        double lo = x_.front();
        double hi = x_.back();
        for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            ((*this)(mid) < eps ? hi : lo) = mid;
        }
        return hi;
    }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;

    // Three-point one-sided estimate, clipped so the end interval stays monotone.
    static double end_slope(double h0, double h1, double d0, double d1) {
        if (h1 == 0.0) return d0;
        const double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return d;
    }
};

namespace {

void require_finite_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) throw ParameterError(std::string(name) + " must be > 0");
}

std::string short_number(double v) { return format_double(v); }

} // namespace

DecayProfile::DecayProfile(ProfileFamily family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}

DecayProfile DecayProfile::exponential(double a) {
    require_finite_positive(a, "a");
    return DecayProfile(ProfileFamily::Exponential, a, 0.0);
}

DecayProfile DecayProfile::power_law(double p) {
    require_finite_positive(p, "p");
    return DecayProfile(ProfileFamily::PowerLaw, p, 0.0);
}

DecayProfile DecayProfile::stretched_exp(double beta, double c) {
    if (!std::isfinite(beta) || !(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must be in (0,1)");
    require_finite_positive(c, "c");
    return DecayProfile(ProfileFamily::StretchedExp, beta, c);
}

DecayProfile DecayProfile::user_table(std::vector<double> t, std::vector<double> phi, std::string source) {
    if (t.size() != phi.size()) throw ValidationError("table columns differ in length");
    if (t.size() < 2) throw ValidationError("table needs at least two samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(phi[i])) throw ValidationError("table contains non-finite values");
        if (!(phi[i] > 0.0 && phi[i] <= 1.0)) throw ValidationError("table phi must lie in (0,1]");
        if (i > 0 && !(t[i] > t[i - 1])) throw ValidationError("table t must be strictly increasing");
        if (i > 0 && !(phi[i] < phi[i - 1])) throw ValidationError("table phi must be strictly decreasing");
    }
    if (t.front() < 0.0) throw ValidationError("table t must start at a nonnegative value");
    DecayProfile profile(ProfileFamily::UserTable, 0.0, 0.0);
    profile.table_ = std::make_shared<const MonotoneTable>(std::move(t), std::move(phi));
    profile.table_source_ = std::move(source);
    return profile;
}

std::string DecayProfile::id() const {
    switch (family_) {
    case ProfileFamily::Exponential: return "exp:a=" + short_number(p1_);
    case ProfileFamily::PowerLaw: return "pow:p=" + short_number(p1_);
    case ProfileFamily::StretchedExp: return "sexp:beta=" + short_number(p1_) + ",c=" + short_number(p2_);
    case ProfileFamily::UserTable: return "table:" + table_source_;
    }
    return {};
}

void DecayProfile::check_t(double t) const {
    if (std::isnan(t) || t < 0.0) throw ParameterError("t must be >= 0");
    if (table_ && (t < table_->front() || t > table_->back())) {
        throw RangeError("t = " + short_number(t) + " outside table range [" + short_number(table_->front()) + ", " +
                         short_number(table_->back()) + "]");
    }
}

double DecayProfile::value(double t) const {
    check_t(t);
    switch (family_) {
    case ProfileFamily::Exponential: return std::exp(-p1_ * t);
    case ProfileFamily::PowerLaw: return std::pow(1.0 + t, -p1_);
    case ProfileFamily::StretchedExp: return std::exp(-p2_ * std::pow(t, p1_));
    case ProfileFamily::UserTable: return (*table_)(t);
    }
    return 0.0;
}

double DecayProfile::log_value(double t) const {
    check_t(t);
    switch (family_) {
    case ProfileFamily::Exponential: return -p1_ * t;
    case ProfileFamily::PowerLaw: return -p1_ * std::log1p(t);
    case ProfileFamily::StretchedExp: return -p2_ * std::pow(t, p1_);
    case ProfileFamily::UserTable: return std::log((*table_)(t));
    }
    return 0.0;
}

double DecayProfile::derivative(double t) const {
    check_t(t);
    if (family_ == ProfileFamily::UserTable) {
        // Central differences, one-sided at the table ends.
        const double h = 1e-6 * std::max(1.0, std::abs(t));
        const double lo = std::max(table_->front(), t - h);
        const double hi = std::min(table_->back(), t + h);
        return ((*table_)(hi) - (*table_)(lo)) / (hi - lo);
    }
    return log_derivative(t) * value(t);
}

double DecayProfile::log_derivative(double t) const {
    check_t(t);
    switch (family_) {
    case ProfileFamily::Exponential: return -p1_;
    case ProfileFamily::PowerLaw: return -p1_ / (1.0 + t);
    case ProfileFamily::StretchedExp:
        if (t == 0.0) return -std::numeric_limits<double>::infinity();
        return -p2_ * p1_ * std::pow(t, p1_ - 1.0);
    case ProfileFamily::UserTable: return derivative(t) / (*table_)(t);
    }
    return 0.0;
}

double DecayProfile::max_t() const noexcept {
    return table_ ? table_->back() : std::numeric_limits<double>::infinity();
}

double DecayProfile::time_below(double eps) const {
    require_finite_positive(eps, "eps");
    if (eps > 1.0) return family_ == ProfileFamily::UserTable ? table_->front() : 0.0;
    const double pad = 1.0 + 1e-9;
    switch (family_) {
    case ProfileFamily::Exponential: return pad * (-std::log(eps) / p1_) + 1e-9;
    case ProfileFamily::PowerLaw: return pad * (std::pow(eps, -1.0 / p1_) - 1.0) + 1e-9;
    case ProfileFamily::StretchedExp: return pad * std::pow(-std::log(eps) / p2_, 1.0 / p1_) + 1e-9;
    case ProfileFamily::UserTable: return table_->time_below(eps);
    }
    return 0.0;
}

double eval_profile(const DecayProfile& profile, double t) { return profile.value(t); }

Point2 spiral_point(const DecayProfile& profile, double t) {
    const double r = profile.value(t);
    return {r * std::cos(t), r * std::sin(t)};
}

SpiralPolyline sample_spiral(const DecayProfile& profile, std::size_t windings, std::size_t per_winding,
                             const SampleOptions& options) {
    if (windings < 1) throw ParameterError("windings must be >= 1");
    if (per_winding < 3) throw ParameterError("per_winding must be >= 3");
    if (windings > (options.max_points - 1) / per_winding) {
        throw ResourceError("sample budget exceeded: windings*per_winding > " + std::to_string(options.max_points - 1));
    }
    const std::size_t count = windings * per_winding + 1;
    SpiralPolyline line;
    line.params.reserve(count);
    line.points.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t = two_pi * (static_cast<double>(j) / static_cast<double>(per_winding));
        line.params.push_back(t);
        line.points.push_back(spiral_point(profile, t));
    }
    return line;
}

double polyline_length(const PointCloud& points) {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
    return total;
}

std::string_view to_string(LengthVerdict verdict) {
    switch (verdict) {
    case LengthVerdict::Finite: return "finite";
    case LengthVerdict::Infinite: return "infinite length";
    case LengthVerdict::LowerBound: return "lower bound";
    }
    return "";
}

namespace {

QuadratureResult run_quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
    QuadratureResult q = integrate_adaptive(f, a, b, tol);
    if (!q.converged) {
        throw ConvergenceError("arc length quadrature did not reach tol (error estimate " + format_double(q.error) + ")");
    }
    return q;
}

/// Smallest point of a doubling sequence from `start` where log_tail(x) <= log_target.
double find_tail_cut(double start, double log_target, const std::function<double(double)>& log_tail) {
    double step = 1.0;
    double x = start;
    for (int i = 0; i < 2000; ++i) {
        if (log_tail(x) <= log_target) return x;
        x = start + step;
        step *= 2.0;
    }
    throw ConvergenceError("could not bound the arc length tail");
}

/// Length over [t0, t1] multiplied by exp(-shift).
ArcLength arc_length_scaled(const DecayProfile& profile, double t0, double t1, double tol, double shift) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ParameterError("tol must be > 0");
    if (!std::isfinite(t0) || t0 < 0.0) throw ParameterError("t0 must be finite and >= 0");
    if (std::isnan(t1) || !(t1 > t0)) throw ParameterError("t1 must exceed t0");
    const bool infinite = std::isinf(t1);
    ArcLength out;

    switch (profile.family()) {
    case ProfileFamily::Exponential: {
        const double a = profile.param1();
        const double speed = std::sqrt(1.0 + a * a);
        auto f = [=](double t) { return std::exp(-a * t - shift) * speed; };
        double upper = t1;
        double tail = 0.0;
        if (infinite) {
            // Exact tail: speed/a * exp(-aT - shift).
            const double log_factor = std::log(speed / a);
            upper = std::max(t0, (log_factor - shift - std::log(0.5 * tol)) / a);
            tail = std::exp(log_factor - a * upper - shift);
            if (upper == t0) {
                out.value = 0.0;
                out.error = tail;
                return out;
            }
        }
        const auto q = run_quadrature(f, t0, upper, infinite ? 0.5 * tol : tol);
        out.value = q.value;
        out.error = q.error + tail;
        return out;
    }
    case ProfileFamily::PowerLaw: {
        const double p = profile.param1();
        if (infinite && p <= 1.0) {
            // Integrand >= (1+t)^(-p), whose integral diverges for p <= 1.
            out.verdict = LengthVerdict::Infinite;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        // s = ln(1+t): dt = e^s ds, integrand e^{(1-p)s} sqrt(1 + p^2 e^{-2s}).
        auto f = [=](double s) { return std::exp((1.0 - p) * s - shift) * std::sqrt(1.0 + p * p * std::exp(-2.0 * s)); };
        const double s0 = std::log1p(t0);
        double s1 = infinite ? 0.0 : std::log1p(t1);
        double tail = 0.0;
        if (infinite) {
            auto log_tail = [=](double s) {
                const double a = (1.0 - p) * s - std::log(p - 1.0);
                const double b = -p * s;
                const double hi = std::max(a, b);
                return hi + std::log1p(std::exp(std::min(a, b) - hi)) - shift;
            };
            s1 = find_tail_cut(s0 + 1.0, std::log(0.5 * tol), log_tail);
            tail = std::exp(log_tail(s1));
        }
        const auto q = run_quadrature(f, s0, s1, infinite ? 0.5 * tol : tol);
        out.value = q.value;
        out.error = q.error + tail;
        return out;
    }
    case ProfileFamily::StretchedExp: {
        const double beta = profile.param1();
        const double c = profile.param2();
        const double k = 1.0 / beta;
        // u = t^beta: integrand e^{-cu} sqrt((k u^{k-1})^2 + c^2), smooth at u = 0.
        auto f = [=](double u) {
            const double dt = k * std::pow(u, k - 1.0);
            return std::exp(-c * u - shift) * std::sqrt(dt * dt + c * c);
        };
        const double u0 = std::pow(t0, beta);
        double u1 = infinite ? 0.0 : std::pow(t1, beta);
        double tail = 0.0;
        if (infinite) {
            // Upper incomplete gamma bound G(k,x) <= 2 x^{k-1} e^{-x} for x >= 2(k-1).
            const double start = std::max(u0 + 1.0, 2.0 * (k - 1.0) / c);
            auto log_tail = [=](double u) {
                const double x = c * u;
                return -x + std::log1p(2.0 * k * std::pow(x, k - 1.0) / std::pow(c, k)) - shift;
            };
            u1 = find_tail_cut(start, std::log(0.5 * tol), log_tail);
            tail = std::exp(log_tail(u1));
        }
        const auto q = run_quadrature(f, u0, u1, infinite ? 0.5 * tol : tol);
        out.value = q.value;
        out.error = q.error + tail;
        return out;
    }
    case ProfileFamily::UserTable: {
        double upper = t1;
        if (upper > profile.max_t()) {
            if (!infinite) profile.value(upper); // throws RangeError
            upper = profile.max_t();
            out.verdict = LengthVerdict::LowerBound;
        }
        auto f = [&profile, shift](double t) {
            const double v = profile.value(t);
            const double d = profile.derivative(t);
            return std::sqrt(v * v + d * d) * std::exp(-shift);
        };
        if (!(upper > t0)) {
            out.value = 0.0;
            return out;
        }
        const auto q = run_quadrature(f, t0, upper, tol);
        out.value = q.value;
        out.error = q.error;
        return out;
    }
    }
    return out;
}

} // namespace

ArcLength arc_length(const DecayProfile& profile, double t0, double t1, double tol) {
    return arc_length_scaled(profile, t0, t1, tol, 0.0);
}

ArcLength arc_length_relative(const DecayProfile& profile, double t0, double t1, double tol) {
    return arc_length_scaled(profile, t0, t1, tol, profile.log_value(t0));
}

namespace {

double parse_real(std::string_view text, std::string_view token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("invalid number '" + std::string(text) + "' in '" + std::string(token) + "'", std::string(token));
    }
    return value;
}

std::map<std::string, double, std::less<>> parse_assignments(std::string_view body, std::string_view spec) {
    std::map<std::string, double, std::less<>> values;
    std::size_t start = 0;
    while (start <= body.size()) {
        const std::size_t comma = body.find(',', start);
        const std::string_view item = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ParseError("expected key=value, got '" + std::string(item) + "' in '" + std::string(spec) + "'",
                             std::string(item));
        }
        const std::string key(item.substr(0, eq));
        if (values.count(key)) throw ParseError("duplicate key '" + key + "'", key);
        values[key] = parse_real(item.substr(eq + 1), item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

double take(std::map<std::string, double, std::less<>>& values, const std::string& key, std::string_view spec) {
    auto it = values.find(key);
    if (it == values.end()) throw ParseError("missing '" + key + "=' in '" + std::string(spec) + "'", key);
    const double v = it->second;
    values.erase(it);
    return v;
}

void reject_extra(const std::map<std::string, double, std::less<>>& values) {
    if (!values.empty()) {
        throw ParseError("unknown key '" + values.begin()->first + "'", values.begin()->first);
    }
}

} // namespace

DecayProfile parse_profile_spec(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("profile spec needs '<family>:...', got '" + std::string(spec) + "'", std::string(spec));
    }
    const std::string_view family = spec.substr(0, colon);
    const std::string_view body = spec.substr(colon + 1);
    if (family == "table") {
        if (body.empty()) throw ParseError("table spec needs a path", "table:");
        return load_profile_table(std::string(body));
    }
    auto values = parse_assignments(body, spec);
    if (family == "exp") {
        const double a = take(values, "a", spec);
        reject_extra(values);
        return DecayProfile::exponential(a);
    }
    if (family == "pow") {
        const double p = take(values, "p", spec);
        reject_extra(values);
        return DecayProfile::power_law(p);
    }
    if (family == "sexp") {
        const double beta = take(values, "beta", spec);
        const double c = take(values, "c", spec);
        reject_extra(values);
        return DecayProfile::stretched_exp(beta, c);
    }
    throw ParseError("unknown profile family '" + std::string(family) + "'", std::string(family));
}

DecayProfile load_profile_table(const std::filesystem::path& path) {
    const NumericCsv csv = read_numeric_csv(path, {"t", "phi"});
    std::vector<double> t;
    std::vector<double> phi;
    t.reserve(csv.rows.size());
    phi.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        t.push_back(row[0]);
        phi.push_back(row[1]);
    }
    return DecayProfile::user_table(std::move(t), std::move(phi), path.string());
}

} // namespace spiral
