#pragma once

#include "spiral/geometry.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

enum class ProfileFamily { Exponential, PowerLaw, StretchedExp, UserTable };

class MonotoneTable;

/// A strictly decreasing radius profile phi: [0, inf) -> (0, 1] tending to zero.
///
/// Families:
///   Exponential   phi(t) = exp(-a t)
///   PowerLaw      phi(t) = (1 + t)^(-p)
///   StretchedExp  phi(t) = exp(-c t^beta), 0 < beta < 1
///   UserTable     monotone cubic (Fritsch-Carlson) interpolation of samples
///
/// Values are immutable after construction. Logarithmic accessors exist because
/// winding radii of fast profiles underflow double precision long before the
/// index range of interest is exhausted.
class DecayProfile {
public:
    static DecayProfile exponential(double a);
    static DecayProfile power_law(double p);
    static DecayProfile stretched_exp(double beta, double c);
    static DecayProfile user_table(std::vector<double> t, std::vector<double> phi, std::string source = "inline");

    ProfileFamily family() const noexcept { return family_; }
    double param1() const noexcept { return p1_; } ///< a, p, or beta
    double param2() const noexcept { return p2_; } ///< c for StretchedExp

    /// Canonical spec string, e.g. "pow:p=1".
    std::string id() const;

    double value(double t) const;
    double log_value(double t) const;
    double derivative(double t) const;
    /// phi'(t) / phi(t).
    double log_derivative(double t) const;

    /// Upper end of the domain (finite only for tables).
    double max_t() const noexcept;

    /// Some T with phi(T) < eps. Throws RangeError when a table never gets that low.
    double time_below(double eps) const;

private:
    DecayProfile(ProfileFamily family, double p1, double p2);
    void check_t(double t) const;

    ProfileFamily family_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    std::shared_ptr<const MonotoneTable> table_;
    std::string table_source_;
};

double eval_profile(const DecayProfile& profile, double t);

/// C_phi(t) = phi(t) e^{it}.
Point2 spiral_point(const DecayProfile& profile, double t);

struct SpiralPolyline {
    std::vector<double> params;
    PointCloud points;
    Point2 origin{0.0, 0.0};
};

struct SampleOptions {
    std::size_t max_points = 50'000'000;
};

/// Uniform angular sampling: t_j = 2 pi j / per_winding, j = 0..windings*per_winding.
SpiralPolyline sample_spiral(const DecayProfile& profile, std::size_t windings, std::size_t per_winding,
                             const SampleOptions& options = {});

double polyline_length(const PointCloud& points);

enum class LengthVerdict { Finite, Infinite, LowerBound };

std::string_view to_string(LengthVerdict verdict);

struct ArcLength {
    LengthVerdict verdict = LengthVerdict::Finite;
    double value = 0.0; ///< meaningless for Infinite
    double error = 0.0; ///< quadrature error estimate plus any discarded tail bound
};

/// Length of C_phi over [t0, t1]; t1 may be +infinity. Absolute error <= tol.
ArcLength arc_length(const DecayProfile& profile, double t0, double t1, double tol);

/// Same as arc_length divided by phi(t0), with tol in those units. Stays
/// representable when phi(t0) itself underflows.
ArcLength arc_length_relative(const DecayProfile& profile, double t0, double t1, double tol);

/// Parses `exp:a=..`, `pow:p=..`, `sexp:beta=..,c=..`, `table:<path.csv>`.
DecayProfile parse_profile_spec(std::string_view spec);

/// Reads a `t,phi` CSV table.
DecayProfile load_profile_table(const std::filesystem::path& path);

} // namespace spiral
