#pragma once

#include "spiral/geometry.hpp"
#include "spiral/radii.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace spiral {

struct DirectionOptions {
    double bin_width = deg_to_rad(1.0);
    /// Strictly decreasing annulus boundaries s_0 > ... > s_K > 0. Unset means dyadic.
    std::optional<std::vector<double>> scales;
    /// First layer that must be hit for a bin to be persistent. Unset means K/2.
    std::optional<std::size_t> start_layer;
};

/// Angular bins hit by the cloud inside each annulus s_{k+1} <= |a - o| < s_k.
///
/// The top layer is closed at s_0 so the outermost point is counted. A bin is
/// persistent when every layer k >= start_layer hits it.
struct DirectionSet {
    double bin_width = 0.0;
    std::size_t bin_count = 0;
    std::vector<double> scales;
    std::vector<std::vector<bool>> hits;
    std::vector<std::size_t> layer_points;
    std::vector<std::size_t> empty_layers;
    std::size_t start_layer = 0;
    std::vector<std::size_t> persistent;

    std::size_t layers() const noexcept { return hits.size(); }
    bool is_persistent(std::size_t bin) const;
};

/// s_0 = max_radius, halving until s_K <= min_radius.
std::vector<double> dyadic_scales(double max_radius, double min_radius);

/// Bin index of an angle in [0, 2 pi); a 1e-9 relative nudge keeps exact grid angles in their own bin.
std::size_t bin_of(double angle, double bin_width, std::size_t bin_count);

DirectionSet estimate_direction_set(const PointCloud& points, Point2 origin, const DirectionOptions& options = {});

struct UnwindVerdict {
    bool unwinded = false;
    double max_gap = 0.0; ///< radians, longest run of non-persistent bins
    std::size_t gap_bins = 0;
};

UnwindVerdict is_unwinded(const DirectionSet& ds);

/// Angle from theta to the nearest persistent bin arc; pi when nothing persists.
double distance_to_persistent(double theta, const DirectionSet& ds);

/// v in LD(A) at finite resolution; the apex v = 0 is always a member.
bool cone_membership(Point2 v, const DirectionSet& ds, double angular_tol, std::optional<double> radial_cap = {});

struct SspDefect {
    double delta = 0.0;
    bool reliable = false; ///< some point has |a - o| in [t/10, 10 t]
    std::size_t index = 0; ///< minimizing point
};

/// min over a of |a - o - t u| / max(|a - o|, t).
SspDefect ssp_defect(const PointCloud& points, Point2 origin, Point2 u, double t);

/// Evenly spaced direction angles 2 pi j / count.
std::vector<double> direction_grid(std::size_t count);

struct SspReport {
    std::vector<double> directions;          ///< angles
    std::vector<double> scales;              ///< t values
    std::vector<std::vector<double>> defect; ///< defect[i][j] for direction i, scale j
    std::vector<double> max_per_direction;
    std::vector<double> max_per_scale;
    double max_defect = 0.0;
    std::size_t unreliable = 0;
};

SspReport ssp_report(const PointCloud& points, Point2 origin, const std::vector<double>& directions,
                     const std::vector<double>& scales);

/// delta_n = delta0 * n^(-exponent), radians.
struct ToleranceSchedule {
    double delta0 = 1.0;
    double exponent = 0.5;
    double at(std::size_t n) const;
};

struct AnnulusDefect {
    std::size_t n = 0;
    std::size_t points = 0;
    double defect = 0.0; ///< max over grid directions of the smallest angle to a point, radians
    double tolerance = 0.0;
    bool empty = false;
    bool pass = false;
};

struct TildeSspReport {
    std::vector<AnnulusDefect> annuli; ///< n = 1..N-1
    std::optional<std::size_t> threshold; ///< every n >= threshold passes
    bool pass = false;    ///< threshold exists and the passing tail covers at least half of the annuli
    bool regular = false; ///< regularity flag of the subsequence
    bool holds = false;   ///< pass && regular
    double max_defect = 0.0;
    std::size_t direction_count = 0;
};

/// Angular coverage of each winding annulus r_{n+1} <= |a - o| <= r_n.
TildeSspReport tilde_ssp_check(const PointCloud& points, Point2 origin, const RadiiSequence& radii,
                               const RegularSubsequence& subsequence, const std::vector<double>& directions,
                               const ToleranceSchedule& schedule = {});

/// Indices of the annuli [r_{n+1}, r_n] (1-based n) containing a point at log radius lr.
std::vector<std::size_t> annuli_containing(const RadiiSequence& radii, double log_radius);

} // namespace spiral
