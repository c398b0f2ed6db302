#pragma once

#include "spiral/directions.hpp"
#include "spiral/geometry.hpp"
#include "spiral/radii.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

using MapFunction = std::function<Point2(Point2)>;

/// A planar homeomorphism with an optional inverse and declared bi-Lipschitz constant L:
/// |x - y| / L <= |h(x) - h(y)| <= L |x - y|.
class PlanarMap {
public:
    PlanarMap(std::string name, MapFunction forward, std::optional<MapFunction> inverse,
              std::optional<double> declared_lipschitz, bool fixes_origin);

    Point2 operator()(Point2 x) const { return forward_(x); }
    bool has_inverse() const noexcept { return inverse_.has_value(); }
    /// Throws CapabilityError without an inverse.
    Point2 inverse(Point2 y) const;

    const std::string& name() const noexcept { return name_; }
    std::optional<double> declared_lipschitz() const noexcept { return lipschitz_; }
    bool fixes_origin() const noexcept { return fixes_origin_; }

private:
    std::string name_;
    MapFunction forward_;
    std::optional<MapFunction> inverse_;
    std::optional<double> lipschitz_;
    bool fixes_origin_ = false;
};

PlanarMap identity_map();
/// x -> k x, k > 0.
PlanarMap scale_map(double k);
PlanarMap rotation_map(double degrees);
/// sigma_gamma(r e^{i theta}) = r e^{i(theta + gamma ln r)}, sigma_gamma(0) = 0.
PlanarMap shear_spiral_map(double gamma);
/// Applies `first`, then `second`.
PlanarMap compose(const PlanarMap& first, const PlanarMap& second);

/// `id`, `scale:<k>`, `rot:<deg>`, `shear-spiral:gamma=<real>`, `compose:<spec>|<spec>[|...]`.
PlanarMap parse_map_spec(std::string_view spec);

PointCloud apply_map(const PlanarMap& map, const PointCloud& points);
PointCloud apply_inverse(const PlanarMap& map, const PointCloud& points);

/// Disk (inner = 0) or annulus inner <= |x - center| <= outer.
struct Region {
    Point2 center{0.0, 0.0};
    double inner = 0.0;
    double outer = 1.0;

    static Region disk(double radius) { return {{0.0, 0.0}, 0.0, radius}; }
    static Region annulus(double inner, double outer) { return {{0.0, 0.0}, inner, outer}; }
};

struct DistortionEstimate {
    double l_est = 0.0;   ///< lower bound on the bi-Lipschitz constant
    double rho_min = 0.0; ///< smallest |h(x)-h(y)| / |x-y| seen
    double rho_max = 0.0;
    std::size_t random_pairs = 0;
    std::size_t diagonal_pairs = 0;
    std::size_t skipped = 0;
};

/// Seeded pair sampling: n_pairs area-uniform pairs plus a near-diagonal batch at
/// separations 1e-3 .. 1e-6 of the outer radius. Result is a lower bound only.
DistortionEstimate distortion_estimate(const PlanarMap& map, const Region& region, std::size_t n_pairs,
                                       std::uint64_t seed);

/// Uniform double in [0, 1) from a stateless hash of (seed, counter).
double hashed_uniform(std::uint64_t seed, std::uint64_t counter);

/// Members h_k(x) = h(r_k x) / r_k.
class RescaledFamily {
public:
    RescaledFamily(PlanarMap base, std::vector<double> scales);

    std::size_t size() const noexcept { return scales_.size(); }
    const PlanarMap& base() const noexcept { return base_; }
    const std::vector<double>& scales() const noexcept { return scales_; }
    Point2 evaluate(std::size_t k, Point2 x) const;
    PlanarMap member(std::size_t k) const;

private:
    PlanarMap base_;
    std::vector<double> scales_;
};

/// Throws PreconditionError when the map does not fix the origin.
RescaledFamily rescaled_family(const PlanarMap& map, std::vector<double> scales);

/// `rings` circles of `per_ring` probes spread over 1/2 <= |x| <= 2.
PointCloud probe_grid(std::size_t rings = 5, std::size_t per_ring = 24);

struct LimitTable {
    bool converged = false;            ///< a cluster of >= 3 members was found
    std::string message;
    std::vector<std::size_t> selected; ///< 0-based member indices, increasing
    PointCloud grid;
    PointCloud limit;                  ///< h-bar on the grid
    double modulus = 0.0;              ///< max |h(x) - h(y)| / |x - y| over grid pairs
    double tolerance = 0.0;
};

/// Greedy grid clustering standing in for an Arzela-Ascoli subsequence.
LimitTable aa_limit(const RescaledFamily& family, const PointCloud& grid, double tol);

struct TransportPoint {
    std::size_t k = 0;
    std::size_t n = 0;
    bool skipped = false;
    double defect = 0.0;           ///< direction of h(r u)/r against the target bins, max over u, radians
    double image_defect = 0.0;     ///< direction of h(a) against the target bins, max over u
    double selection_defect = 0.0; ///< |a - r u| / r, max over u
};

struct TransportReport {
    std::vector<TransportPoint> trace;
    std::size_t skipped = 0;
    double bin_width = 0.0;
    bool pass = false; ///< last half of the non-skipped defects within one target bin
    double fraction_above(double angle) const;
};

struct TransportOptions {
    std::vector<double> directions{0.0};
    /// A selected point must lie within this angle of u.
    double angular_tol = deg_to_rad(1.0);
};

TransportReport transported_direction_check(const PlanarMap& map, const PointCloud& cloud, Point2 origin,
                                            const RadiiSequence& radii, const IndexSet& subsequence,
                                            const DirectionSet& target, const TransportOptions& options = {});

struct PartitionLength {
    double given = 0.0;   ///< L_P on the supplied partition
    double refined = 0.0; ///< after bisection refinement
    std::size_t pieces = 0;
    std::size_t refinements = 0;
    bool converged = false;
};

struct PartitionOptions {
    double relative_increment = 1e-6;
    std::size_t max_pieces = std::size_t{1} << 23;
};

/// Polygonal length of h along [a, b] x {0}. An empty partition means {a, b}.
PartitionLength partition_length(const PlanarMap& map, double a, double b, std::vector<double> partition = {},
                                 const PartitionOptions& options = {});

} // namespace spiral
