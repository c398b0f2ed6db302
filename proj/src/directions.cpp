#include "spiral/directions.hpp"

#include "spiral/errors.hpp"
#include "spiral/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spiral {

namespace {

std::size_t tile_count(double bin_width) {
    if (!(bin_width > 0.0) || bin_width > two_pi) throw ParameterError("bin width must be in (0, 2 pi]");
    const double raw = two_pi / bin_width;
    const double count = std::round(raw);
    if (std::abs(count * bin_width - two_pi) > 1e-9 * two_pi) {
        throw ParameterError("bin width must divide 2 pi");
    }
    return static_cast<std::size_t>(count);
}

/// Smallest angular distance from `angle` to any entry of the sorted list.
double nearest_angle(const std::vector<double>& sorted, double angle) {
    if (sorted.empty()) return std::numbers::pi;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), angle);
    const double after = it == sorted.end() ? sorted.front() : *it;
    const double before = it == sorted.begin() ? sorted.back() : *(it - 1);
    return std::min(angular_distance(angle, after), angular_distance(angle, before));
}

} // namespace

bool DirectionSet::is_persistent(std::size_t bin) const {
    return std::binary_search(persistent.begin(), persistent.end(), bin);
}

std::vector<double> dyadic_scales(double max_radius, double min_radius) {
    if (!(max_radius > 0.0) || !(min_radius > 0.0) || min_radius > max_radius) {
        throw ParameterError("dyadic scales need 0 < min_radius <= max_radius");
    }
    std::vector<double> scales{max_radius};
    // Relative slack keeps rounding in the smallest radius from opening a sliver layer.
    while (scales.back() > min_radius * (1.0 + 1e-9)) scales.push_back(scales.back() / 2.0);
    if (scales.size() == 1) scales.push_back(max_radius / 2.0);
    return scales;
}

std::size_t bin_of(double angle, double bin_width, std::size_t bin_count) {
    const double x = angle / bin_width;
    auto bin = static_cast<long long>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
    const auto count = static_cast<long long>(bin_count);
    bin %= count;
    if (bin < 0) bin += count;
    return static_cast<std::size_t>(bin);
}

DirectionSet estimate_direction_set(const PointCloud& points, Point2 origin, const DirectionOptions& options) {
    DirectionSet ds;
    ds.bin_width = options.bin_width;
    ds.bin_count = tile_count(options.bin_width);

    std::vector<double> radius;
    std::vector<double> angle;
    radius.reserve(points.size());
    angle.reserve(points.size());
    for (const Point2& p : points) {
        const Point2 d = p - origin;
        const double r = norm(d);
        if (!std::isfinite(r)) throw ValidationError("point cloud contains non-finite coordinates");
        if (r == 0.0) continue;
        radius.push_back(r);
        angle.push_back(angle_of(d));
    }
    if (radius.empty()) throw ValidationError("point cloud is empty");

    if (options.scales) {
        ds.scales = *options.scales;
        if (ds.scales.size() < 2) throw ParameterError("a scale schedule needs at least two boundaries");
        for (std::size_t k = 0; k < ds.scales.size(); ++k) {
            if (!(ds.scales[k] > 0.0)) throw ParameterError("scales must be positive");
            if (k > 0 && !(ds.scales[k] < ds.scales[k - 1])) throw ParameterError("scales must be strictly decreasing");
        }
    } else {
        const auto [lo, hi] = std::minmax_element(radius.begin(), radius.end());
        ds.scales = dyadic_scales(*hi, *lo);
    }

    const std::size_t layer_count = ds.scales.size() - 1;
    ds.hits.assign(layer_count, std::vector<bool>(ds.bin_count, false));
    ds.layer_points.assign(layer_count, 0);
    for (std::size_t i = 0; i < radius.size(); ++i) {
        const double r = radius[i];
        if (r > ds.scales.front() || r < ds.scales.back() * (1.0 - 1e-9)) continue;
        // First boundary s_j with s_j <= r; the point sits in layer j - 1.
        auto it = std::partition_point(ds.scales.begin(), ds.scales.end(), [r](double s) { return s > r; });
        auto layer = static_cast<std::size_t>(it - ds.scales.begin());
        layer = layer == 0 ? 0 : layer - 1;
        if (layer >= layer_count) layer = layer_count - 1;
        ds.hits[layer][bin_of(angle[i], ds.bin_width, ds.bin_count)] = true;
        ++ds.layer_points[layer];
    }
    for (std::size_t k = 0; k < layer_count; ++k) {
        if (ds.layer_points[k] == 0) ds.empty_layers.push_back(k);
    }

    ds.start_layer = options.start_layer.value_or(layer_count / 2);
    if (ds.start_layer >= layer_count) throw ParameterError("start layer beyond the last layer");
    for (std::size_t b = 0; b < ds.bin_count; ++b) {
        bool all = true;
        for (std::size_t k = ds.start_layer; k < layer_count && all; ++k) all = ds.hits[k][b];
        if (all) ds.persistent.push_back(b);
    }
    return ds;
}

UnwindVerdict is_unwinded(const DirectionSet& ds) {
    if (ds.layers() < 3) throw PreconditionError("direction set needs at least 3 layers");
    UnwindVerdict out;
    out.unwinded = ds.persistent.size() < ds.bin_count;
    if (ds.persistent.empty()) {
        out.gap_bins = ds.bin_count;
    } else {
        // Runs between consecutive persistent bins, wrapping around the circle.
        for (std::size_t i = 0; i < ds.persistent.size(); ++i) {
            const std::size_t here = ds.persistent[i];
            const std::size_t next = ds.persistent[(i + 1) % ds.persistent.size()];
            const std::size_t run = (next + ds.bin_count - here - 1) % ds.bin_count;
            out.gap_bins = std::max(out.gap_bins, run);
        }
    }
    out.max_gap = static_cast<double>(out.gap_bins) * ds.bin_width;
    return out;
}

double distance_to_persistent(double theta, const DirectionSet& ds) {
    double best = std::numbers::pi;
    for (std::size_t b : ds.persistent) {
        const double lo = static_cast<double>(b) * ds.bin_width;
        const double hi = lo + ds.bin_width;
        const double rel = std::fmod(std::fmod(theta - lo, two_pi) + two_pi, two_pi);
        if (rel <= ds.bin_width) return 0.0;
        best = std::min({best, angular_distance(theta, lo), angular_distance(theta, hi)});
    }
    return best;
}

bool cone_membership(Point2 v, const DirectionSet& ds, double angular_tol, std::optional<double> radial_cap) {
    const double length = norm(v);
    if (length == 0.0) return true;
    if (radial_cap && length > *radial_cap) return false;
    return !ds.persistent.empty() && distance_to_persistent(angle_of(v), ds) <= angular_tol;
}

SspDefect ssp_defect(const PointCloud& points, Point2 origin, Point2 u, double t) {
    if (!(t > 0.0)) throw ParameterError("t must be > 0");
    const double un = norm(u);
    if (!(un > 0.0)) throw ParameterError("direction must be nonzero");
    const Point2 target = (t / un) * u;
    SspDefect out;
    out.delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2 d = points[i] - origin;
        const double r = norm(d);
        if (r >= t / 10.0 && r <= 10.0 * t) out.reliable = true;
        const double value = distance(d, target) / std::max(r, t);
        if (value < out.delta) {
            out.delta = value;
            out.index = i;
        }
    }
    return out;
}

std::vector<double> direction_grid(std::size_t count) {
    if (count < 1) throw ParameterError("direction grid needs at least one direction");
    std::vector<double> grid(count);
    for (std::size_t j = 0; j < count; ++j) grid[j] = two_pi * static_cast<double>(j) / static_cast<double>(count);
    return grid;
}

SspReport ssp_report(const PointCloud& points, Point2 origin, const std::vector<double>& directions,
                     const std::vector<double>& scales) {
    if (directions.empty() || scales.empty()) throw ParameterError("ssp report needs directions and scales");
    SspReport report;
    report.directions = directions;
    report.scales = scales;
    report.defect.assign(directions.size(), std::vector<double>(scales.size(), 0.0));
    std::vector<std::vector<char>> reliable(directions.size(), std::vector<char>(scales.size(), 0));
    parallel_for(directions.size() * scales.size(), [&](std::size_t job) {
        const std::size_t i = job / scales.size();
        const std::size_t j = job % scales.size();
        const SspDefect d = ssp_defect(points, origin, unit_vector(directions[i]), scales[j]);
        report.defect[i][j] = d.delta;
        reliable[i][j] = d.reliable ? 1 : 0;
    });
    report.max_per_direction.assign(directions.size(), 0.0);
    report.max_per_scale.assign(scales.size(), 0.0);
    for (std::size_t i = 0; i < directions.size(); ++i) {
        for (std::size_t j = 0; j < scales.size(); ++j) {
            report.max_per_direction[i] = std::max(report.max_per_direction[i], report.defect[i][j]);
            report.max_per_scale[j] = std::max(report.max_per_scale[j], report.defect[i][j]);
            if (!reliable[i][j]) ++report.unreliable;
        }
        report.max_defect = std::max(report.max_defect, report.max_per_direction[i]);
    }
    return report;
}

double ToleranceSchedule::at(std::size_t n) const { return delta0 * std::pow(static_cast<double>(n), -exponent); }

std::vector<std::size_t> annuli_containing(const RadiiSequence& radii, double log_radius) {
    const std::size_t count = radii.size();
    std::vector<std::size_t> out;
    // j = number of leading indices with l_n >= log_radius.
    std::size_t lo = 0;
    std::size_t hi = count;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (radii.log_radius(mid + 1) >= log_radius) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    const std::size_t j = lo;
    if (j >= 2 && radii.log_radius(j) == log_radius) out.push_back(j - 1);
    if (j >= 1 && j <= count - 1) out.push_back(j);
    return out;
}

TildeSspReport tilde_ssp_check(const PointCloud& points, Point2 origin, const RadiiSequence& radii,
                               const RegularSubsequence& subsequence, const std::vector<double>& directions,
                               const ToleranceSchedule& schedule) {
    if (directions.empty()) throw ParameterError("direction grid is empty");
    if (!(schedule.delta0 > 0.0) || schedule.exponent < 0.0) throw ParameterError("tolerance schedule must be positive and non-increasing");
    const std::size_t count = radii.size();
    std::vector<std::vector<double>> buckets(count);
    for (const Point2& p : points) {
        const double r = norm(p - origin);
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        for (std::size_t n : annuli_containing(radii, std::log(r))) buckets[n].push_back(angle_of(p - origin));
    }

    TildeSspReport report;
    report.direction_count = directions.size();
    report.annuli.resize(count - 1);
    parallel_for(count - 1, [&](std::size_t i) {
        const std::size_t n = i + 1;
        auto& angles = buckets[n];
        std::sort(angles.begin(), angles.end());
        AnnulusDefect& a = report.annuli[i];
        a.n = n;
        a.points = angles.size();
        a.empty = angles.empty();
        a.tolerance = schedule.at(n);
        double worst = 0.0;
        for (double u : directions) worst = std::max(worst, nearest_angle(angles, u));
        a.defect = worst;
        a.pass = !a.empty && worst <= a.tolerance;
    });

    std::size_t tail = 0;
    for (std::size_t i = report.annuli.size(); i-- > 0;) {
        if (!report.annuli[i].pass) break;
        ++tail;
    }
    if (tail > 0) report.threshold = report.annuli.size() - tail + 1;
    for (const auto& a : report.annuli) report.max_defect = std::max(report.max_defect, a.defect);
    report.pass = tail > 0 && 2 * tail >= report.annuli.size();
    report.regular = subsequence.success;
    report.holds = report.pass && report.regular;
    return report;
}

} // namespace spiral
