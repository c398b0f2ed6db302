#include "spiral/maps.hpp"

#include "spiral/errors.hpp"
#include "spiral/io.hpp"
#include "spiral/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace spiral {

PlanarMap::PlanarMap(std::string name, MapFunction forward, std::optional<MapFunction> inverse,
                     std::optional<double> declared_lipschitz, bool fixes_origin)
    : name_(std::move(name)), forward_(std::move(forward)), inverse_(std::move(inverse)),
      lipschitz_(declared_lipschitz), fixes_origin_(fixes_origin) {
    if (lipschitz_ && !(*lipschitz_ >= 1.0)) throw ParameterError("declared Lipschitz constant must be >= 1");
}

Point2 PlanarMap::inverse(Point2 y) const {
    if (!inverse_) throw CapabilityError("map '" + name_ + "' has no inverse");
    return (*inverse_)(y);
}

PlanarMap identity_map() {
    auto id = [](Point2 x) { return x; };
    return PlanarMap("id", id, MapFunction(id), 1.0, true);
}

PlanarMap scale_map(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("k must be > 0");
    return PlanarMap("scale:" + format_double(k), [k](Point2 x) { return k * x; },
                     MapFunction([k](Point2 y) { return y / k; }), std::max(k, 1.0 / k), true);
}

PlanarMap rotation_map(double degrees) {
    if (!std::isfinite(degrees)) throw ParameterError("rotation angle must be finite");
    const double angle = deg_to_rad(degrees);
    return PlanarMap("rot:" + format_double(degrees), [angle](Point2 x) { return rotate(x, angle); },
                     MapFunction([angle](Point2 y) { return rotate(y, -angle); }), 1.0, true);
}

namespace {

Point2 shear(Point2 x, double gamma) {
    const double r = norm(x);
    if (r == 0.0) return x;
    return rotate(x, gamma * std::log(r));
}

} // namespace

PlanarMap shear_spiral_map(double gamma) {
    if (!std::isfinite(gamma)) throw ParameterError("gamma must be finite");
    const double lipschitz = (std::abs(gamma) + std::sqrt(gamma * gamma + 4.0)) / 2.0;
    return PlanarMap("shear-spiral:gamma=" + format_double(gamma), [gamma](Point2 x) { return shear(x, gamma); },
                     MapFunction([gamma](Point2 y) { return shear(y, -gamma); }), lipschitz, true);
}

PlanarMap compose(const PlanarMap& first, const PlanarMap& second) {
    std::optional<MapFunction> inverse;
    if (first.has_inverse() && second.has_inverse()) {
        inverse = [first, second](Point2 y) { return first.inverse(second.inverse(y)); };
    }
    std::optional<double> lipschitz;
    if (first.declared_lipschitz() && second.declared_lipschitz()) {
        lipschitz = *first.declared_lipschitz() * *second.declared_lipschitz();
    }
    return PlanarMap(first.name() + "|" + second.name(), [first, second](Point2 x) { return second(first(x)); },
                     std::move(inverse), lipschitz, first.fixes_origin() && second.fixes_origin());
}

namespace {

double parse_number(std::string_view text, std::string_view token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("invalid number '" + std::string(text) + "' in '" + std::string(token) + "'", std::string(token));
    }
    return value;
}

PlanarMap parse_simple(std::string_view spec) {
    if (spec == "id") return identity_map();
    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("unknown map spec '" + std::string(spec) + "'", std::string(spec));
    }
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view body = spec.substr(colon + 1);
    if (kind == "scale") return scale_map(parse_number(body, spec));
    if (kind == "rot") return rotation_map(parse_number(body, spec));
    if (kind == "shear-spiral") {
        constexpr std::string_view key = "gamma=";
        if (body.substr(0, key.size()) != key) {
            throw ParseError("expected 'gamma=<real>' in '" + std::string(spec) + "'", std::string(body));
        }
        return shear_spiral_map(parse_number(body.substr(key.size()), spec));
    }
    throw ParseError("unknown map kind '" + std::string(kind) + "'", std::string(kind));
}

} // namespace

PlanarMap parse_map_spec(std::string_view spec) {
    constexpr std::string_view prefix = "compose:";
    if (spec.substr(0, prefix.size()) != prefix) return parse_simple(spec);
    std::string_view rest = spec.substr(prefix.size());
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t bar = rest.find('|');
        parts.push_back(rest.substr(0, bar));
        if (bar == std::string_view::npos) break;
        rest = rest.substr(bar + 1);
    }
    if (parts.size() < 2) throw ParseError("compose needs at least two maps separated by '|'", std::string(spec));
    PlanarMap out = parse_simple(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) out = compose(out, parse_simple(parts[i]));
    return out;
}

PointCloud apply_map(const PlanarMap& map, const PointCloud& points) {
    PointCloud out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = map(points[i]); });
    return out;
}

PointCloud apply_inverse(const PlanarMap& map, const PointCloud& points) {
    if (!map.has_inverse()) throw CapabilityError("map '" + map.name() + "' has no inverse");
    PointCloud out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = map.inverse(points[i]); });
    return out;
}

double hashed_uniform(std::uint64_t seed, std::uint64_t counter) {
    // splitmix64 finalizer applied to a seed/counter mix.
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + counter + 0x632BE59BD9B4E019ULL;
    for (int round = 0; round < 2; ++round) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
    }
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

Point2 sample_region(const Region& region, std::uint64_t seed, std::uint64_t counter) {
    const double u = hashed_uniform(seed, counter);
    const double v = hashed_uniform(seed, counter + 1);
    const double r2 = region.inner * region.inner + u * (region.outer * region.outer - region.inner * region.inner);
    return region.center + std::sqrt(r2) * unit_vector(two_pi * v);
}

} // namespace

DistortionEstimate distortion_estimate(const PlanarMap& map, const Region& region, std::size_t n_pairs,
                                       std::uint64_t seed) {
    if (n_pairs < 1000) throw ParameterError("n_pairs must be >= 1000");
    if (!(region.inner >= 0.0) || !(region.outer > region.inner)) {
        throw ParameterError("region needs 0 <= inner < outer");
    }
    const std::size_t diagonal = std::max<std::size_t>(1000, n_pairs / 10);
    const std::size_t total = n_pairs + diagonal;
    std::vector<double> rho(total, std::numeric_limits<double>::quiet_NaN());
    parallel_for(total, [&](std::size_t i) {
        Point2 x;
        Point2 y;
        if (i < n_pairs) {
            const auto c = static_cast<std::uint64_t>(4 * i);
            x = sample_region(region, seed, c);
            y = sample_region(region, seed, c + 2);
        } else {
            const auto c = static_cast<std::uint64_t>(4 * n_pairs + 4 * (i - n_pairs));
            x = sample_region(region, seed, c);
            const double exponent = -3.0 - 3.0 * hashed_uniform(seed, c + 2);
            const double step = region.outer * std::pow(10.0, exponent);
            y = x + step * unit_vector(two_pi * hashed_uniform(seed, c + 3));
        }
        const double d = distance(x, y);
        if (d == 0.0) return;
        const double value = distance(map(x), map(y)) / d;
        if (std::isfinite(value) && value > 0.0) rho[i] = value;
    });

    DistortionEstimate out;
    out.rho_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < total; ++i) {
        if (std::isnan(rho[i])) {
            ++out.skipped;
            continue;
        }
        (i < n_pairs ? out.random_pairs : out.diagonal_pairs)++;
        out.rho_min = std::min(out.rho_min, rho[i]);
        out.rho_max = std::max(out.rho_max, rho[i]);
    }
    if (out.random_pairs + out.diagonal_pairs == 0) throw SamplingError("every sampled pair was degenerate");
    out.l_est = std::max(out.rho_max, 1.0 / out.rho_min);
    return out;
}

RescaledFamily::RescaledFamily(PlanarMap base, std::vector<double> scales)
    : base_(std::move(base)), scales_(std::move(scales)) {
    for (double r : scales_) {
        if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("family scales must be positive");
    }
}

Point2 RescaledFamily::evaluate(std::size_t k, Point2 x) const {
    const double r = scales_.at(k);
    return base_(r * x) / r;
}

PlanarMap RescaledFamily::member(std::size_t k) const {
    const double r = scales_.at(k);
    const PlanarMap base = base_;
    std::optional<MapFunction> inverse;
    if (base.has_inverse()) inverse = [base, r](Point2 y) { return base.inverse(r * y) / r; };
    return PlanarMap(base.name() + "@" + format_double(r), [base, r](Point2 x) { return base(r * x) / r; },
                     std::move(inverse), base.declared_lipschitz(), true);
}

RescaledFamily rescaled_family(const PlanarMap& map, std::vector<double> scales) {
    if (!map.fixes_origin()) throw PreconditionError("rescaled family needs a map fixing the origin");
    return RescaledFamily(map, std::move(scales));
}

PointCloud probe_grid(std::size_t rings, std::size_t per_ring) {
    if (rings < 1 || per_ring < 1) throw ParameterError("probe grid needs rings >= 1 and per_ring >= 1");
    PointCloud grid;
    grid.reserve(rings * per_ring);
    for (std::size_t i = 0; i < rings; ++i) {
        // Log-spaced radii from 1/2 to 2; rings are staggered by half a step.
        const double s = rings == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(rings - 1);
        const double radius = 0.5 * std::pow(4.0, s);
        for (std::size_t j = 0; j < per_ring; ++j) {
            const double angle = two_pi * (static_cast<double>(j) + 0.5 * static_cast<double>(i % 2)) /
                                 static_cast<double>(per_ring);
            grid.push_back(radius * unit_vector(angle));
        }
    }
    return grid;
}

LimitTable aa_limit(const RescaledFamily& family, const PointCloud& grid, double tol) {
    if (family.size() < 20) throw ParameterError("limit extraction needs at least 20 family members");
    if (grid.size() < 100) throw ParameterError("limit extraction needs at least 100 probes");
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    for (const Point2& x : grid) {
        const double r = norm(x);
        if (r < 0.5 - 1e-12 || r > 2.0 + 1e-12) throw ParameterError("probes must lie in 1/2 <= |x| <= 2");
    }
    const std::size_t m = family.size();
    const std::size_t g = grid.size();
    std::vector<PointCloud> values(m, PointCloud(g));
    parallel_for(m, [&](std::size_t k) {
        for (std::size_t j = 0; j < g; ++j) values[k][j] = family.evaluate(k, grid[j]);
    });
    std::vector<std::vector<char>> close(m, std::vector<char>(m, 0));
    parallel_for(m, [&](std::size_t k) {
        for (std::size_t l = 0; l < m; ++l) {
            double sup = 0.0;
            for (std::size_t j = 0; j < g && sup <= tol; ++j) sup = std::max(sup, distance(values[k][j], values[l][j]));
            close[k][l] = sup <= tol ? 1 : 0;
        }
    });

    std::size_t seed = 0;
    std::size_t best = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto neighbours = static_cast<std::size_t>(std::count(close[k].begin(), close[k].end(), char{1}));
        if (neighbours > best) {
            best = neighbours;
            seed = k;
        }
    }
    std::vector<std::size_t> cluster{seed};
    for (std::size_t k = 0; k < m; ++k) {
        if (k == seed) continue;
        bool fits = true;
        for (std::size_t c : cluster) fits = fits && close[k][c];
        if (fits) cluster.push_back(k);
    }
    std::sort(cluster.begin(), cluster.end());

    LimitTable out;
    out.grid = grid;
    out.tolerance = tol;
    if (cluster.size() < 3) {
        out.message = "no convergent subsequence at this tolerance";
        return out;
    }
    out.converged = true;
    out.selected = cluster;
    out.limit.assign(g, Point2{0.0, 0.0});
    for (std::size_t j = 0; j < g; ++j) {
        Point2 sum{0.0, 0.0};
        for (std::size_t c : cluster) sum = sum + values[c][j];
        out.limit[j] = sum / static_cast<double>(cluster.size());
    }
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            out.modulus = std::max(out.modulus, distance(out.limit[i], out.limit[j]) / distance(grid[i], grid[j]));
        }
    }
    out.message = "selected " + std::to_string(cluster.size()) + " of " + std::to_string(m) + " members";
    return out;
}

double TransportReport::fraction_above(double angle) const {
    std::size_t used = 0;
    std::size_t above = 0;
    for (const auto& p : trace) {
        if (p.skipped) continue;
        ++used;
        if (p.defect > angle) ++above;
    }
    return used == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(used);
}

TransportReport transported_direction_check(const PlanarMap& map, const PointCloud& cloud, Point2 origin,
                                            const RadiiSequence& radii, const IndexSet& subsequence,
                                            const DirectionSet& target, const TransportOptions& options) {
    if (!map.fixes_origin()) throw PreconditionError("transport check needs a map fixing the origin");
    if (options.directions.empty()) throw ParameterError("transport check needs at least one direction");

    // Points grouped by winding annulus, sorted by angle.
    std::vector<std::vector<std::pair<double, std::size_t>>> buckets(radii.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point2 d = cloud[i] - origin;
        const double r = norm(d);
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        for (std::size_t n : annuli_containing(radii, std::log(r))) buckets[n].emplace_back(angle_of(d), i);
    }
    for (auto& b : buckets) std::sort(b.begin(), b.end());

    TransportReport report;
    report.bin_width = target.bin_width;
    report.trace.resize(subsequence.size());
    parallel_for(subsequence.size(), [&](std::size_t k) {
        TransportPoint& p = report.trace[k];
        p.k = k + 1;
        p.n = subsequence[k];
        const double r = p.n < radii.size() ? radii.radius(p.n) : 0.0;
        const auto& bucket = p.n < radii.size() ? buckets[p.n] : buckets.front();
        std::size_t used = 0;
        if (r > 0.0 && !bucket.empty()) {
            for (double u : options.directions) {
                auto it = std::lower_bound(bucket.begin(), bucket.end(), std::make_pair(u, std::size_t{0}));
                const auto& after = it == bucket.end() ? bucket.front() : *it;
                const auto& before = it == bucket.begin() ? bucket.back() : *(it - 1);
                const auto& pick = angular_distance(u, after.first) <= angular_distance(u, before.first) ? after : before;
                if (angular_distance(u, pick.first) > options.angular_tol) continue;
                ++used;
                const Point2 a = cloud[pick.second] - origin;
                const Point2 ru = r * unit_vector(u);
                const Point2 transported = (map(origin + ru) - origin) / r;
                p.defect = std::max(p.defect, distance_to_persistent(angle_of(transported), target));
                p.image_defect = std::max(p.image_defect, distance_to_persistent(angle_of(map(cloud[pick.second]) - origin), target));
                p.selection_defect = std::max(p.selection_defect, distance(a, ru) / r);
            }
        }
        p.skipped = used == 0;
    });

    std::vector<double> used;
    for (const auto& p : report.trace) {
        if (p.skipped) {
            ++report.skipped;
        } else {
            used.push_back(p.defect);
        }
    }
    if (!used.empty()) {
        const std::size_t start = used.size() / 2;
        report.pass = std::all_of(used.begin() + static_cast<std::ptrdiff_t>(start), used.end(),
                                  [&](double d) { return d <= target.bin_width; });
    }
    return report;
}

PartitionLength partition_length(const PlanarMap& map, double a, double b, std::vector<double> partition,
                                 const PartitionOptions& options) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ParameterError("segment needs a < b");
    if (partition.empty()) partition = {a, b};
    if (partition.size() < 2 || partition.front() != a || partition.back() != b) {
        throw ParameterError("partition must start at a and end at b");
    }
    for (std::size_t i = 1; i < partition.size(); ++i) {
        if (!(partition[i] > partition[i - 1])) throw ParameterError("partition must be strictly increasing");
    }

    auto polygon = [](const PointCloud& image) {
        double sum = 0.0;
        for (std::size_t i = 1; i < image.size(); ++i) sum += distance(image[i], image[i - 1]);
        return sum;
    };

    std::vector<double> t = std::move(partition);
    PointCloud image(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) image[i] = map({t[i], 0.0});

    PartitionLength out;
    out.given = polygon(image);
    out.refined = out.given;
    while (2 * (t.size() - 1) <= options.max_pieces) {
        std::vector<double> finer(2 * t.size() - 1);
        PointCloud finer_image(finer.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            finer[2 * i] = t[i];
            finer_image[2 * i] = image[i];
        }
        parallel_for(t.size() - 1, [&](std::size_t i) {
            const double mid = 0.5 * (t[i] + t[i + 1]);
            finer[2 * i + 1] = mid;
            finer_image[2 * i + 1] = map({mid, 0.0});
        });
        t = std::move(finer);
        image = std::move(finer_image);
        const double next = polygon(image);
        const double increment = next - out.refined;
        out.refined = next;
        ++out.refinements;
        if (std::abs(increment) < options.relative_increment * (b - a)) {
            out.converged = true;
            break;
        }
    }
    out.pieces = t.size() - 1;
    return out;
}

} // namespace spiral
