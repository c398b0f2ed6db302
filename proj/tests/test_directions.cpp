#include "oracles.hpp"

#include "spiral/directions.hpp"
#include "spiral/errors.hpp"
#include "spiral/profiles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spiral;

namespace {

PointCloud segment_cloud(int j = 10, std::size_t count = 10000) {
    PointCloud pts;
    const double lo = std::pow(2.0, -j);
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({lo + (1.0 - lo) * static_cast<double>(i) / static_cast<double>(count - 1), 0.0});
    }
    return pts;
}

PointCloud ray_cloud(const std::vector<double>& angles, std::size_t per_ray = 2000) {
    PointCloud pts;
    for (double a : angles) {
        for (std::size_t i = 0; i < per_ray; ++i) {
            const double r = std::pow(2.0, -12.0 * static_cast<double>(i) / static_cast<double>(per_ray - 1));
            pts.push_back(r * unit_vector(a));
        }
    }
    return pts;
}

} // namespace

TEST_CASE("segment has a single persistent direction") {
    const auto ds = estimate_direction_set(segment_cloud(), {0.0, 0.0});
    CHECK(ds.bin_count == 360);
    CHECK(ds.persistent == std::vector<std::size_t>{0});
    const auto v = is_unwinded(ds);
    CHECK(v.unwinded);
    CHECK(rad_to_deg(v.max_gap) == doctest::Approx(359.0));

    CHECK(cone_membership({0.5, 0.0}, ds, deg_to_rad(0.5)));
    CHECK_FALSE(cone_membership({0.0, 1.0}, ds, deg_to_rad(0.5)));
    CHECK(cone_membership({0.0, 0.0}, ds, 0.0));
    CHECK_FALSE(cone_membership({2.0, 0.0}, ds, deg_to_rad(0.5), 1.0));
    CHECK(cone_membership({0.9, 0.0}, ds, deg_to_rad(0.5), 1.0));
}

TEST_CASE("power-law spiral covers every direction") {
    const auto line = sample_spiral(DecayProfile::power_law(1.0), 40, 720);
    const auto ds = estimate_direction_set(line.points, {0.0, 0.0});
    CHECK(ds.persistent.size() == 360);
    const auto v = is_unwinded(ds);
    CHECK_FALSE(v.unwinded);
    CHECK(v.max_gap == 0.0);
    oracle::Rng rng(9);
    for (int i = 0; i < 100; ++i) CHECK(cone_membership(unit_vector(rng.uniform(0, two_pi)), ds, 0.0));
}

TEST_CASE("two rays and a half-plane arc") {
    const auto rays = estimate_direction_set(ray_cloud({0.0, std::numbers::pi / 2}), {0.0, 0.0});
    CHECK(rays.persistent == std::vector<std::size_t>{0, 90});

    std::vector<double> angles;
    for (int i = 0; i < 1800; ++i) angles.push_back(std::numbers::pi * (i + 0.5) / 1800.0);
    const auto half = estimate_direction_set(ray_cloud(angles, 40), {0.0, 0.0});
    const auto v = is_unwinded(half);
    CHECK(v.unwinded);
    CHECK(rad_to_deg(v.max_gap) == doctest::Approx(180.0));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(estimate_direction_set({}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(estimate_direction_set({{0.0, 0.0}}, {0.0, 0.0}), ValidationError);
    DirectionOptions bad;
    bad.scales = std::vector<double>{1.0, 0.5, 0.5};
    CHECK_THROWS_AS(estimate_direction_set(segment_cloud(), {0.0, 0.0}, bad), ParameterError);
    DirectionOptions width;
    width.bin_width = deg_to_rad(7.0);
    CHECK_THROWS_AS(estimate_direction_set(segment_cloud(), {0.0, 0.0}, width), ParameterError);
    DirectionOptions two;
    two.scales = std::vector<double>{1.0, 0.5, 0.25};
    CHECK_THROWS_AS(is_unwinded(estimate_direction_set(segment_cloud(), {0.0, 0.0}, two)), PreconditionError);
}

TEST_CASE("empty layers are flagged") {
    DirectionOptions options;
    options.scales = std::vector<double>{4.0, 2.0, 1.0, 0.5, 0.25};
    options.start_layer = 0;
    const auto ds = estimate_direction_set(segment_cloud(), {0.0, 0.0}, options);
    CHECK(ds.empty_layers == std::vector<std::size_t>{0});
    CHECK(ds.persistent.empty());
}

TEST_CASE("properties on random clouds") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        PointCloud pts;
        const std::size_t count = 50 + rng.index(900);
        const double spread = rng.uniform(0.05, two_pi);
        const double centre = rng.uniform(0.0, two_pi);
        for (std::size_t i = 0; i < count; ++i) {
            const double r = std::exp(rng.uniform(-8.0, 0.0));
            pts.push_back(r * unit_vector(centre + rng.uniform(-spread / 2, spread / 2)));
        }
        const Point2 origin{0.0, 0.0};
        DirectionOptions coarse;
        coarse.bin_width = deg_to_rad(10.0);
        coarse.start_layer = 2;
        const auto a = estimate_direction_set(pts, origin, coarse);
        DirectionOptions fine = coarse;
        fine.bin_width = deg_to_rad(5.0);
        fine.scales = a.scales;
        const auto b = estimate_direction_set(pts, origin, fine);

        // Halving the bin width never adds persistent directions.
        for (std::size_t bin : b.persistent) CHECK(a.is_persistent(bin / 2));

        // Hit tables and the unwinded verdict agree with a direct scan.
        const auto hits = oracle::layer_hits(pts, a.scales, a.bin_width);
        REQUIRE(hits.size() == a.layers());
        for (std::size_t k = 0; k < hits.size(); ++k) {
            for (std::size_t b = 0; b < hits[k].size(); ++b) {
                INFO("trial " << trial << " layer " << k << " bin " << b);
                CHECK(hits[k][b] == a.hits[k][b]);
            }
        }
        bool all_covered = true;
        for (std::size_t k = a.start_layer; k < hits.size(); ++k) {
            for (bool h : hits[k]) all_covered = all_covered && h;
        }
        if (a.layers() >= 3) CHECK(is_unwinded(a).unwinded == !all_covered);

        // Persistent bins are hit in every layer past the start.
        for (std::size_t bin : a.persistent) {
            for (std::size_t k = a.start_layer; k < a.layers(); ++k) CHECK(a.hits[k][bin]);
        }

        // Cone membership is invariant under positive scaling.
        for (int i = 0; i < 20; ++i) {
            const Point2 v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double s = std::exp(rng.uniform(-5, 5));
            CHECK(cone_membership(v, a, 0.01) == cone_membership(s * v, a, 0.01));
        }
    }
}

TEST_CASE("SSP defect") {
    const auto seg = segment_cloud(10, 10001);
    PointCloud with_quarter = seg;
    with_quarter.push_back({0.25, 0.0});
    CHECK(ssp_defect(with_quarter, {0.0, 0.0}, {1.0, 0.0}, 0.25).delta == 0.0);
    CHECK(ssp_defect(with_quarter, {0.0, 0.0}, {1.0, 0.0}, 0.25).reliable);

    const auto e = sample_spiral(DecayProfile::exponential(1.0), 3, 720);
    const double t = std::exp(-std::numbers::pi);
    const auto d = ssp_defect(e.points, {0.0, 0.0}, {1.0, 0.0}, t);
    CHECK(d.delta == doctest::Approx(0.93509).epsilon(1e-4));

    const auto p = sample_spiral(DecayProfile::power_law(1.0), 102, 720);
    const double r100 = 1.0 / (1.0 + two_pi * 99.0);
    const double r101 = 1.0 / (1.0 + two_pi * 100.0);
    CHECK(ssp_defect(p.points, {0.0, 0.0}, {1.0, 0.0}, std::sqrt(r100 * r101)).delta <= 0.031);

    CHECK_FALSE(ssp_defect(seg, {0.0, 0.0}, {1.0, 0.0}, 1e-6).reliable);

    // Scale invariance.
    oracle::Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const double lambda = std::exp(rng.uniform(-6, 6));
        const double tt = rng.uniform(0.01, 1.0);
        const Point2 u = unit_vector(rng.uniform(0, two_pi));
        PointCloud scaled;
        for (const auto& q : p.points) scaled.push_back(lambda * q);
        const double d1 = ssp_defect(p.points, {0.0, 0.0}, u, tt).delta;
        const double d2 = ssp_defect(scaled, {0.0, 0.0}, u, lambda * tt).delta;
        CHECK(d2 == doctest::Approx(d1).epsilon(1e-12));
    }

    const auto report = ssp_report(p.points, {0.0, 0.0}, direction_grid(8), {0.1, 0.01, 0.005});
    CHECK(report.defect.size() == 8);
    CHECK(report.max_defect <= 0.031 + 1.0);
    for (const auto& row : report.defect) {
        for (double v : row) CHECK(v >= 0.0);
    }
}

TEST_CASE("annulus coverage check") {
    SUBCASE("spiral windings sweep all angles") {
        const DecayProfile profiles[] = {DecayProfile::power_law(1.0), DecayProfile::exponential(0.3),
                                         DecayProfile::stretched_exp(0.5, 1.0)};
        for (const auto& prof : profiles) {
            const auto radii = winding_radii(prof, 30);
            const auto cloud = sample_spiral(prof, 30, 720);
            const auto report = tilde_ssp_check(cloud.points, {0.0, 0.0}, radii, extract_regular_subsequence(radii),
                                                direction_grid(360));
            REQUIRE(report.annuli.size() == 29);
            for (const auto& a : report.annuli) CHECK(rad_to_deg(a.defect) <= 0.5);
        }
    }
    SUBCASE("segment misses the vertical direction") {
        const auto radii = winding_radii(DecayProfile::power_law(1.0), 20);
        std::vector<double> log_r;
        for (std::size_t n = 1; n <= 20; ++n) log_r.push_back(radii.log_radius(n));
        PointCloud seg;
        for (int i = 0; i < 20000; ++i) seg.push_back({std::exp(log_r.back() + (0.0 - log_r.back()) * i / 19999.0), 0.0});
        const auto report = tilde_ssp_check(seg, {0.0, 0.0}, radii, extract_regular_subsequence(radii),
                                            {std::numbers::pi / 2});
        for (const auto& a : report.annuli) CHECK_FALSE(a.pass);
        CHECK_FALSE(report.pass);
        CHECK_FALSE(report.threshold.has_value());
    }
    SUBCASE("power law at N = 1000 holds") {
        const auto prof = DecayProfile::power_law(1.0);
        const auto radii = winding_radii(prof, 1000);
        const auto cloud = sample_spiral(prof, 1000, 720);
        const auto report = tilde_ssp_check(cloud.points, {0.0, 0.0}, radii, extract_regular_subsequence(radii),
                                            direction_grid(360));
        CHECK(report.pass);
        CHECK(report.regular);
        CHECK(report.holds);
        REQUIRE(report.threshold.has_value());
    }
}

TEST_CASE("annulus lookup") {
    const auto radii = RadiiSequence::from_values({1.0, 0.5, 0.25, 0.125});
    CHECK(annuli_containing(radii, std::log(0.3)) == std::vector<std::size_t>{2});
    CHECK(annuli_containing(radii, std::log(0.5)) == std::vector<std::size_t>{1, 2});
    CHECK(annuli_containing(radii, std::log(1.0)) == std::vector<std::size_t>{1});
    CHECK(annuli_containing(radii, std::log(0.1)).empty());
    CHECK(annuli_containing(radii, std::log(0.125)) == std::vector<std::size_t>{3});
}
