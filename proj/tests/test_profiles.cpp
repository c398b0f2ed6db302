#include "oracles.hpp"

#include "spiral/errors.hpp"
#include "spiral/profiles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace spiral;

TEST_CASE("stock profiles evaluate to closed forms") {
    const auto e = DecayProfile::exponential(1.0);
    const auto p = DecayProfile::power_law(1.0);
    const auto s = DecayProfile::stretched_exp(0.5, 1.0);

    CHECK(e.value(0.0) == 1.0);
    CHECK(p.value(0.0) == 1.0);
    CHECK(s.value(0.0) == 1.0);
    CHECK(e.value(two_pi) == doctest::Approx(0.001867442731707989).epsilon(1e-14));
    CHECK(e.value(4 * std::numbers::pi) == doctest::Approx(3.487342356208995e-06).epsilon(1e-14));
    CHECK(p.value(two_pi) == doctest::Approx(0.13730256169841297).epsilon(1e-14));
    CHECK(p.value(std::numbers::pi) == doctest::Approx(0.24145300700522385).epsilon(1e-14));
    CHECK(p.value(2 * two_pi) == doctest::Approx(0.07371168224916111).epsilon(1e-14));
}

TEST_CASE("spiral_point lies on the expected ray") {
    const auto e = DecayProfile::exponential(1.0);
    const Point2 a = spiral_point(e, two_pi);
    CHECK(a.x == doctest::Approx(0.001867442731707989).epsilon(1e-13));
    CHECK(std::abs(a.y) < 1e-17);

    const Point2 b = spiral_point(DecayProfile::power_law(1.0), std::numbers::pi);
    CHECK(b.x == doctest::Approx(-0.24145300700522385).epsilon(1e-13));
    CHECK(std::abs(b.y) < 1e-16);
    CHECK(spiral_point(DecayProfile::power_law(1.0), two_pi).x == doctest::Approx(0.1373026).epsilon(1e-7));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(DecayProfile::exponential(0.0), ParameterError);
    CHECK_THROWS_AS(DecayProfile::exponential(-1.0), ParameterError);
    CHECK_THROWS_WITH_AS(DecayProfile::power_law(0.0), "p must be > 0", ParameterError);
    CHECK_THROWS_AS(DecayProfile::stretched_exp(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(DecayProfile::stretched_exp(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(DecayProfile::stretched_exp(0.5, 0.0), ParameterError);
    CHECK_THROWS_AS(DecayProfile::exponential(1.0).value(-1.0), ParameterError);
}

TEST_CASE("log accessors survive underflow") {
    const auto e = DecayProfile::exponential(1.0);
    const double t = two_pi * 999.0;
    CHECK(e.value(t) == 0.0);
    CHECK(e.log_value(t) == doctest::Approx(-t).epsilon(1e-15));
    CHECK(e.log_derivative(t) == doctest::Approx(-1.0));
}

TEST_CASE("derivatives agree with central differences") {
    oracle::Rng rng(7);
    const DecayProfile profiles[] = {DecayProfile::exponential(0.3), DecayProfile::power_law(1.5),
                                     DecayProfile::stretched_exp(0.4, 2.0)};
    for (const auto& prof : profiles) {
        for (int i = 0; i < 200; ++i) {
            const double t = rng.uniform(0.5, 30.0);
            const double h = 1e-5 * std::max(1.0, t);
            const double fd = (prof.value(t + h) - prof.value(t - h)) / (2 * h);
            CHECK(prof.derivative(t) == doctest::Approx(fd).epsilon(1e-5).scale(1e-12));
            CHECK(prof.derivative(t) < 0.0);
        }
    }
}

TEST_CASE("user tables: validation, monotone interpolation, exact knots") {
    CHECK_THROWS_AS(DecayProfile::user_table({0.0}, {1.0}), ValidationError);
    CHECK_THROWS_AS(DecayProfile::user_table({0.0, 1.0, 1.0}, {1.0, 0.5, 0.2}), ValidationError);
    CHECK_THROWS_AS(DecayProfile::user_table({0.0, 1.0, 2.0}, {1.0, 0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(DecayProfile::user_table({0.0, 1.0}, {1.5, 0.5}), ValidationError);

    std::vector<double> t;
    std::vector<double> phi;
    for (int i = 0; i <= 40; ++i) {
        t.push_back(0.5 * i);
        phi.push_back(std::exp(-0.2 * 0.5 * i));
    }
    const auto table = DecayProfile::user_table(t, phi, "grid");
    CHECK(table.id() == "table:grid");
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(table.value(t[i]) == doctest::Approx(phi[i]).epsilon(1e-14));
    double previous = 2.0;
    for (double x = 0.0; x <= 20.0; x += 0.01) {
        const double v = table.value(x);
        CHECK(v < previous);
        CHECK(v == doctest::Approx(std::exp(-0.2 * x)).epsilon(1e-4));
        previous = v;
    }
    CHECK_THROWS_AS(table.value(20.5), RangeError);
    CHECK_THROWS_AS(table.time_below(1e-9), RangeError);
    CHECK(table.value(table.time_below(0.1)) < 0.1);
}

TEST_CASE("sampling layout and budget") {
    const auto p = DecayProfile::power_law(1.0);
    const SpiralPolyline line = sample_spiral(p, 3, 8);
    REQUIRE(line.points.size() == 25);
    CHECK(line.params.back() == doctest::Approx(3 * two_pi));
    CHECK(line.points[8].y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(sample_spiral(p, 0, 8), ParameterError);
    CHECK_THROWS_AS(sample_spiral(p, 1, 2), ParameterError);
    CHECK_THROWS_AS(sample_spiral(p, 1000, 1000, SampleOptions{1000}), ResourceError);
}

TEST_CASE("arc lengths against extended-precision references") {
    const auto e = DecayProfile::exponential(1.0);
    auto len = arc_length(e, 0.0, 4 * std::numbers::pi, 1e-12);
    CHECK(len.verdict == LengthVerdict::Finite);
    CHECK(len.value == doctest::Approx(1.414208630526238).epsilon(1e-11));
    len = arc_length(e, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
    CHECK(len.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));

    len = arc_length(DecayProfile::power_law(2.0), 0.0, std::numeric_limits<double>::infinity(), 1e-10);
    CHECK(len.verdict == LengthVerdict::Finite);
    CHECK(len.value == doctest::Approx(1.478942857544597).epsilon(1e-9));

    len = arc_length(DecayProfile::stretched_exp(0.5, 1.0), 0.0, std::numeric_limits<double>::infinity(), 1e-10);
    CHECK(len.value == doctest::Approx(2.393337755197521).epsilon(1e-9));

    len = arc_length(DecayProfile::power_law(1.0), 0.0, std::numeric_limits<double>::infinity(), 1e-8);
    CHECK(len.verdict == LengthVerdict::Infinite);
    CHECK(to_string(len.verdict) == "infinite length");

    len = arc_length(DecayProfile::power_law(1.0), two_pi * 99, two_pi * 100, 1e-14);
    CHECK(len.value == doctest::Approx(0.010034298067112761).epsilon(1e-10));

    len = arc_length_relative(DecayProfile::stretched_exp(0.5, 1.0), two_pi * 999, two_pi * 1000, 1e-10);
    CHECK(len.value == doctest::Approx(6.160384573906934).epsilon(1e-9));

    CHECK_THROWS_AS(arc_length(e, 0.0, 1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(arc_length(e, 1.0, 1.0, 1e-8), ParameterError);
}

TEST_CASE("polyline length increases to the arc length under refinement") {
    const DecayProfile profiles[] = {DecayProfile::exponential(0.2), DecayProfile::power_law(1.0),
                                     DecayProfile::stretched_exp(0.5, 1.0)};
    for (const auto& prof : profiles) {
        const double exact = arc_length(prof, 0.0, 3 * two_pi, 1e-12).value;
        double previous = 0.0;
        for (std::size_t per : {16u, 64u, 256u, 1024u}) {
            const double l = polyline_length(sample_spiral(prof, 3, per).points);
            CHECK(l >= previous);
            CHECK(l <= exact * (1 + 1e-12));
            previous = l;
        }
        CHECK(previous == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("profile spec strings") {
    CHECK(parse_profile_spec("exp:a=1").id() == "exp:a=1");
    CHECK(parse_profile_spec("pow:p=1.5").param1() == 1.5);
    const auto s = parse_profile_spec("sexp:beta=0.5,c=2");
    CHECK(s.family() == ProfileFamily::StretchedExp);
    CHECK(s.param2() == 2.0);
    CHECK(parse_profile_spec(s.id()).id() == s.id());

    CHECK_THROWS_WITH_AS(parse_profile_spec("pow:p=0"), "p must be > 0", ParameterError);
    try {
        parse_profile_spec("pow:p=abc");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.token() == "p=abc");
    }
    try {
        parse_profile_spec("spiral:a=1");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.token() == "spiral");
    }
    try {
        parse_profile_spec("sexp:beta=0.5,c=1,d=3");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.token() == "d");
    }
    CHECK_THROWS_AS(parse_profile_spec("exp"), ParseError);
}

TEST_CASE("table spec loads a CSV file") {
    const auto path = std::filesystem::temp_directory_path() / "spiralkit_profile_table.csv";
    {
        std::ofstream f(path);
        f << "t,phi\n0,1\n1,0.5\n2,0.25\n3,0.125\n";
    }
    const auto prof = parse_profile_spec("table:" + path.string());
    CHECK(prof.family() == ProfileFamily::UserTable);
    CHECK(prof.value(2.0) == doctest::Approx(0.25));
    const auto len = arc_length(prof, 0.0, std::numeric_limits<double>::infinity(), 1e-8);
    CHECK(len.verdict == LengthVerdict::LowerBound);
    std::filesystem::remove(path);
}
