#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace spiral {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
    friend constexpr Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

using PointCloud = std::vector<Point2>;

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Polar angle in [0, 2π).
inline double angle_of(Point2 p) {
    double a = std::atan2(p.y, p.x);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return a;
}

/// Smallest absolute difference of two angles on the circle, in [0, π].
inline double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), two_pi);
    return d > std::numbers::pi ? two_pi - d : d;
}

/// Counter-clockwise rotation of p by `angle` radians.
inline Point2 rotate(Point2 p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline Point2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace spiral
