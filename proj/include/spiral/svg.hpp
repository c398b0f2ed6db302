#pragma once

#include "spiral/certificate.hpp"
#include "spiral/directions.hpp"
#include "spiral/maps.hpp"
#include "spiral/profiles.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

namespace spiral {

// Each builder throws PreconditionError on an empty artifact, so nothing gets written.

/// Polyline with the marked origin; viewBox centred on the origin.
std::string svg_spiral(const SpiralPolyline& line);
/// Step plot of L_min(n) on a log scale, with an optional horizontal budget line.
std::string svg_certificate(const Certificate& cert, std::optional<double> budget = {});
/// One ring per layer, bins shaded when hit; persistent bins marked on the outer rim.
std::string svg_direction_set(const DirectionSet& ds);
/// Probe x joined to its limit value h-bar(x).
std::string svg_limit_table(const LimitTable& table);
/// Winding n (the arc from r_n to r_{n+1}) closed by the radial gap segment, scaled by 1/r_n.
std::string svg_winding_overlay(const DecayProfile& profile, std::size_t n, std::size_t per_winding = 720);

void render_svg(const std::string& svg, const std::filesystem::path& path);

} // namespace spiral
