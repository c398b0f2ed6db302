#pragma once

#include "spiral/certificate.hpp"
#include "spiral/directions.hpp"
#include "spiral/maps.hpp"
#include "spiral/profiles.hpp"
#include "spiral/radii.hpp"

#include <filesystem>
#include <json.hpp>

namespace spiral {

using Json = nlohmann::json;

Json classification_json(const DecayClassification& c);
/// Fields verdict, f1, f2_final, density_trace, ratio_diag, claim1, claim2, n0_table and a few extras.
Json extraction_json(const RegularSubsequence& sub, const ClaimReport& claims);
Json certificate_json(const Certificate& cert);
Json refutation_json(const Refutation& r);
Json direction_json(const DirectionSet& ds, const UnwindVerdict& verdict);
Json tilde_ssp_json(const TildeSspReport& report);
Json ssp_report_json(const SspReport& report);
Json distortion_json(const DistortionEstimate& d, const PlanarMap& map, const Region& region);
Json limit_json(const LimitTable& table, const RescaledFamily& family);
Json transport_json(const TransportReport& report);
Json arc_length_json(const ArcLength& length);
Json partition_json(const PartitionLength& length);

/// `t,x,y`
void write_polyline_csv(const std::filesystem::path& path, const SpiralPolyline& line);
/// `n,r,a,b`; b is empty on the last row.
void write_radii_csv(const std::filesystem::path& path, const RadiiSequence& radii);
/// `n,r_n,r_next,L_min,running_max`
void write_certificate_csv(const std::filesystem::path& path, const Certificate& cert);
/// `x,y,hx,hy`
void write_limit_csv(const std::filesystem::path& path, const LimitTable& table);
/// `n,ratio` for the retained indices.
void write_subsequence_csv(const std::filesystem::path& path, const RegularSubsequence& sub);

/// Two-space indented JSON followed by a newline.
void write_json(const std::filesystem::path& path, const Json& report);

} // namespace spiral
