#pragma once

#include "spiral/certificate.hpp"
#include "spiral/maps.hpp"
#include "spiral/profiles.hpp"
#include "spiral/reports.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

enum class Command {
    Profiles,
    Radii,
    Subseq,
    Certify,
    Refute,
    Directions,
    Ssp,
    MapApply,
    MapDistortion,
    RescaleLimit,
    TransportCheck,
    Length
};

std::string_view to_string(Command command);

/// Exit codes shared by every command.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int assertion_failed = 1; ///< only with an --assert-* flag
inline constexpr int usage = 2;            ///< bad flag, spec string or parameter
inline constexpr int io = 3;
inline constexpr int numerical = 4;        ///< quadrature, sampling or budget failure
} // namespace exit_code

struct RunPlan {
    Command command = Command::Profiles;
    std::optional<DecayProfile> profile;
    std::optional<PlanarMap> map;
    std::string points;        ///< input cloud CSV, empty when sampled from the profile
    std::string target_points; ///< transport-check target cloud

    std::size_t n = 0;
    std::size_t windings = 40;
    std::size_t per_winding = 720;
    std::optional<std::size_t> m_max;
    std::vector<std::size_t> f1;
    std::optional<std::size_t> window;
    double threshold = 0.05;

    CertificateVariant variant = CertificateVariant::PaperConstant;
    double tol = 1e-10;
    double claimed_l = 0.0;
    std::optional<double> budget;

    double bin_deg = 1.0;
    std::optional<std::size_t> start_layer;
    std::size_t directions = 360;
    double delta0 = 1.0;
    double exponent = 0.5;
    std::size_t ssp_scales = 16;
    double angular_tol_deg = 1.0;
    bool all_indices = false;

    bool inverse = false;
    std::size_t pairs = 100000;
    std::uint64_t seed = 42;
    double inner = 0.01;
    double outer = 1.0;

    double log_step = 0.0;
    std::size_t members = 40;
    std::size_t rings = 5;
    std::size_t per_ring = 24;

    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    double a = 0.0;
    double b = 1.0;
    std::size_t pieces = 1;
    std::optional<std::size_t> overlay;

    std::optional<std::string> out;
    std::optional<std::string> json;
    std::optional<std::string> svg;
    std::optional<std::string> assertion; ///< name of the --assert-* flag given

    Json options; ///< echoed into every JSON report
};

struct ParseResult {
    std::optional<RunPlan> plan;
    int exit_code = exit_code::ok; ///< meaningful when plan is empty (help or error)
};

/// Usage and help go to `out`, errors to `err`.
ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

/// parse + execute with every error mapped to an exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spiral
