#include "spiral/cli.hpp"

#include "spiral/directions.hpp"
#include "spiral/errors.hpp"
#include "spiral/io.hpp"
#include "spiral/radii.hpp"
#include "spiral/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#ifndef SPIRALKIT_VERSION
#define SPIRALKIT_VERSION "0.0.0"
#endif

namespace spiral {

namespace {

constexpr const char* profile_grammar =
    "Profile specs: exp:a=<real>  pow:p=<real>  sexp:beta=<real>,c=<real>  table:<path.csv> (columns t,phi)";
constexpr const char* map_grammar =
    "Map specs: id  scale:<k>  rot:<deg>  shear-spiral:gamma=<real>  compose:<spec>|<spec>[|...] (applied left to right)";

const std::map<std::string, Command, std::less<>> command_names = {
    {"profiles", Command::Profiles},
    {"radii", Command::Radii},
    {"subseq", Command::Subseq},
    {"certify", Command::Certify},
    {"refute", Command::Refute},
    {"directions", Command::Directions},
    {"ssp", Command::Ssp},
    {"map-apply", Command::MapApply},
    {"map-distortion", Command::MapDistortion},
    {"rescale-limit", Command::RescaleLimit},
    {"transport-check", Command::TransportCheck},
    {"length", Command::Length},
};

struct RawOptions {
    std::string profile;
    std::string map;
    std::string variant = "paper";
    std::string f1;
    std::string t1 = "inf";
};

double parse_extended_real(const std::string& text, const std::string& flag) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("invalid number '" + text + "' for " + flag, text);
    }
    return value;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ParseError("invalid index '" + item + "' in --f1", item);
        }
        out.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void check_output_path(const std::optional<std::string>& path) {
    if (!path) return;
    const std::filesystem::path parent = std::filesystem::path(*path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw IoError("output directory does not exist: " + parent.string());
    }
}

/// Options that only name output files are left out of the echo so reports do not depend on them.
bool echoed(const CLI::Option* opt) {
    const std::string name = opt->get_name();
    return name != "--help" && name != "--out" && name != "--json" && name != "--svg";
}

/// Numbers are echoed as JSON numbers, everything else verbatim.
Json scalar(const std::string& text) {
    if (text.empty()) return text;
    char* end = nullptr;
    const long long i = std::strtoll(text.c_str(), &end, 10);
    if (*end == '\0') return i;
    const double d = std::strtod(text.c_str(), &end);
    if (*end == '\0' && std::isfinite(d)) return d;
    return text;
}

Json collect_options(const CLI::App& sub) {
    Json options = Json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (!echoed(opt)) continue;
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        if (opt->get_type_size() == 0) {
            options[key] = opt->count() > 0;
        } else if (opt->count() > 0) {
            std::string joined;
            for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
            options[key] = opt->results().size() == 1 ? scalar(joined) : Json(joined);
        } else if (!opt->get_default_str().empty()) {
            options[key] = scalar(opt->get_default_str());
        }
    }
    return options;
}

} // namespace

std::string_view to_string(Command command) {
    for (const auto& [name, value] : command_names) {
        if (value == command) return name;
    }
    return "";
}

ParseResult parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spiral winding toolkit: decay profiles, winding radii, regular subsequences, direction sets, "
                 "bi-Lipschitz map experiments and unwinding certificates."};
    app.name("spiralkit");
    app.set_version_flag("--version", SPIRALKIT_VERSION);
    app.require_subcommand(1, 1);
    app.option_defaults()->always_capture_default();
    app.footer(std::string(profile_grammar) + "\n" + map_grammar);

    RunPlan plan;
    RawOptions raw;
    std::vector<std::string> assert_flags;
    std::map<std::string, bool> asserts;

    auto add_profile = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--profile", raw.profile, profile_grammar);
        if (required) opt->required();
    };
    auto add_map = [&](CLI::App* sub) { sub->add_option("--map", raw.map, map_grammar)->required(); };
    // A required --n is checked after the spec strings so a bad spec is reported first.
    std::vector<const CLI::App*> needs_n;
    auto add_n = [&](CLI::App* sub, bool required) {
        sub->add_option("--n", plan.n, required ? "number of winding radii N (required)" : "number of winding radii N")
            ->check(CLI::Range(2ul, 100'000'000ul));
        if (required) needs_n.push_back(sub);
    };
    auto add_cloud = [&](CLI::App* sub) {
        sub->add_option("--points", plan.points, "input point cloud CSV with header x,y")->check(CLI::ExistingFile);
        sub->add_option("--windings", plan.windings, "windings sampled from the profile")->check(CLI::Range(1ul, 1'000'000ul));
        sub->add_option("--per-winding", plan.per_winding, "samples per winding")->check(CLI::Range(3ul, 1'000'000ul));
    };
    auto add_json = [&](CLI::App* sub) { sub->add_option("--json", plan.json, "JSON report path (stdout if omitted)"); };
    auto add_out = [&](CLI::App* sub, const std::string& what) { sub->add_option("--out", plan.out, what); };
    auto add_svg = [&](CLI::App* sub, const std::string& what) { sub->add_option("--svg", plan.svg, what); };
    auto add_assert = [&](CLI::App* sub, const std::string& name, const std::string& what) {
        sub->add_flag("--assert-" + name, asserts[name], what + "; exit 1 when it does not hold");
    };
    auto add_variant = [&](CLI::App* sub) {
        sub->add_option("--variant", raw.variant, "certificate variant")->check(CLI::IsMember({"paper", "arclength"}));
        sub->add_option("--tol", plan.tol, "quadrature tolerance for the arclength variant")->check(CLI::PositiveNumber);
    };

    auto* profiles = app.add_subcommand("profiles", "sample a spiral polyline and report its length");
    add_profile(profiles, true);
    profiles->add_option("--windings", plan.windings, "windings to sample")->check(CLI::Range(1ul, 1'000'000ul));
    profiles->add_option("--per-winding", plan.per_winding, "samples per winding")->check(CLI::Range(3ul, 1'000'000ul));
    profiles->add_option("--tol", plan.tol, "arc length tolerance")->check(CLI::PositiveNumber);
    profiles->add_option("--overlay", plan.overlay, "render winding k closed by its radial gap instead of the spiral")
        ->check(CLI::PositiveNumber);
    add_out(profiles, "polyline CSV t,x,y");
    add_svg(profiles, "spiral SVG");
    add_json(profiles);
    profiles->footer(profile_grammar);

    auto* radii = app.add_subcommand("radii", "winding radii and the sub-exponential decay verdict");
    add_profile(radii, true);
    add_n(radii, true);
    radii->add_option("--window", plan.window, "trailing window for the decay trace (>= 10)");
    radii->add_option("--threshold", plan.threshold, "decay trace threshold")->check(CLI::PositiveNumber);
    add_out(radii, "radii CSV n,r,a,b");
    add_json(radii);
    radii->footer(profile_grammar);

    auto* subseq = app.add_subcommand("subseq", "build the exceptional union and extract the regular subsequence");
    add_profile(subseq, true);
    add_n(subseq, true);
    subseq->add_option("--m-max", plan.m_max, "highest level m")->check(CLI::Range(1ul, 100'000ul));
    subseq->add_option("--f1", raw.f1, "explicit cutoffs f1(1),f1(2),... (comma separated)");
    subseq->add_option("--threshold", plan.threshold, "decay trace threshold")->check(CLI::PositiveNumber);
    add_out(subseq, "retained indices CSV n,ratio");
    add_json(subseq);
    add_assert(subseq, "regular", "require a successful extraction");
    subseq->footer(profile_grammar);

    auto* certify = app.add_subcommand("certify", "per-winding lower bounds on any segment-unwinding map");
    add_profile(certify, true);
    add_n(certify, true);
    add_variant(certify);
    certify->add_option("--budget", plan.budget, "draw this constant on the SVG")->check(CLI::PositiveNumber);
    add_out(certify, "certificate CSV n,r_n,r_next,L_min,running_max");
    add_svg(certify, "certificate step plot SVG");
    add_json(certify);
    certify->footer(profile_grammar);

    auto* refute = app.add_subcommand("refute", "first winding where a claimed constant is impossible");
    add_profile(refute, true);
    add_n(refute, true);
    add_variant(refute);
    refute->add_option("--claimed-l", plan.claimed_l, "claimed bi-Lipschitz constant (>= 1)")
        ->required()
        ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
    add_json(refute);
    add_assert(refute, "refuted", "require a refutation");
    refute->footer(profile_grammar);

    auto* directions = app.add_subcommand("directions", "asymptotic direction set of a point cloud at the origin");
    add_profile(directions, false);
    add_cloud(directions);
    directions->add_option("--bin-deg", plan.bin_deg, "angular bin width in degrees (must divide 360)")
        ->check(CLI::PositiveNumber);
    directions->add_option("--start-layer", plan.start_layer, "first layer required for persistence (default K/2)");
    add_svg(directions, "annular heatmap SVG");
    add_json(directions);
    add_assert(directions, "unwinded", "require a missed direction");
    directions->footer(profile_grammar);

    auto* ssp = app.add_subcommand("ssp", "selection property: annulus coverage and SSP defects");
    add_profile(ssp, true);
    add_cloud(ssp);
    add_n(ssp, false);
    ssp->add_option("--directions", plan.directions, "size of the direction grid")->check(CLI::Range(1ul, 100'000ul));
    ssp->add_option("--delta0", plan.delta0, "tolerance delta_n = delta0 n^-exponent (radians)")->check(CLI::PositiveNumber);
    ssp->add_option("--exponent", plan.exponent, "tolerance decay exponent")->check(CLI::NonNegativeNumber);
    ssp->add_option("--scales", plan.ssp_scales, "geometric t-grid size for SSP defects")->check(CLI::Range(1ul, 10'000ul));
    add_json(ssp);
    add_assert(ssp, "ssp", "require the annulus coverage to pass on a regular subsequence");
    ssp->footer(profile_grammar);

    auto* apply = app.add_subcommand("map-apply", "apply a planar map to a point cloud");
    add_map(apply);
    apply->add_option("--points", plan.points, "input CSV x,y")->required()->check(CLI::ExistingFile);
    apply->add_flag("--inverse", plan.inverse, "apply the inverse map");
    apply->add_option("--out", plan.out, "output CSV x,y")->required();
    apply->footer(map_grammar);

    auto* distortion = app.add_subcommand("map-distortion", "sampled lower bound on a map's bi-Lipschitz constant");
    add_map(distortion);
    distortion->add_option("--pairs", plan.pairs, "random pairs (>= 1000)")->check(CLI::Range(1000ul, 1'000'000'000ul));
    distortion->add_option("--seed", plan.seed, "generator seed");
    distortion->add_option("--inner", plan.inner, "inner radius of the sampling annulus (0 = disk)")
        ->check(CLI::NonNegativeNumber);
    distortion->add_option("--outer", plan.outer, "outer radius")->check(CLI::PositiveNumber);
    add_json(distortion);
    add_assert(distortion, "declared", "require the estimate to stay within the declared constant");
    distortion->footer(map_grammar);

    auto* limit = app.add_subcommand("rescale-limit", "grid limit of the rescaled family h(r_k x)/r_k");
    add_map(limit);
    limit->add_option("--log-step", plan.log_step, "scales r_k = exp(-k * step); default 2 pi")->check(CLI::PositiveNumber);
    limit->add_option("--members", plan.members, "family size (>= 20)")->check(CLI::Range(20ul, 100'000ul));
    limit->add_option("--tol", plan.tol, "cluster tolerance")->check(CLI::PositiveNumber);
    limit->add_option("--rings", plan.rings, "probe rings in 1/2 <= |x| <= 2")->check(CLI::Range(1ul, 1000ul));
    limit->add_option("--per-ring", plan.per_ring, "probes per ring")->check(CLI::Range(1ul, 100'000ul));
    add_out(limit, "limit table CSV x,y,hx,hy");
    add_svg(limit, "limit table SVG");
    add_json(limit);
    add_assert(limit, "converged", "require a convergent cluster");
    limit->footer(map_grammar);

    auto* transport = app.add_subcommand("transport-check", "transported directions against a target direction set");
    add_map(transport);
    add_profile(transport, true);
    transport->add_option("--windings", plan.windings, "windings sampled from the profile")->check(CLI::Range(2ul, 1'000'000ul));
    transport->add_option("--per-winding", plan.per_winding, "samples per winding")->check(CLI::Range(3ul, 1'000'000ul));
    add_n(transport, false);
    transport->add_option("--target-points", plan.target_points, "target cloud CSV x,y (default: image of the spiral)")
        ->check(CLI::ExistingFile);
    transport->add_option("--directions", plan.directions, "size of the direction grid")->check(CLI::Range(1ul, 100'000ul));
    transport->add_option("--angular-tol-deg", plan.angular_tol_deg, "selection tolerance around each direction")
        ->check(CLI::PositiveNumber);
    transport->add_option("--bin-deg", plan.bin_deg, "target bin width in degrees")->check(CLI::PositiveNumber);
    transport->add_option("--start-layer", plan.start_layer, "target persistence start layer");
    transport->add_flag("--all-indices", plan.all_indices, "use every winding instead of the regular subsequence");
    add_json(transport);
    add_assert(transport, "pass", "require the transported directions to land in the target");
    transport->footer(std::string(profile_grammar) + "\n" + map_grammar);

    auto* length = app.add_subcommand("length", "arc length of a spiral, or polygonal length of a mapped segment");
    add_profile(length, false);
    length->add_option("--map", raw.map, map_grammar);
    length->add_option("--t0", plan.t0, "start parameter")->check(CLI::NonNegativeNumber);
    length->add_option("--t1", raw.t1, "end parameter or inf");
    length->add_option("--tol", plan.tol, "absolute tolerance")->check(CLI::PositiveNumber);
    length->add_option("--a", plan.a, "segment start on the x-axis");
    length->add_option("--b", plan.b, "segment end on the x-axis");
    length->add_option("--pieces", plan.pieces, "initial uniform partition size")->check(CLI::Range(1ul, 10'000'000ul));
    add_json(length);
    length->footer(std::string(profile_grammar) + "\n" + map_grammar);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {std::nullopt, code == 0 ? exit_code::ok : exit_code::usage};
    }

    const CLI::App* chosen = app.get_subcommands().front();
    plan.command = command_names.at(chosen->get_name());
    plan.options = collect_options(*chosen);
    for (const auto& [name, set] : asserts) {
        if (set && chosen->get_option_no_throw("--assert-" + name)) plan.assertion = name;
    }

    try {
        if (!raw.profile.empty()) plan.profile = parse_profile_spec(raw.profile);
        if (!raw.map.empty()) plan.map = parse_map_spec(raw.map);
        plan.variant = parse_variant(raw.variant);
        if (std::find(needs_n.begin(), needs_n.end(), chosen) != needs_n.end() && chosen->count("--n") == 0) {
            throw ParameterError("--n is required");
        }
        if (!raw.f1.empty()) plan.f1 = parse_index_list(raw.f1);
        plan.t1 = parse_extended_real(raw.t1, "--t1");
        if (plan.log_step == 0.0) plan.log_step = two_pi;
        if (plan.command == Command::RescaleLimit) {
            if (chosen->get_option("--tol")->count() == 0) plan.tol = 0.05;
            plan.options["log-step"] = plan.log_step;
            plan.options["tol"] = plan.tol;
        }

        switch (plan.command) {
        case Command::Directions:
            if (plan.points.empty() && !plan.profile) throw ParameterError("directions needs --points or --profile");
            break;
        case Command::Length:
            if (plan.profile.has_value() == plan.map.has_value()) {
                throw ParameterError("length needs exactly one of --profile or --map");
            }
            if (plan.map && !(plan.a < plan.b)) throw ParameterError("segment needs a < b");
            if (plan.profile && !(plan.t1 > plan.t0)) throw ParameterError("length needs t1 > t0");
            break;
        default: break;
        }
        check_output_path(plan.out);
        check_output_path(plan.json);
        check_output_path(plan.svg);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return {std::nullopt, exit_code::io};
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return {std::nullopt, exit_code::usage};
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return {std::nullopt, exit_code::usage};
    }
    return {std::move(plan), exit_code::ok};
}

namespace {

void emit(const RunPlan& plan, Json report, std::ostream& out) {
    report["tool_version"] = SPIRALKIT_VERSION;
    report["command"] = std::string(to_string(plan.command));
    report["options"] = plan.options;
    if (plan.json) {
        write_json(*plan.json, report);
    } else {
        out << report.dump(2) << "\n";
    }
}

int verdict_code(const RunPlan& plan, bool holds) {
    return plan.assertion && !holds ? exit_code::assertion_failed : exit_code::ok;
}

PointCloud plan_cloud(const RunPlan& plan) {
    if (!plan.points.empty()) return read_point_cloud(plan.points);
    return sample_spiral(*plan.profile, plan.windings, plan.per_winding).points;
}

int run_profiles(const RunPlan& plan, std::ostream& out) {
    const DecayProfile& profile = *plan.profile;
    const SpiralPolyline line = sample_spiral(profile, plan.windings, plan.per_winding);
    if (plan.out) write_polyline_csv(*plan.out, line);
    if (plan.svg) {
        render_svg(plan.overlay ? svg_winding_overlay(profile, *plan.overlay, plan.per_winding) : svg_spiral(line), *plan.svg);
    }
    const double t_end = two_pi * static_cast<double>(plan.windings);
    Json report = {{"profile", profile.id()},
                   {"windings", plan.windings},
                   {"per_winding", plan.per_winding},
                   {"points", line.points.size()},
                   {"polyline_length", polyline_length(line.points)},
                   {"arc_length", arc_length_json(arc_length(profile, 0.0, std::min(t_end, profile.max_t()), plan.tol))},
                   {"total_length", arc_length_json(arc_length(profile, 0.0, profile.max_t(), plan.tol))}};
    emit(plan, std::move(report), out);
    return exit_code::ok;
}

int run_radii(const RunPlan& plan, std::ostream& out) {
    const RadiiSequence radii = winding_radii(*plan.profile, plan.n);
    if (plan.out) write_radii_csv(*plan.out, radii);
    Json report = {{"profile", plan.profile->id()}, {"N", plan.n}};
    if (plan.n >= 10) {
        report["classification"] = classification_json(
            subexp_classify(radii, plan.window.value_or(default_window(plan.n)), plan.threshold));
    } else {
        report["classification"] = nullptr;
    }
    emit(plan, std::move(report), out);
    return exit_code::ok;
}

int run_subseq(const RunPlan& plan, std::ostream& out) {
    const RadiiSequence radii = winding_radii(*plan.profile, plan.n);
    ExtractionOptions options;
    options.m_max = plan.m_max;
    options.threshold = plan.threshold;
    if (!plan.f1.empty()) options.f1_table = plan.f1;
    const RegularSubsequence sub = extract_regular_subsequence(radii, options);
    ClaimReport claims;
    if (plan.n >= 100) claims = verify_claim_bounds(radii, sub.extraction);
    if (plan.out) write_subsequence_csv(*plan.out, sub);
    Json report = extraction_json(sub, claims);
    report["profile"] = plan.profile->id();
    emit(plan, std::move(report), out);
    return verdict_code(plan, sub.success);
}

Certificate plan_certificate(const RunPlan& plan) {
    return winding_certificate(winding_radii(*plan.profile, plan.n), plan.variant, plan.tol);
}

int run_certify(const RunPlan& plan, std::ostream& out) {
    const Certificate cert = plan_certificate(plan);
    if (plan.out) write_certificate_csv(*plan.out, cert);
    if (plan.svg) render_svg(svg_certificate(cert, plan.budget), *plan.svg);
    emit(plan, certificate_json(cert), out);
    return exit_code::ok;
}

int run_refute(const RunPlan& plan, std::ostream& out) {
    const Refutation r = refute_unwinding(plan_certificate(plan), plan.claimed_l);
    Json report = refutation_json(r);
    report["profile"] = plan.profile->id();
    emit(plan, std::move(report), out);
    return verdict_code(plan, r.verdict == RefutationVerdict::RefutedAtIndex);
}

int run_directions(const RunPlan& plan, std::ostream& out) {
    DirectionOptions options;
    options.bin_width = deg_to_rad(plan.bin_deg);
    options.start_layer = plan.start_layer;
    const DirectionSet ds = estimate_direction_set(plan_cloud(plan), {0.0, 0.0}, options);
    const UnwindVerdict verdict = is_unwinded(ds);
    if (plan.svg) render_svg(svg_direction_set(ds), *plan.svg);
    emit(plan, direction_json(ds, verdict), out);
    return verdict_code(plan, verdict.unwinded);
}

int run_ssp(const RunPlan& plan, std::ostream& out) {
    const std::size_t count = plan.n >= 2 ? plan.n : plan.windings;
    const RadiiSequence radii = winding_radii(*plan.profile, std::max<std::size_t>(count, 2));
    const RegularSubsequence sub = extract_regular_subsequence(radii);
    const PointCloud cloud = plan_cloud(plan);
    const auto grid = direction_grid(plan.directions);
    const TildeSspReport tilde = tilde_ssp_check(cloud, {0.0, 0.0}, radii, sub, grid, {plan.delta0, plan.exponent});

    // Geometric t-grid between the outermost and innermost winding radii.
    std::vector<double> scales(plan.ssp_scales);
    const double hi = radii.log_radius(1);
    const double lo = radii.log_radius(radii.size());
    for (std::size_t j = 0; j < scales.size(); ++j) {
        const double s = scales.size() == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(scales.size() - 1);
        scales[j] = std::exp(hi + s * (lo - hi));
    }
    const std::size_t ssp_dirs = std::min<std::size_t>(plan.directions, 36);
    Json report = {{"profile", plan.profile->id()},
                   {"N", radii.size()},
                   {"tilde_ssp", tilde_ssp_json(tilde)},
                   {"ssp_defects", ssp_report_json(ssp_report(cloud, {0.0, 0.0}, direction_grid(ssp_dirs), scales))}};
    emit(plan, std::move(report), out);
    return verdict_code(plan, tilde.holds);
}

int run_map_apply(const RunPlan& plan) {
    const PointCloud cloud = read_point_cloud(plan.points);
    write_point_cloud(*plan.out, plan.inverse ? apply_inverse(*plan.map, cloud) : apply_map(*plan.map, cloud));
    return exit_code::ok;
}

int run_map_distortion(const RunPlan& plan, std::ostream& out) {
    const Region region{{0.0, 0.0}, plan.inner, plan.outer};
    const DistortionEstimate d = distortion_estimate(*plan.map, region, plan.pairs, plan.seed);
    emit(plan, distortion_json(d, *plan.map, region), out);
    const auto lip = plan.map->declared_lipschitz();
    return verdict_code(plan, !lip || d.l_est <= *lip + 1e-9);
}

int run_rescale_limit(const RunPlan& plan, std::ostream& out) {
    std::vector<double> scales(plan.members);
    for (std::size_t k = 0; k < plan.members; ++k) scales[k] = std::exp(-plan.log_step * static_cast<double>(k + 1));
    const RescaledFamily family = rescaled_family(*plan.map, std::move(scales));
    const LimitTable table = aa_limit(family, probe_grid(plan.rings, plan.per_ring), plan.tol);
    if (plan.out && table.converged) write_limit_csv(*plan.out, table);
    if (plan.svg) render_svg(svg_limit_table(table), *plan.svg);
    emit(plan, limit_json(table, family), out);
    return verdict_code(plan, table.converged);
}

int run_transport(const RunPlan& plan, std::ostream& out) {
    const std::size_t count = plan.n >= 2 ? plan.n : plan.windings;
    const RadiiSequence radii = winding_radii(*plan.profile, count);
    const PointCloud cloud = sample_spiral(*plan.profile, plan.windings, plan.per_winding).points;
    const PointCloud target_cloud = plan.target_points.empty() ? apply_map(*plan.map, cloud) : read_point_cloud(plan.target_points);
    DirectionOptions dopt;
    dopt.bin_width = deg_to_rad(plan.bin_deg);
    dopt.start_layer = plan.start_layer;
    const DirectionSet target = estimate_direction_set(target_cloud, {0.0, 0.0}, dopt);

    IndexSet indices;
    bool regular = false;
    if (plan.all_indices) {
        for (std::size_t n = 1; n < count; ++n) indices.push_back(n);
    } else {
        const RegularSubsequence sub = extract_regular_subsequence(radii);
        indices = sub.indices;
        regular = sub.success;
    }
    TransportOptions topt;
    topt.directions = direction_grid(plan.directions);
    topt.angular_tol = deg_to_rad(plan.angular_tol_deg);
    const TransportReport report = transported_direction_check(*plan.map, cloud, {0.0, 0.0}, radii, indices, target, topt);
    Json j = transport_json(report);
    j["profile"] = plan.profile->id();
    j["map"] = plan.map->name();
    j["regular_subsequence"] = regular;
    j["target_persistent_bins"] = target.persistent.size();
    emit(plan, std::move(j), out);
    return verdict_code(plan, report.pass);
}

int run_length(const RunPlan& plan, std::ostream& out) {
    Json report;
    if (plan.profile) {
        report = arc_length_json(arc_length(*plan.profile, plan.t0, plan.t1, plan.tol));
        report["profile"] = plan.profile->id();
    } else {
        std::vector<double> partition(plan.pieces + 1);
        for (std::size_t i = 0; i <= plan.pieces; ++i) {
            partition[i] = plan.a + (plan.b - plan.a) * static_cast<double>(i) / static_cast<double>(plan.pieces);
        }
        partition.back() = plan.b;
        const PartitionLength len = partition_length(*plan.map, plan.a, plan.b, partition);
        report = partition_json(len);
        report["map"] = plan.map->name();
        const auto lip = plan.map->declared_lipschitz();
        if (lip) {
            report["sandwich"] = {{"lower", (plan.b - plan.a) / *lip}, {"upper", *lip * (plan.b - plan.a)}};
        }
    }
    emit(plan, std::move(report), out);
    return exit_code::ok;
}

} // namespace

int execute(const RunPlan& plan, std::ostream& out, std::ostream& /*err*/) {
    switch (plan.command) {
    case Command::Profiles: return run_profiles(plan, out);
    case Command::Radii: return run_radii(plan, out);
    case Command::Subseq: return run_subseq(plan, out);
    case Command::Certify: return run_certify(plan, out);
    case Command::Refute: return run_refute(plan, out);
    case Command::Directions: return run_directions(plan, out);
    case Command::Ssp: return run_ssp(plan, out);
    case Command::MapApply: return run_map_apply(plan);
    case Command::MapDistortion: return run_map_distortion(plan, out);
    case Command::RescaleLimit: return run_rescale_limit(plan, out);
    case Command::TransportCheck: return run_transport(plan, out);
    case Command::Length: return run_length(plan, out);
    }
    return exit_code::usage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ParseResult parsed = parse(argc, argv, out, err);
    if (!parsed.plan) return parsed.exit_code;
    try {
        return execute(*parsed.plan, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::io;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::numerical;
    }
}

} // namespace spiral
