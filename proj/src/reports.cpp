#include "spiral/reports.hpp"

#include "spiral/io.hpp"

#include <cmath>

namespace spiral {

namespace {

Json checks_json(const ClaimSeries& series) {
    Json checks = Json::array();
    for (const auto& c : series.checks) {
        checks.push_back({{"checkpoint", c.checkpoint}, {"count", c.count}, {"bound", c.bound}, {"holds", c.holds}});
    }
    Json out = {{"checks", checks}, {"violations_after_n0", series.violations_after}, {"holds_from_n0", series.holds_from_n0()}};
    out["n0"] = series.n0 ? Json(*series.n0) : Json(nullptr);
    if (series.m > 0) out["m"] = series.m;
    return out;
}

} // namespace

Json classification_json(const DecayClassification& c) {
    Json trace = Json::array();
    for (const auto& p : c.trace) trace.push_back({{"n", p.n}, {"value", p.value}});
    Json out = {{"verdict", to_string(c.verdict)},
                {"trace_verdict", to_string(c.trace_verdict)},
                {"final_value", c.final_value},
                {"limit_estimate", c.limit_estimate},
                {"slope", c.slope},
                {"threshold", c.threshold},
                {"trace", trace}};
    out["closed_form_verdict"] = c.closed_form_verdict ? Json(to_string(*c.closed_form_verdict)) : Json(nullptr);
    return out;
}

Json extraction_json(const RegularSubsequence& sub, const ClaimReport& claims) {
    const SubsequenceExtraction& ex = sub.extraction;
    Json density = Json::array();
    for (const auto& d : ex.density_trace) {
        density.push_back({{"checkpoint", d.checkpoint}, {"count", d.count}, {"density", d.density}});
    }
    Json claim1 = Json::array();
    Json n0_table = Json::array();
    for (const auto& series : claims.per_level) {
        claim1.push_back(checks_json(series));
        n0_table.push_back({{"m", series.m}, {"n0", series.n0 ? Json(*series.n0) : Json(nullptr)}});
    }
    Json out = {{"N", ex.count},
                {"verdict", to_string(ex.verdict)},
                {"f1", ex.f1},
                {"f1_auto", ex.f1_auto},
                {"f2_final", ex.f2_final()},
                {"levels", ex.levels},
                {"density_trace", density},
                {"ratio_diag", sub.diagnostic},
                {"ratio_threshold", sub.threshold},
                {"regular", sub.success},
                {"exceptional_count", ex.exceptional_union.size()},
                {"retained_count", ex.retained.size()},
                {"growth_diagnostic", ex.growth_diagnostic},
                {"claim1", claim1},
                {"claim1_holds", claims.per_level_holds},
                {"claim2", checks_json(claims.union_bound)},
                {"claim2_holds_at_final", claims.union_holds_at_final},
                {"n0_table", n0_table},
                {"warnings", ex.warnings}};
    out["n0_all"] = claims.n0_all ? Json(*claims.n0_all) : Json(nullptr);
    return out;
}

Json certificate_json(const Certificate& cert) {
    Json out = {{"profile", cert.profile_id},
                {"variant", to_string(cert.variant)},
                {"N", cert.log_radius.size()},
                {"max_bound", cert.running_max.empty() ? 0.0 : cert.running_max.back()},
                {"first_bound", cert.l_min.empty() ? 0.0 : cert.l_min.front()},
                {"last_bound", cert.l_min.empty() ? 0.0 : cert.l_min.back()},
                {"scope", "lower bounds for maps sending the spiral onto a straight segment"}};
    if (cert.variant == CertificateVariant::ArcLength) out["quad_tol"] = cert.quad_tol;
    return out;
}

Json refutation_json(const Refutation& r) {
    Json out = {{"variant", to_string(r.variant)},
                {"L_claimed", r.l_claimed},
                {"verdict", to_string(r.verdict)},
                {"within", r.within}};
    if (r.n_star) {
        out["n_star"] = *r.n_star;
        out["L_min"] = r.l_min;
        out["chain"] = {{"gap", r.gap}, {"winding_lower_bound", r.winding_lower_bound}};
    } else {
        out["n_star"] = nullptr;
        out["chain"] = nullptr;
    }
    return out;
}

Json direction_json(const DirectionSet& ds, const UnwindVerdict& verdict) {
    Json layers = Json::array();
    for (std::size_t k = 0; k < ds.layers(); ++k) {
        std::size_t hit = 0;
        for (bool b : ds.hits[k]) hit += b ? 1 : 0;
        layers.push_back({{"outer", ds.scales[k]}, {"inner", ds.scales[k + 1]}, {"points", ds.layer_points[k]}, {"bins_hit", hit}});
    }
    return {{"bin_width_deg", rad_to_deg(ds.bin_width)},
            {"layers", ds.layers()},
            {"start_layer", ds.start_layer},
            {"persistent_bins", ds.persistent},
            {"max_gap_deg", rad_to_deg(verdict.max_gap)},
            {"verdict", verdict.unwinded ? "Unwinded" : "NotUnwinded"},
            {"empty_layers", ds.empty_layers},
            {"layer_detail", layers}};
}

Json tilde_ssp_json(const TildeSspReport& report) {
    Json annuli = Json::array();
    Json empty = Json::array();
    for (const auto& a : report.annuli) {
        annuli.push_back({{"n", a.n}, {"points", a.points}, {"defect_deg", rad_to_deg(a.defect)},
                          {"tolerance_deg", rad_to_deg(a.tolerance)}, {"pass", a.pass}});
        if (a.empty) empty.push_back(a.n);
    }
    Json out = {{"pass", report.pass},
                {"regular", report.regular},
                {"holds", report.holds},
                {"max_defect_deg", rad_to_deg(report.max_defect)},
                {"directions", report.direction_count},
                {"empty_annuli", empty},
                {"annuli", annuli}};
    out["threshold"] = report.threshold ? Json(*report.threshold) : Json(nullptr);
    return out;
}

Json ssp_report_json(const SspReport& report) {
    Json dirs = Json::array();
    for (double a : report.directions) dirs.push_back(rad_to_deg(a));
    return {{"directions_deg", dirs},
            {"scales", report.scales},
            {"max_per_direction", report.max_per_direction},
            {"max_per_scale", report.max_per_scale},
            {"max_defect", report.max_defect},
            {"unreliable", report.unreliable}};
}

Json distortion_json(const DistortionEstimate& d, const PlanarMap& map, const Region& region) {
    Json out = {{"map", map.name()},
                {"l_est", d.l_est},
                {"kind", "lower bound"},
                {"rho_min", d.rho_min},
                {"rho_max", d.rho_max},
                {"random_pairs", d.random_pairs},
                {"diagonal_pairs", d.diagonal_pairs},
                {"skipped", d.skipped},
                {"region", {{"inner", region.inner}, {"outer", region.outer}}}};
    out["declared_lipschitz"] = map.declared_lipschitz() ? Json(*map.declared_lipschitz()) : Json(nullptr);
    return out;
}

Json limit_json(const LimitTable& table, const RescaledFamily& family) {
    Json out = {{"converged", table.converged},
                {"message", table.message},
                {"members", family.size()},
                {"selected", table.selected},
                {"probes", table.grid.size()},
                {"modulus", table.modulus},
                {"tolerance", table.tolerance}};
    const auto lip = family.base().declared_lipschitz();
    out["declared_lipschitz"] = lip ? Json(*lip) : Json(nullptr);
    if (lip && table.converged) out["modulus_within_bound"] = table.modulus <= *lip + table.tolerance;
    return out;
}

Json transport_json(const TransportReport& report) {
    Json trace = Json::array();
    for (const auto& p : report.trace) {
        trace.push_back({{"k", p.k}, {"n", p.n}, {"skipped", p.skipped}, {"defect_deg", rad_to_deg(p.defect)},
                         {"image_defect_deg", rad_to_deg(p.image_defect)}, {"selection_defect", p.selection_defect}});
    }
    return {{"pass", report.pass},
            {"bin_width_deg", rad_to_deg(report.bin_width)},
            {"skipped", report.skipped},
            {"fraction_above_10deg", report.fraction_above(deg_to_rad(10.0))},
            {"trace", trace}};
}

Json arc_length_json(const ArcLength& length) {
    Json out = {{"verdict", to_string(length.verdict)}, {"error", length.error}};
    out["value"] = length.verdict == LengthVerdict::Infinite ? Json(nullptr) : Json(length.value);
    return out;
}

Json partition_json(const PartitionLength& length) {
    return {{"given", length.given},
            {"refined", length.refined},
            {"pieces", length.pieces},
            {"refinements", length.refinements},
            {"converged", length.converged}};
}

void write_polyline_csv(const std::filesystem::path& path, const SpiralPolyline& line) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(line.points.size());
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        rows.push_back({format_double(line.params[i]), format_double(line.points[i].x), format_double(line.points[i].y)});
    }
    write_csv(path, {"t", "x", "y"}, rows);
}

void write_radii_csv(const std::filesystem::path& path, const RadiiSequence& radii) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(radii.size());
    for (std::size_t n = 1; n <= radii.size(); ++n) {
        rows.push_back({std::to_string(n), format_double(radii.radius(n)), format_double(std::exp(-radii.log_radius(n))),
                        n < radii.size() ? format_double(radii.ratio(n)) : std::string()});
    }
    write_csv(path, {"n", "r", "a", "b"}, rows);
}

void write_certificate_csv(const std::filesystem::path& path, const Certificate& cert) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(cert.size());
    for (std::size_t i = 0; i < cert.size(); ++i) {
        rows.push_back({std::to_string(i + 1), format_double(std::exp(cert.log_radius[i])),
                        format_double(std::exp(cert.log_radius[i + 1])), format_double(cert.l_min[i]),
                        format_double(cert.running_max[i])});
    }
    write_csv(path, {"n", "r_n", "r_next", "L_min", "running_max"}, rows);
}

void write_limit_csv(const std::filesystem::path& path, const LimitTable& table) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < table.limit.size(); ++i) {
        rows.push_back({format_double(table.grid[i].x), format_double(table.grid[i].y), format_double(table.limit[i].x),
                        format_double(table.limit[i].y)});
    }
    write_csv(path, {"x", "y", "hx", "hy"}, rows);
}

void write_subsequence_csv(const std::filesystem::path& path, const RegularSubsequence& sub) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(sub.indices.size());
    for (std::size_t k = 0; k < sub.indices.size(); ++k) {
        rows.push_back({std::to_string(sub.indices[k]), format_double(sub.ratio_trace[k])});
    }
    write_csv(path, {"n", "ratio"}, rows);
}

void write_json(const std::filesystem::path& path, const Json& report) { write_text(path, report.dump(2) + "\n"); }

} // namespace spiral
