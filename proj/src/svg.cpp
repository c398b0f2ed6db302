#include "spiral/svg.hpp"

#include "spiral/errors.hpp"
#include "spiral/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spiral {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

std::string header(double x, double y, double w, double h, int px_w, int px_h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(px_w) + "\" height=\"" +
           std::to_string(px_h) + "\" viewBox=\"" + num(x) + " " + num(y) + " " + num(w) + " " + num(h) + "\">\n";
}

const char* const footer = "</svg>\n";

} // namespace

std::string svg_spiral(const SpiralPolyline& line) {
    if (line.points.empty()) throw PreconditionError("nothing to render: the polyline is empty");
    double extent = 0.0;
    for (const Point2& p : line.points) extent = std::max({extent, std::abs(p.x - line.origin.x), std::abs(p.y - line.origin.y)});
    if (extent == 0.0) extent = 1.0;
    const double pad = 0.05 * extent;
    const double half = extent + pad;
    std::ostringstream out;
    out << header(-half, -half, 2 * half, 2 * half, 800, 800);
    out << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"" << num(extent / 600.0) << "\" points=\"";
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        const Point2 p = line.points[i] - line.origin;
        out << (i ? " " : "") << num(p.x) << "," << num(-p.y);
    }
    out << "\"/>\n";
    out << "<circle cx=\"0\" cy=\"0\" r=\"" << num(extent / 100.0) << "\" fill=\"#c0392b\"/>\n";
    out << footer;
    return out.str();
}

std::string svg_certificate(const Certificate& cert, std::optional<double> budget) {
    if (cert.l_min.empty()) throw PreconditionError("nothing to render: the certificate is empty");
    const double width = 800, height = 400, margin = 50;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : cert.l_min) {
        if (v > 0.0 && std::isfinite(v)) {
            lo = std::min(lo, std::log10(v));
            hi = std::max(hi, std::log10(v));
        }
    }
    if (budget && *budget > 0.0) {
        lo = std::min(lo, std::log10(*budget));
        hi = std::max(hi, std::log10(*budget));
    }
    if (!std::isfinite(lo)) throw PreconditionError("nothing to render: no positive bound");
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double count = static_cast<double>(cert.l_min.size());
    auto xs = [&](double n) { return margin + (n - 1.0) / std::max(1.0, count) * (width - 2 * margin); };
    auto ys = [&](double v) { return height - margin - (std::log10(v) - lo) / (hi - lo) * (height - 2 * margin); };

    std::ostringstream out;
    out << header(0, 0, width, height, 800, 400);
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    out << "<path fill=\"none\" stroke=\"#1f4e79\" d=\"";
    for (std::size_t i = 0; i < cert.l_min.size(); ++i) {
        const double v = std::max(cert.l_min[i], std::pow(10.0, lo));
        const double x0 = xs(static_cast<double>(i + 1));
        const double x1 = xs(static_cast<double>(i + 2));
        out << (i ? " L" : "M") << num(x0) << " " << num(ys(v)) << " L" << num(x1) << " " << num(ys(v));
    }
    out << "\"/>\n";
    if (budget) {
        out << "<line x1=\"" << margin << "\" y1=\"" << num(ys(*budget)) << "\" x2=\"" << width - margin << "\" y2=\""
            << num(ys(*budget)) << "\" stroke=\"#c0392b\" stroke-dasharray=\"4 4\"/>\n";
    }
    out << "<text x=\"" << margin << "\" y=\"" << margin - 10 << "\" font-size=\"12\">L_min(n), log10 range ["
        << num(lo) << ", " << num(hi) << "], " << cert.profile_id << " (" << to_string(cert.variant) << ")</text>\n";
    out << footer;
    return out.str();
}

std::string svg_direction_set(const DirectionSet& ds) {
    if (ds.layers() == 0 || ds.persistent.empty()) throw PreconditionError("nothing to render: the direction set is empty");
    const double rings = static_cast<double>(ds.layers());
    const double inner = 0.2;
    const double step = (1.0 - inner) / (rings + 1.0);
    auto wedge = [&](double r0, double r1, double a0, double a1) {
        const Point2 p0 = r1 * unit_vector(a0), p1 = r1 * unit_vector(a1);
        const Point2 q1 = r0 * unit_vector(a1), q0 = r0 * unit_vector(a0);
        return "M" + num(p0.x) + " " + num(-p0.y) + " A" + num(r1) + " " + num(r1) + " 0 0 0 " + num(p1.x) + " " +
               num(-p1.y) + " L" + num(q1.x) + " " + num(-q1.y) + " A" + num(r0) + " " + num(r0) + " 0 0 1 " +
               num(q0.x) + " " + num(-q0.y) + " Z";
    };
    std::ostringstream out;
    out << header(-1.05, -1.05, 2.1, 2.1, 800, 800);
    for (std::size_t k = 0; k < ds.layers(); ++k) {
        // Outermost scale on the outside.
        const double r1 = 1.0 - step * static_cast<double>(k + 1);
        const double r0 = r1 - step;
        const char* fill = k >= ds.start_layer ? "#1f4e79" : "#7f8c8d";
        out << "<path fill=\"" << fill << "\" d=\"";
        for (std::size_t b = 0; b < ds.bin_count; ++b) {
            if (!ds.hits[k][b]) continue;
            const double a0 = static_cast<double>(b) * ds.bin_width;
            out << wedge(r0, r1, a0, a0 + ds.bin_width) << " ";
        }
        out << "\"/>\n";
    }
    out << "<path fill=\"#c0392b\" d=\"";
    for (std::size_t b : ds.persistent) {
        const double a0 = static_cast<double>(b) * ds.bin_width;
        out << wedge(1.0 - step * 0.8, 1.0, a0, a0 + ds.bin_width) << " ";
    }
    out << "\"/>\n";
    out << "<circle cx=\"0\" cy=\"0\" r=\"0.01\" fill=\"black\"/>\n";
    out << footer;
    return out.str();
}

std::string svg_limit_table(const LimitTable& table) {
    if (table.limit.empty()) throw PreconditionError("nothing to render: the limit table is empty");
    double extent = 0.0;
    for (std::size_t i = 0; i < table.limit.size(); ++i) {
        extent = std::max({extent, std::abs(table.grid[i].x), std::abs(table.grid[i].y), std::abs(table.limit[i].x),
                           std::abs(table.limit[i].y)});
    }
    const double half = 1.1 * extent;
    std::ostringstream out;
    out << header(-half, -half, 2 * half, 2 * half, 800, 800);
    const std::string w = num(extent / 300.0);
    for (std::size_t i = 0; i < table.limit.size(); ++i) {
        const Point2 x = table.grid[i], h = table.limit[i];
        out << "<line x1=\"" << num(x.x) << "\" y1=\"" << num(-x.y) << "\" x2=\"" << num(h.x) << "\" y2=\"" << num(-h.y)
            << "\" stroke=\"#95a5a6\" stroke-width=\"" << w << "\"/>\n";
        out << "<circle cx=\"" << num(x.x) << "\" cy=\"" << num(-x.y) << "\" r=\"" << num(extent / 150.0)
            << "\" fill=\"#1f4e79\"/>\n";
        out << "<circle cx=\"" << num(h.x) << "\" cy=\"" << num(-h.y) << "\" r=\"" << num(extent / 150.0)
            << "\" fill=\"#c0392b\"/>\n";
    }
    out << footer;
    return out.str();
}

std::string svg_winding_overlay(const DecayProfile& profile, std::size_t n, std::size_t per_winding) {
    if (n < 1) throw PreconditionError("nothing to render: winding index must be >= 1");
    if (per_winding < 3) throw ParameterError("per_winding must be >= 3");
    const double t0 = two_pi * static_cast<double>(n - 1);
    const double shift = profile.log_value(t0);
    std::ostringstream out;
    out << header(-1.1, -1.1, 2.2, 2.2, 800, 800);
    out << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"0.006\" points=\"";
    for (std::size_t j = 0; j <= per_winding; ++j) {
        const double s = two_pi * static_cast<double>(j) / static_cast<double>(per_winding);
        const double r = std::exp(profile.log_value(t0 + s) - shift);
        out << (j ? " " : "") << num(r * std::cos(s)) << "," << num(-r * std::sin(s));
    }
    out << "\"/>\n";
    const double next = std::exp(profile.log_value(t0 + two_pi) - shift);
    out << "<line x1=\"" << num(next) << "\" y1=\"0\" x2=\"1\" y2=\"0\" stroke=\"#c0392b\" stroke-width=\"0.012\"/>\n";
    out << "<circle cx=\"0\" cy=\"0\" r=\"0.012\" fill=\"black\"/>\n";
    out << footer;
    return out.str();
}

void render_svg(const std::string& svg, const std::filesystem::path& path) { write_text(path, svg); }

} // namespace spiral
