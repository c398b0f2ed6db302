#include "spiral/certificate.hpp"

#include "spiral/errors.hpp"
#include "spiral/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace spiral {

std::string_view to_string(CertificateVariant variant) {
    return variant == CertificateVariant::PaperConstant ? "paper" : "arclength";
}

CertificateVariant parse_variant(std::string_view text) {
    if (text == "paper") return CertificateVariant::PaperConstant;
    if (text == "arclength") return CertificateVariant::ArcLength;
    throw ParseError("unknown certificate variant '" + std::string(text) + "'", std::string(text));
}

std::string_view to_string(RefutationVerdict verdict) {
    return verdict == RefutationVerdict::RefutedAtIndex ? "RefutedAtIndex" : "NotRefutedWithin";
}

Certificate winding_certificate(const RadiiSequence& radii, CertificateVariant variant, double quad_tol) {
    const std::size_t count = radii.size();
    if (count < 2) throw ParameterError("N must be >= 2");
    Certificate cert;
    cert.variant = variant;
    cert.profile_id = radii.profile() ? radii.profile()->id() : radii.label();
    cert.log_radius.resize(count);
    for (std::size_t n = 1; n <= count; ++n) cert.log_radius[n - 1] = radii.log_radius(n);
    cert.winding_rel.resize(count - 1);
    cert.l_min.resize(count - 1);

    if (variant == CertificateVariant::ArcLength) {
        if (!radii.profile()) throw CapabilityError("the arc-length certificate needs a profile, not bare radii");
        if (!(quad_tol > 0.0)) throw ParameterError("tol must be > 0");
        cert.quad_tol = quad_tol;
        const DecayProfile& profile = *radii.profile();
        parallel_for(count - 1, [&](std::size_t i) {
            const double t0 = two_pi * static_cast<double>(i);
            const ArcLength len = arc_length_relative(profile, t0, t0 + two_pi, quad_tol);
            cert.winding_rel[i] = len.value;
        });
    } else {
        for (std::size_t n = 1; n < count; ++n) cert.winding_rel[n - 1] = std::exp(-radii.log_ratio(n));
    }

    for (std::size_t n = 1; n < count; ++n) {
        // (r_n - r_{n+1}) / r_n without cancellation.
        const double gap_rel = -std::expm1(-radii.log_ratio(n));
        cert.l_min[n - 1] = std::sqrt(cert.winding_rel[n - 1] / gap_rel);
    }
    cert.running_max.resize(count - 1);
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        best = std::max(best, cert.l_min[i]);
        cert.running_max[i] = best;
    }
    return cert;
}

Refutation refute_unwinding(const Certificate& certificate, double l_claimed) {
    if (!(l_claimed >= 1.0)) throw ParameterError("claimed L must be >= 1");
    Refutation out;
    out.variant = certificate.variant;
    out.l_claimed = l_claimed;
    out.within = certificate.log_radius.size();
    for (std::size_t i = 0; i < certificate.l_min.size(); ++i) {
        if (certificate.l_min[i] > l_claimed) {
            const double r = std::exp(certificate.log_radius[i]);
            out.verdict = RefutationVerdict::RefutedAtIndex;
            out.n_star = i + 1;
            out.gap = -r * std::expm1(certificate.log_radius[i + 1] - certificate.log_radius[i]);
            out.winding_lower_bound = r * certificate.winding_rel[i];
            out.l_min = certificate.l_min[i];
            break;
        }
    }
    return out;
}

} // namespace spiral
