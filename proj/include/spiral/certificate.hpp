#pragma once

#include "spiral/radii.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

enum class CertificateVariant { PaperConstant, ArcLength };

std::string_view to_string(CertificateVariant variant);
/// "paper" or "arclength".
CertificateVariant parse_variant(std::string_view text);

/// Per-winding lower bounds on the constant of any bi-Lipschitz map sending the
/// spiral onto a straight segment:
///   L_min(n)^2 = w_n / (r_n - r_{n+1})
/// where w_n is r_{n+1} (PaperConstant) or the length of the n-th winding (ArcLength).
struct Certificate {
    std::string profile_id;
    CertificateVariant variant = CertificateVariant::PaperConstant;
    double quad_tol = 0.0;            ///< ArcLength only
    std::vector<double> log_radius;   ///< ln r_n, n = 1..N
    std::vector<double> winding_rel;  ///< w_n / r_n, n = 1..N-1
    std::vector<double> l_min;        ///< n = 1..N-1
    std::vector<double> running_max;

    std::size_t size() const noexcept { return l_min.size(); }
    double bound(std::size_t n) const { return l_min.at(n - 1); }
};

Certificate winding_certificate(const RadiiSequence& radii, CertificateVariant variant = CertificateVariant::PaperConstant,
                                double quad_tol = 1e-10);

enum class RefutationVerdict { RefutedAtIndex, NotRefutedWithin };

std::string_view to_string(RefutationVerdict verdict);

struct Refutation {
    CertificateVariant variant = CertificateVariant::PaperConstant;
    double l_claimed = 0.0;
    RefutationVerdict verdict = RefutationVerdict::NotRefutedWithin;
    std::optional<std::size_t> n_star;
    std::size_t within = 0; ///< N
    /// Chain at n*: L (r_n - r_{n+1}) >= length(h(I)) >= w_n / L fails.
    double gap = 0.0;
    double winding_lower_bound = 0.0;
    double l_min = 0.0;
};

/// First winding whose bound exceeds the claimed constant. Needs L_claimed >= 1.
Refutation refute_unwinding(const Certificate& certificate, double l_claimed);

} // namespace spiral
