#pragma once

#include "spiral/profiles.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

/// Sorted 1-based indices.
using IndexSet = std::vector<std::size_t>;

/// Closed-form growth bound g with a_n <= g(n), or the data itself.
enum class GrowthKind { Exponential, PowerLaw, StretchedExp, Data };

enum class Monotonicity { Strict, NonIncreasing };

/// Winding radii r_1..r_N, stored as ln r_n.
///
/// Fast profiles push r_n below the smallest double within a few hundred
/// windings, so every ratio and gap is computed from the logarithms.
/// Reciprocals a_n = 1/r_n are recomputed on demand, never stored.
class RadiiSequence {
public:
    /// Radii taken from data; the growth bound defaults to g(n) = a_n.
    static RadiiSequence from_values(const std::vector<double>& radii, Monotonicity mode = Monotonicity::Strict,
                                     std::string label = "data");
    static RadiiSequence from_log_values(std::vector<double> log_radii, Monotonicity mode = Monotonicity::Strict,
                                         std::string label = "data");

    std::size_t size() const noexcept { return log_r_.size(); }

    double log_radius(std::size_t n) const;
    double radius(std::size_t n) const;
    double reciprocal(std::size_t n) const;
    /// ln b_n = ln(a_{n+1}/a_n), defined for 1 <= n < N.
    double log_ratio(std::size_t n) const;
    double ratio(std::size_t n) const;
    /// ln g(n) for the stored growth bound.
    double log_growth(std::size_t n) const;

    GrowthKind growth_kind() const noexcept { return growth_; }
    bool closed_form_growth() const noexcept { return growth_ != GrowthKind::Data; }
    /// Smallest n with a_n >= 1; always 1 because r_n <= 1.
    std::size_t first_unit_index() const noexcept { return n_o_; }
    const std::optional<DecayProfile>& profile() const noexcept { return profile_; }
    const std::string& label() const noexcept { return label_; }

private:
    friend RadiiSequence winding_radii(const DecayProfile& profile, std::size_t count);
    RadiiSequence() = default;
    void check_index(std::size_t n) const;

    std::vector<double> log_r_;
    GrowthKind growth_ = GrowthKind::Data;
    double g1_ = 0.0;
    double g2_ = 0.0;
    std::size_t n_o_ = 1;
    std::optional<DecayProfile> profile_;
    std::string label_;
};

/// r_n = phi(2 pi (n - 1)), n = 1..count.
RadiiSequence winding_radii(const DecayProfile& profile, std::size_t count);

enum class DecayVerdict { SubExponential, NotSubExponential, Inconclusive };

std::string_view to_string(DecayVerdict verdict);

struct DecayTracePoint {
    std::size_t n = 0;
    double value = 0.0; ///< ln(a_n) / n
};

struct DecayClassification {
    DecayVerdict verdict = DecayVerdict::Inconclusive;
    DecayVerdict trace_verdict = DecayVerdict::Inconclusive;
    std::optional<DecayVerdict> closed_form_verdict;
    std::vector<DecayTracePoint> trace; ///< trailing window
    double final_value = 0.0;           ///< d_N
    double limit_estimate = 0.0;        ///< intercept of a least-squares fit d_n ~ L + k/n
    double slope = 0.0;                 ///< least-squares slope of d_n against n
    double threshold = 0.05;
};

DecayClassification subexp_classify(const RadiiSequence& radii, std::size_t window, double threshold = 0.05);

/// Window used when a caller does not choose one: max(10, N/10), capped at N.
std::size_t default_window(std::size_t count);

/// R_m ∩ [1, N-1] for m = 1..m_max. Index N has no successor ratio and is never a member.
std::vector<IndexSet> exceptional_sets(const RadiiSequence& radii, std::size_t m_max);

struct ExtractionOptions {
    /// Highest level for auto f_1; unset means "until the growth condition fails".
    std::optional<std::size_t> m_max;
    /// Explicit f_1(1), f_1(2), ... (strictly increasing, >= 1). Overrides auto.
    std::optional<std::vector<std::size_t>> f1_table;
    double threshold = 0.05;
};

struct DensityPoint {
    std::size_t checkpoint = 0;
    std::size_t count = 0;
    double density = 0.0;
};

struct SubsequenceExtraction {
    std::size_t count = 0;                  ///< N
    DecayVerdict verdict = DecayVerdict::Inconclusive;
    std::size_t levels = 0;                 ///< number of stored exceptional sets
    std::vector<IndexSet> exceptional_sets; ///< R_m, m = 1..levels
    bool f1_auto = true;
    std::vector<std::size_t> f1;            ///< f1[m-1] = f_1(m)
    std::vector<std::size_t> f2;            ///< f2[n-1] = f_2(n), n = 1..N
    IndexSet exceptional_union;             ///< R ∩ [1, N-1]
    IndexSet retained;                      ///< [1, N-1] \ R
    std::vector<double> ratio_trace;        ///< b_n on retained indices
    std::vector<DensityPoint> density_trace;
    double growth_diagnostic = 0.0;         ///< ln g(N) f_2(N)^2 / N
    std::vector<std::string> warnings;

    std::size_t f2_final() const { return f2.empty() ? 1 : f2.back(); }
};

/// Powers of two below N, then N itself.
std::vector<std::size_t> checkpoints_for(std::size_t count);

SubsequenceExtraction build_exceptional_union(const RadiiSequence& radii, const ExtractionOptions& options = {});

struct ClaimCheck {
    std::size_t checkpoint = 0;
    std::size_t count = 0;
    double bound = 0.0;
    bool holds = false;
};

struct ClaimSeries {
    std::size_t m = 0; ///< level for the per-level bound; 0 for the union bound
    std::vector<ClaimCheck> checks;
    std::optional<std::size_t> n0;            ///< first checkpoint where the bound holds
    std::vector<std::size_t> violations_after; ///< failing checkpoints beyond n0
    bool holds_from_n0() const { return n0.has_value() && violations_after.empty(); }
};

struct ClaimReport {
    DecayVerdict verdict = DecayVerdict::Inconclusive;
    std::vector<ClaimSeries> per_level; ///< |R_m ∩ [1,N']| <= 3 m ln g(N')
    ClaimSeries union_bound;            ///< |R ∩ [1,N']| <= 3 ln g(N') f_2(N')^2
    std::optional<std::size_t> n0_all;  ///< max n0 over the per-level series
    bool per_level_holds = false;       ///< every level holds from its n0 on
    bool union_holds_at_final = false;
};

ClaimReport verify_claim_bounds(const RadiiSequence& radii, const SubsequenceExtraction& extraction);

struct RegularSubsequence {
    IndexSet indices;                ///< n_k
    std::vector<double> ratio_trace; ///< r_{n_k+1} / r_{n_k}
    double diagnostic = 0.0;         ///< max |r_{n_k+1}/r_{n_k} - 1| over the last decile
    double threshold = 0.0;          ///< 1 / f_2(N)
    bool success = false;
    SubsequenceExtraction extraction;
};

RegularSubsequence extract_regular_subsequence(const RadiiSequence& radii, const ExtractionOptions& options = {});

struct GapRatioReport {
    double sup = 0.0; ///< sup over m < n of (r_n - r_{n+1}) / (r_m - r_{m+1})
    std::size_t m_at = 0;
    std::size_t n_at = 0;
    bool gaps_monotone = false; ///< r_n - r_{n+1} non-increasing in n
    bool bounded = false;       ///< sup is finite
};

GapRatioReport gap_ratio_sup(const RadiiSequence& radii);

} // namespace spiral
