#include "spiral/radii.hpp"

#include "spiral/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spiral {

namespace {

constexpr std::size_t no_level = std::numeric_limits<std::size_t>::max();

void check_log_radii(const std::vector<double>& log_r, Monotonicity mode) {
    if (log_r.size() < 2) throw ParameterError("a radii sequence needs N >= 2");
    for (std::size_t i = 0; i < log_r.size(); ++i) {
        if (!std::isfinite(log_r[i]) || log_r[i] > 0.0) throw ValidationError("radii must lie in (0,1]");
        if (i == 0) continue;
        const bool ok = mode == Monotonicity::Strict ? log_r[i] < log_r[i - 1] : log_r[i] <= log_r[i - 1];
        if (!ok) {
            throw ValidationError(mode == Monotonicity::Strict ? "radii must be strictly decreasing"
                                                               : "radii must be non-increasing");
        }
    }
}

/// Smallest m >= 1 with ln b >= ln(1 + 1/m), i.e. the first R_m containing the index.
std::size_t entry_level(double log_ratio) {
    if (!(log_ratio > 0.0)) return no_level;
    if (log_ratio >= std::log1p(1.0)) return 1;
    const double estimate = std::ceil(1.0 / std::expm1(log_ratio));
    if (!(estimate < 1e18)) return no_level;
    auto m = std::max<std::size_t>(1, static_cast<std::size_t>(estimate));
    while (m > 1 && log_ratio >= std::log1p(1.0 / static_cast<double>(m - 1))) --m;
    while (!(log_ratio >= std::log1p(1.0 / static_cast<double>(m)))) ++m;
    return m;
}

std::size_t count_upto(const IndexSet& set, std::size_t n) {
    return static_cast<std::size_t>(std::upper_bound(set.begin(), set.end(), n) - set.begin());
}

} // namespace

RadiiSequence RadiiSequence::from_values(const std::vector<double>& radii, Monotonicity mode, std::string label) {
    std::vector<double> log_r;
    log_r.reserve(radii.size());
    for (double r : radii) {
        if (!std::isfinite(r) || !(r > 0.0) || r > 1.0) throw ValidationError("radii must lie in (0,1]");
        log_r.push_back(std::log(r));
    }
    return from_log_values(std::move(log_r), mode, std::move(label));
}

RadiiSequence RadiiSequence::from_log_values(std::vector<double> log_radii, Monotonicity mode, std::string label) {
    check_log_radii(log_radii, mode);
    RadiiSequence seq;
    seq.log_r_ = std::move(log_radii);
    seq.growth_ = GrowthKind::Data;
    seq.label_ = std::move(label);
    return seq;
}

void RadiiSequence::check_index(std::size_t n) const {
    if (n < 1 || n > log_r_.size()) {
        throw RangeError("index " + std::to_string(n) + " outside [1, " + std::to_string(log_r_.size()) + "]");
    }
}

double RadiiSequence::log_radius(std::size_t n) const {
    check_index(n);
    return log_r_[n - 1];
}

double RadiiSequence::radius(std::size_t n) const { return std::exp(log_radius(n)); }

double RadiiSequence::reciprocal(std::size_t n) const { return 1.0 / radius(n); }

double RadiiSequence::log_ratio(std::size_t n) const {
    if (n < 1 || n >= log_r_.size()) {
        throw RangeError("ratio index " + std::to_string(n) + " outside [1, " + std::to_string(log_r_.size() - 1) + "]");
    }
    return log_r_[n - 1] - log_r_[n];
}

double RadiiSequence::ratio(std::size_t n) const { return std::exp(log_ratio(n)); }

double RadiiSequence::log_growth(std::size_t n) const {
    if (n < 1) throw RangeError("growth index must be >= 1");
    const double t = two_pi * static_cast<double>(n - 1);
    switch (growth_) {
    case GrowthKind::Exponential: return g1_ * t;
    case GrowthKind::PowerLaw: return g1_ * std::log1p(t);
    case GrowthKind::StretchedExp: return g2_ * std::pow(t, g1_);
    case GrowthKind::Data: return -log_radius(n);
    }
    return 0.0;
}

RadiiSequence winding_radii(const DecayProfile& profile, std::size_t count) {
    if (count < 2) throw ParameterError("N must be >= 2");
    std::vector<double> log_r;
    log_r.reserve(count);
    for (std::size_t n = 1; n <= count; ++n) log_r.push_back(profile.log_value(two_pi * static_cast<double>(n - 1)));
    RadiiSequence seq;
    check_log_radii(log_r, Monotonicity::Strict);
    seq.log_r_ = std::move(log_r);
    seq.profile_ = profile;
    seq.label_ = profile.id();
    switch (profile.family()) {
    case ProfileFamily::Exponential: seq.growth_ = GrowthKind::Exponential; break;
    case ProfileFamily::PowerLaw: seq.growth_ = GrowthKind::PowerLaw; break;
    case ProfileFamily::StretchedExp: seq.growth_ = GrowthKind::StretchedExp; break;
    case ProfileFamily::UserTable: seq.growth_ = GrowthKind::Data; break;
    }
    seq.g1_ = profile.param1();
    seq.g2_ = profile.param2();
    return seq;
}

std::string_view to_string(DecayVerdict verdict) {
    switch (verdict) {
    case DecayVerdict::SubExponential: return "SubExponential";
    case DecayVerdict::NotSubExponential: return "NotSubExponential";
    case DecayVerdict::Inconclusive: return "Inconclusive";
    }
    return "";
}

std::size_t default_window(std::size_t count) { return std::min(count, std::max<std::size_t>(10, count / 10)); }

DecayClassification subexp_classify(const RadiiSequence& radii, std::size_t window, double threshold) {
    const std::size_t count = radii.size();
    if (window < 10) throw ParameterError("window must be >= 10");
    if (window > count) throw ParameterError("window must not exceed N");
    if (!(threshold > 0.0)) throw ParameterError("threshold must be > 0");

    DecayClassification out;
    out.threshold = threshold;
    out.trace.reserve(window);
    for (std::size_t n = count - window + 1; n <= count; ++n) {
        out.trace.push_back({n, -radii.log_radius(n) / static_cast<double>(n)});
    }
    out.final_value = out.trace.back().value;

    // Least squares of d against n (slope) and against 1/n (intercept = limit estimate).
    const double w = static_cast<double>(window);
    double sn = 0, sd = 0, snn = 0, snd = 0, sx = 0, sxx = 0, sxd = 0;
    for (const auto& p : out.trace) {
        const double n = static_cast<double>(p.n);
        const double x = 1.0 / n;
        sn += n;
        sd += p.value;
        snn += n * n;
        snd += n * p.value;
        sx += x;
        sxx += x * x;
        sxd += x * p.value;
    }
    out.slope = (w * snd - sn * sd) / (w * snn - sn * sn);
    const double kx = (w * sxd - sx * sd) / (w * sxx - sx * sx);
    out.limit_estimate = (sd - kx * sx) / w;

    bool decreasing = true;
    double min_value = out.trace.front().value;
    for (std::size_t i = 1; i < out.trace.size(); ++i) {
        const double prev = out.trace[i - 1].value;
        if (out.trace[i].value > prev + 1e-12 * std::max(1.0, std::abs(prev))) decreasing = false;
        min_value = std::min(min_value, out.trace[i].value);
    }
    if (decreasing && out.final_value < threshold) {
        out.trace_verdict = DecayVerdict::SubExponential;
    } else if (min_value > threshold && std::abs(out.slope) * w <= 0.1 * out.final_value) {
        out.trace_verdict = DecayVerdict::NotSubExponential;
    }

    switch (radii.growth_kind()) {
    case GrowthKind::Exponential: out.closed_form_verdict = DecayVerdict::NotSubExponential; break;
    case GrowthKind::PowerLaw:
    case GrowthKind::StretchedExp: out.closed_form_verdict = DecayVerdict::SubExponential; break;
    case GrowthKind::Data: break;
    }
    out.verdict = out.closed_form_verdict.value_or(out.trace_verdict);
    return out;
}

std::vector<IndexSet> exceptional_sets(const RadiiSequence& radii, std::size_t m_max) {
    if (m_max < 1) throw ParameterError("m_max must be >= 1");
    std::vector<IndexSet> by_entry(m_max);
    for (std::size_t n = 1; n < radii.size(); ++n) {
        const std::size_t level = entry_level(radii.log_ratio(n));
        if (level <= m_max) by_entry[level - 1].push_back(n);
    }
    std::vector<IndexSet> sets(m_max);
    IndexSet running;
    for (std::size_t m = 0; m < m_max; ++m) {
        IndexSet merged;
        merged.reserve(running.size() + by_entry[m].size());
        std::merge(running.begin(), running.end(), by_entry[m].begin(), by_entry[m].end(), std::back_inserter(merged));
        running = std::move(merged);
        sets[m] = running;
    }
    return sets;
}

std::vector<std::size_t> checkpoints_for(std::size_t count) {
    std::vector<std::size_t> points;
    for (std::size_t c = 1; c < count; c *= 2) points.push_back(c);
    points.push_back(count);
    return points;
}

SubsequenceExtraction build_exceptional_union(const RadiiSequence& radii, const ExtractionOptions& options) {
    const std::size_t count = radii.size();
    SubsequenceExtraction out;
    out.count = count;
    out.verdict = count >= 10 ? subexp_classify(radii, default_window(count), options.threshold).verdict
                              : DecayVerdict::Inconclusive;
    if (out.verdict != DecayVerdict::SubExponential) {
        out.warnings.push_back(std::string("decay verdict is ") + std::string(to_string(out.verdict)) +
                               "; the density-one construction is not guaranteed");
    }

    std::vector<double> log_g(count + 1, 0.0);
    for (std::size_t n = 1; n <= count; ++n) log_g[n] = radii.log_growth(n);

    if (options.f1_table) {
        out.f1_auto = false;
        out.f1 = *options.f1_table;
        for (std::size_t i = 0; i < out.f1.size(); ++i) {
            if (out.f1[i] < 1 || (i > 0 && out.f1[i] <= out.f1[i - 1])) {
                throw ParameterError("explicit f1 table must be strictly increasing and >= 1");
            }
        }
    } else {
        std::size_t previous = 0;
        for (std::size_t m = 1;; ++m) {
            if (options.m_max && m > *options.m_max) break;
            const double cube = static_cast<double>(m) * static_cast<double>(m) * static_cast<double>(m);
            // Largest n in [1, N] violating ln g(n) m^3 <= n.
            std::size_t last_bad = 0;
            for (std::size_t n = count; n >= 1; --n) {
                if (log_g[n] * cube > static_cast<double>(n)) {
                    last_bad = n;
                    break;
                }
            }
            const std::size_t value = std::max(previous + 1, last_bad + 1);
            if (last_bad == count || value > count) {
                if (options.m_max) {
                    out.warnings.push_back("f1 truncated at m = " + std::to_string(m) +
                                           ": ln g(n) m^3 <= n has no tail solution within [1, N]");
                }
                break;
            }
            out.f1.push_back(value);
            previous = value;
        }
        if (out.f1.empty()) out.warnings.push_back("no admissible f1 level: the exceptional union is empty");
    }
    const std::size_t active = out.f1.size();
    out.levels = std::max({options.m_max.value_or(0), active, std::size_t{1}});

    std::vector<std::size_t> entry(count, no_level);
    for (std::size_t n = 1; n < count; ++n) entry[n] = entry_level(radii.log_ratio(n));

    out.exceptional_sets = exceptional_sets(radii, out.levels);

    out.f2.resize(count);
    std::size_t level = 0;
    for (std::size_t n = 1; n <= count; ++n) {
        while (level < active && out.f1[level] < n) ++level;
        out.f2[n - 1] = level + 1;
    }

    for (std::size_t n = 1; n < count; ++n) {
        const std::size_t e = entry[n];
        if (e <= active && out.f1[e - 1] <= n) {
            out.exceptional_union.push_back(n);
        } else {
            out.retained.push_back(n);
            out.ratio_trace.push_back(radii.ratio(n));
        }
    }

    for (std::size_t c : checkpoints_for(count)) {
        const std::size_t k = count_upto(out.exceptional_union, c);
        out.density_trace.push_back({c, k, static_cast<double>(k) / static_cast<double>(c)});
    }
    const double f2n = static_cast<double>(out.f2_final());
    out.growth_diagnostic = log_g[count] * f2n * f2n / static_cast<double>(count);
    return out;
}

namespace {

void finish_series(ClaimSeries& series) {
    for (const auto& check : series.checks) {
        if (!series.n0) {
            if (check.holds) series.n0 = check.checkpoint;
        } else if (!check.holds) {
            series.violations_after.push_back(check.checkpoint);
        }
    }
}

} // namespace

ClaimReport verify_claim_bounds(const RadiiSequence& radii, const SubsequenceExtraction& extraction) {
    if (extraction.count < 100) throw ParameterError("claim verification needs N >= 100");
    if (extraction.count != radii.size()) throw ParameterError("extraction was built on a different sequence");
    ClaimReport report;
    report.verdict = extraction.verdict;
    const auto checkpoints = checkpoints_for(extraction.count);

    report.per_level_holds = true;
    for (std::size_t m = 1; m <= extraction.levels; ++m) {
        ClaimSeries series;
        series.m = m;
        for (std::size_t c : checkpoints) {
            const std::size_t k = count_upto(extraction.exceptional_sets[m - 1], c);
            const double bound = 3.0 * static_cast<double>(m) * radii.log_growth(c);
            series.checks.push_back({c, k, bound, static_cast<double>(k) <= bound});
        }
        finish_series(series);
        if (!series.holds_from_n0()) report.per_level_holds = false;
        if (series.n0) report.n0_all = std::max(report.n0_all.value_or(0), *series.n0);
        report.per_level.push_back(std::move(series));
    }

    report.union_bound.m = 0;
    for (std::size_t c : checkpoints) {
        const std::size_t k = count_upto(extraction.exceptional_union, c);
        const double f2 = static_cast<double>(extraction.f2[c - 1]);
        const double bound = 3.0 * radii.log_growth(c) * f2 * f2;
        report.union_bound.checks.push_back({c, k, bound, static_cast<double>(k) <= bound});
    }
    finish_series(report.union_bound);
    report.union_holds_at_final = report.union_bound.checks.back().holds;
    return report;
}

RegularSubsequence extract_regular_subsequence(const RadiiSequence& radii, const ExtractionOptions& options) {
    RegularSubsequence out;
    out.extraction = build_exceptional_union(radii, options);
    out.indices = out.extraction.retained;
    out.ratio_trace.reserve(out.indices.size());
    for (std::size_t n : out.indices) out.ratio_trace.push_back(std::exp(-radii.log_ratio(n)));

    out.threshold = 1.0 / static_cast<double>(out.extraction.f2_final());
    if (!out.indices.empty()) {
        const std::size_t total = out.indices.size();
        const std::size_t start = std::min(total - 1, (total * 9) / 10);
        for (std::size_t k = start; k < total; ++k) {
            out.diagnostic = std::max(out.diagnostic, -std::expm1(-radii.log_ratio(out.indices[k])));
        }
    }
    out.success = !out.extraction.f1.empty() && !out.indices.empty() && out.diagnostic < out.threshold;
    return out;
}

GapRatioReport gap_ratio_sup(const RadiiSequence& radii) {
    const std::size_t count = radii.size();
    if (count < 3) throw ParameterError("gap ratio needs N >= 3");
    // ln(r_n - r_{n+1}) = ln r_n + ln(1 - r_{n+1}/r_n), n = 1..N-1.
    std::vector<double> log_gap(count);
    for (std::size_t n = 1; n < count; ++n) {
        const double drop = -std::expm1(-radii.log_ratio(n));
        log_gap[n] = drop > 0.0 ? radii.log_radius(n) + std::log(drop) : -std::numeric_limits<double>::infinity();
    }
    GapRatioReport out;
    out.gaps_monotone = true;
    for (std::size_t n = 2; n < count; ++n) {
        if (log_gap[n] > log_gap[n - 1]) out.gaps_monotone = false;
    }
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_n = 0;
    double sup_log = -std::numeric_limits<double>::infinity();
    for (std::size_t m = count - 2; m >= 1; --m) {
        if (log_gap[m + 1] >= best) {
            best = log_gap[m + 1];
            best_n = m + 1;
        }
        if (std::isinf(best) && best < 0) continue; // every later gap is zero
        const double candidate = best - log_gap[m];
        if (candidate > sup_log || out.m_at == 0) {
            sup_log = candidate;
            out.m_at = m;
            out.n_at = best_n;
        }
    }
    out.sup = std::exp(sup_log);
    out.bounded = std::isfinite(out.sup);
    return out;
}

} // namespace spiral
