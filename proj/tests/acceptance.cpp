// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "spiral/certificate.hpp"
#include "spiral/directions.hpp"
#include "spiral/maps.hpp"
#include "spiral/profiles.hpp"
#include "spiral/radii.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace spiral;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// 1. Exceptional union and regular subsequence on sub-exponential profiles at N = 1e5.
Outcome construction() {
    Outcome o;
    const DecayProfile profiles[] = {DecayProfile::power_law(1.0), DecayProfile::stretched_exp(0.5, 1.0)};
    for (const auto& p : profiles) {
        const auto radii = winding_radii(p, 100000);
        ExtractionOptions options;
        options.m_max = 8;
        const auto sub = extract_regular_subsequence(radii, options);
        const auto& ex = sub.extraction;
        const auto claims = verify_claim_bounds(radii, ex);
        for (std::size_t m = 1; m <= 8 && m <= claims.per_level.size(); ++m) {
            o.require(claims.per_level[m - 1].holds_from_n0(), p.id() + " per-level count bound fails at m=" + std::to_string(m));
        }
        o.require(claims.per_level.size() >= 8, p.id() + " fewer than 8 levels");
        o.require(claims.union_holds_at_final, p.id() + " union count bound fails at N");
        const double density = static_cast<double>(ex.exceptional_union.size()) / static_cast<double>(ex.count);
        o.require(density < 0.05, p.id() + " density " + fmt(density));
        o.require(sub.diagnostic < 1e-3, p.id() + " tail ratio diagnostic " + fmt(sub.diagnostic) + " >= 1e-3");
    }
    return o;
}

// 2. Optimized sets against the naive implementation.
Outcome oracle_equivalence() {
    Outcome o;
    const DecayProfile profiles[] = {DecayProfile::exponential(1.0), DecayProfile::power_law(1.0),
                                     DecayProfile::stretched_exp(0.5, 1.0)};
    for (const auto& p : profiles) {
        for (std::size_t count : {10u, 100u, 333u, 1000u}) {
            const auto radii = winding_radii(p, count);
            o.require(exceptional_sets(radii, 60) == oracle::exceptional_sets(p, count, 60),
                      p.id() + " R_m differs at N=" + std::to_string(count));
            const auto ex = build_exceptional_union(radii);
            const auto slow = oracle::extract(p, count, std::nullopt);
            o.require(ex.f1 == slow.f1, p.id() + " f1 differs at N=" + std::to_string(count));
            o.require(ex.exceptional_union == slow.exceptional_union, p.id() + " R differs at N=" + std::to_string(count));
            o.require(ex.retained == slow.retained, p.id() + " retained differs at N=" + std::to_string(count));
        }
    }
    return o;
}

// 3. Logarithmic spiral is rejected.
Outcome exponential_control() {
    Outcome o;
    const auto radii = winding_radii(DecayProfile::exponential(1.0), 100000);
    const auto c = subexp_classify(radii, default_window(radii.size()));
    o.require(c.verdict == DecayVerdict::NotSubExponential, "verdict " + std::string(to_string(c.verdict)));
    o.require(std::abs(c.limit_estimate - two_pi) <= 1e-6, "trace limit " + fmt(c.limit_estimate));
    const auto sub = extract_regular_subsequence(radii);
    o.require(!sub.success, "extraction reported success");
    for (double r : sub.ratio_trace) {
        if (std::abs(r - 0.001867442731707989) > 1e-8) {
            o.require(false, "ratio " + fmt(r));
            break;
        }
    }
    o.require(!sub.ratio_trace.empty(), "empty ratio trace");
    return o;
}

// 4. Certificate values and the refutation index.
Outcome certificate() {
    Outcome o;
    const auto exp = winding_certificate(winding_radii(DecayProfile::exponential(1.0), 1000));
    for (double v : exp.l_min) {
        if (std::abs(v - 0.0432544) > 1e-6) {
            o.require(false, "exponential L_min " + fmt(v));
            break;
        }
    }
    const auto pow = winding_certificate(winding_radii(DecayProfile::power_law(1.0), 1000));
    o.require(std::abs(pow.bound(100) - 9.9579) <= 1e-3, "L_min(100) " + fmt(pow.bound(100)));
    const auto r = refute_unwinding(pow, 10.0);
    o.require(r.verdict == RefutationVerdict::RefutedAtIndex && r.n_star == 101u, "refutation index");
    return o;
}

// 5. Shear spiral map against closed forms.
Outcome shear_map() {
    Outcome o;
    const auto inv = shear_spiral_map(-1.0);
    const auto fwd = shear_spiral_map(1.0);
    const auto e = DecayProfile::exponential(1.0);
    double worst = 0.0;
    for (int j = 0; j <= 10000; ++j) {
        const double s = 4.0 * std::numbers::pi * j / 10000.0;
        worst = std::max(worst, distance(inv({std::exp(-s), 0.0}), spiral_point(e, s)));
    }
    o.require(worst < 1e-12, "segment image error " + fmt(worst));
    const auto d = distortion_estimate(fwd, Region::annulus(0.01, 1.0), 100000, 42);
    o.require(d.l_est >= 1.60 && d.l_est <= 1.6180340 + 1e-9, "l_est " + fmt(d.l_est));
    oracle::Rng rng(42);
    double trip = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const Point2 x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        trip = std::max(trip, distance(fwd.inverse(fwd(x)), x));
    }
    o.require(trip < 1e-9, "round trip " + fmt(trip));
    return o;
}

// 6. Polygonal length of the unwinding map along a segment.
Outcome length_functional() {
    Outcome o;
    const auto inv = shear_spiral_map(-1.0);
    const double a = std::exp(-two_pi);
    const auto len = partition_length(inv, a, 1.0);
    o.require(len.converged, "refinement did not converge");
    o.require(std::abs(len.refined - std::numbers::sqrt2 * (1.0 - a)) <= 1e-5, "length " + fmt(len.refined));
    const double L = 1.6180340;
    o.require((1.0 - a) / L <= len.refined && len.refined <= L * (1.0 - a), "sandwich");
    return o;
}

// 7. Direction sets of a segment and of a power-law spiral.
Outcome direction_sets() {
    Outcome o;
    PointCloud seg;
    const double lo = std::pow(2.0, -10);
    for (int i = 0; i < 10000; ++i) seg.push_back({lo + (1.0 - lo) * i / 9999.0, 0.0});
    const auto sds = estimate_direction_set(seg, {0.0, 0.0});
    o.require(is_unwinded(sds).unwinded, "segment not unwinded");
    o.require(sds.persistent.size() == 1, "segment bins " + std::to_string(sds.persistent.size()));

    const auto prof = DecayProfile::power_law(1.0);
    const auto cloud = sample_spiral(prof, 40, 720).points;
    const auto pds = estimate_direction_set(cloud, {0.0, 0.0});
    o.require(!is_unwinded(pds).unwinded, "power-law spiral unwinded");
    o.require(pds.persistent.size() == 360, "power-law bins " + std::to_string(pds.persistent.size()));

    const auto radii = winding_radii(prof, 40);
    const auto report = tilde_ssp_check(cloud, {0.0, 0.0}, radii, extract_regular_subsequence(radii), direction_grid(360));
    o.require(report.annuli.size() == 39, "annulus count");
    o.require(rad_to_deg(report.max_defect) <= 0.5, "annulus defect " + fmt(rad_to_deg(report.max_defect)) + " deg");
    return o;
}

// 8. Transported directions: identity passes, the shear map on the logarithmic spiral fails.
Outcome transport() {
    Outcome o;
    const auto pow = DecayProfile::power_law(1.0);
    const auto pcloud = sample_spiral(pow, 40, 720).points;
    const auto pradii = winding_radii(pow, 40);
    const auto ptarget = estimate_direction_set(pcloud, {0.0, 0.0});
    IndexSet all;
    for (std::size_t n = 1; n < 40; ++n) all.push_back(n);
    TransportOptions options;
    options.directions = direction_grid(360);
    const auto id = transported_direction_check(identity_map(), pcloud, {0.0, 0.0}, pradii, all, ptarget, options);
    double worst = 0.0;
    for (const auto& t : id.trace) {
        if (!t.skipped) worst = std::max(worst, t.defect);
    }
    o.require(worst == 0.0, "identity defect " + fmt(worst));
    o.require(id.skipped == 0, "identity skipped windings");

    const auto exp = DecayProfile::exponential(1.0);
    const auto ecloud = sample_spiral(exp, 40, 720).points;
    const auto eradii = winding_radii(exp, 40);
    PointCloud seg;
    for (int i = 0; i < 20000; ++i) seg.push_back({std::exp(-two_pi * 40.0 * i / 19999.0), 0.0});
    DirectionOptions dopt;
    dopt.start_layer = 0;
    const auto starget = estimate_direction_set(seg, {0.0, 0.0}, dopt);
    o.require(starget.persistent.size() == 1, "segment target bins " + std::to_string(starget.persistent.size()));
    const auto sh = transported_direction_check(shear_spiral_map(1.0), ecloud, {0.0, 0.0}, eradii, all, starget, options);
    const double frac = sh.fraction_above(deg_to_rad(10.0));
    o.require(frac >= 0.5, "fraction above 10 deg " + fmt(frac));
    o.require(!sh.pass, "shear check passed");
    return o;
}

// 9. Every command run twice gives identical bytes.
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / ("spiralkit_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path pts = dir / "pts.csv";
    {
        std::ofstream f(pts);
        f << "x,y\n";
        for (int i = 0; i < 2000; ++i) f << std::exp(-i / 200.0) << ",0\n";
    }
    struct Case {
        std::string name;
        std::string args;
        std::vector<std::string> files;
    };
    const std::vector<Case> cases = {
        {"profiles", "profiles --profile sexp:beta=0.5,c=1 --windings 5 --per-winding 90", {"csv", "json", "svg"}},
        {"radii", "radii --profile pow:p=1 --n 2000", {"csv", "json"}},
        {"subseq", "subseq --profile sexp:beta=0.5,c=1 --n 5000", {"csv", "json"}},
        {"certify", "certify --profile pow:p=2 --n 500 --variant arclength", {"csv", "json", "svg"}},
        {"refute", "refute --profile pow:p=1 --n 1000 --claimed-l 10", {"json"}},
        {"directions", "directions --profile pow:p=1 --windings 20 --per-winding 360", {"json", "svg"}},
        {"ssp", "ssp --profile pow:p=1 --n 60 --directions 90 --per-winding 360", {"json"}},
        {"map-apply", "map-apply --map shear-spiral:gamma=1 --points " + pts.string(), {"csv"}},
        {"map-distortion", "map-distortion --map shear-spiral:gamma=1 --pairs 20000 --seed 7", {"json"}},
        {"rescale-limit", "rescale-limit --map shear-spiral:gamma=1 --log-step 1 --members 400", {"csv", "json", "svg"}},
        {"transport-check",
         "transport-check --profile exp:a=1 --map shear-spiral:gamma=1 --windings 20 --per-winding 360 --all-indices",
         {"json"}},
        {"length", "length --map shear-spiral:gamma=-1 --a 0.01 --b 1", {"json"}},
    };
    for (const auto& c : cases) {
        std::string outputs[2];
        bool ran = true;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path base = dir / (c.name + "_" + std::to_string(rep));
            std::string cmd = std::string(SPIRALKIT_BINARY) + " " + c.args;
            for (const auto& kind : c.files) {
                const std::string flag = kind == "csv" ? "--out" : "--" + kind;
                cmd += " " + flag + " " + (base.string() + "." + kind);
            }
            cmd += " >" + base.string() + ".stdout 2>/dev/null";
            const int raw = std::system(cmd.c_str());
            const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
            if (status != 0) {
                o.require(false, c.name + " exited " + std::to_string(status));
                ran = false;
                break;
            }
            for (const auto& kind : c.files) outputs[rep] += slurp(base.string() + "." + kind) + "\x1f";
            outputs[rep] += slurp(base.string() + ".stdout");
        }
        if (ran) o.require(outputs[0] == outputs[1], c.name + " output differs");
    }
    fs::remove_all(dir);
    return o;
}

struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> check;
    double time_limit; // seconds, 0 = none
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "sub-exponential construction at N=1e5", construction, 10.0},
        {2, "brute-force oracle equivalence", oracle_equivalence, 0.0},
        {3, "exponential negative control", exponential_control, 0.0},
        {4, "certificate sharpness", certificate, 1.0},
        {5, "shear spiral map ground truth", shear_map, 5.0},
        {6, "length functional", length_functional, 0.0},
        {7, "direction sets", direction_sets, 0.0},
        {8, "transported directions", transport, 30.0},
        {9, "CLI determinism", determinism, 0.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0) o.require(secs < c.time_limit, "runtime " + fmt(secs) + " s over " + fmt(c.time_limit) + " s");
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << fmt(secs) << " s)";
        if (!o.detail.empty()) std::cout << ": " << o.detail;
        std::cout << "\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
    return failures == 0 ? 0 : 1;
}
