// Release acceptance driver. Each criterion exercises the library end to end
// and prints one [PASS]/[FAIL] line with its measured values; sub-measurements
// print indented above it. Wall-clock budgets are advisory: exceeding one
// prints a [WARN] line but does not fail the criterion.
//
// Usage: acceptance [--criterion N]   (default: run all eight)

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "d2dcomp/analytics.hpp"
#include "d2dcomp/caching.hpp"
#include "d2dcomp/channel.hpp"
#include "d2dcomp/geometry.hpp"
#include "d2dcomp/optimizer.hpp"
#include "d2dcomp/rng.hpp"
#include "d2dcomp/simulator.hpp"
#include "support/checks.hpp"

namespace {

using namespace d2dcomp;

std::string fmt(const char* format, ...) {
    char buffer[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

struct Outcome {
    bool ok = true;
    std::string summary;

    void require(bool condition, const std::string& why) {
        if (!condition) {
            ok = false;
            note("violation: " + why);
        }
    }
};

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

// --- criterion 1: PPP lower bound vs Monte Carlo ---------------------------

Outcome criterion1() {
    NetworkParams params;
    params.lambda_p = 10e-6;
    params.sigma = 10.0;
    params.n_bar = 20.0;
    params.p = 0.5;
    params.theta = 1.0;
    const double c_m = 0.5;

    Outcome out;
    double gap_sigma10 = 0.0;
    for (double sigma : {10.0, 20.0, 30.0}) {
        params.sigma = sigma;
        SimulationOptions options;
        options.trials = 100000;
        options.seed = 1100 + static_cast<std::uint64_t>(sigma);
        const Estimate mc = estimate_rate_coverage(DeliveryScheme::comp, params, c_m, options);
        const double bound = rate_coverage_bound(c_m, params);
        const double gap = mc.mean - bound;
        if (sigma == 10.0) gap_sigma10 = std::fabs(gap);
        note(fmt("sigma=%2.0f m: mc=%.5f se=%.5f bound=%.5f gap=%+.5f", sigma, mc.mean,
                 mc.std_error, bound, gap));
        out.require(bound <= mc.mean + 3.0 * mc.std_error,
                    fmt("bound exceeds mc + 3se at sigma=%g", sigma));
    }
    out.require(gap_sigma10 <= 0.05,
                fmt("bound gap %.5f > 0.05 at sigma=10", gap_sigma10));
    out.summary = fmt("lower bound holds at sigma {10,20,30}; gap %.4f at sigma=10 (<= 0.05)",
                      gap_sigma10);
    return out;
}

// --- criterion 2: nearest-provider distance law -----------------------------

Outcome criterion2() {
    NetworkParams params;
    params.lambda_p = 10e-6;
    params.sigma = 10.0;
    params.n_bar = 20.0;
    params.p = 1.0;
    params.theta = 1.0;
    const double c_m = 0.5;
    const double mu = c_m * params.p * params.n_bar;
    const double sigma = params.sigma;

    // Empirical defective CDF: cluster center at Rayleigh(sigma) distance,
    // Poisson(mu) providers at Rician(v0, sigma) distances; a draw with no
    // provider never falls below any h.
    const std::uint64_t n_draws = 100000;
    Rng rng = make_rng(22000, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::poisson_distribution<int> poisson(mu);
    std::vector<double> nearest;
    nearest.reserve(n_draws);
    for (std::uint64_t i = 0; i < n_draws; ++i) {
        const double v0 = sigma * std::sqrt(-2.0 * std::log1p(-uniform(rng)));
        const int k = poisson(rng);
        double best = -1.0;
        for (int j = 0; j < k; ++j) {
            const double d = std::hypot(v0 + sigma * normal(rng), sigma * normal(rng));
            if (best < 0.0 || d < best) best = d;
        }
        if (best >= 0.0) nearest.push_back(best);
    }
    std::sort(nearest.begin(), nearest.end());

    // Exact CDF tabulated once on a fine grid, interpolated at the samples;
    // the grid spans every sample so interpolation error is O(grid^2).
    const double h_max = std::max(80.0, nearest.empty() ? 0.0 : nearest.back() + 1.0);
    const double step = 0.1;
    const int grid_n = static_cast<int>(h_max / step) + 2;
    std::vector<double> grid_cdf(grid_n);
    for (int i = 0; i < grid_n; ++i) grid_cdf[i] = nearest_cdf(i * step, c_m, params);
    const auto exact_cdf = [&](double h) {
        const double x = h / step;
        const int lo = std::min(grid_n - 2, static_cast<int>(x));
        const double w = x - lo;
        return (1.0 - w) * grid_cdf[lo] + w * grid_cdf[lo + 1];
    };

    const double n_total = static_cast<double>(n_draws);
    double sup_emp = std::fabs((1.0 - std::exp(-mu)) - nearest.size() / n_total);
    for (std::size_t i = 0; i < nearest.size(); ++i) {
        const double f = exact_cdf(nearest[i]);
        sup_emp = std::max(sup_emp, std::fabs(f - i / n_total));
        sup_emp = std::max(sup_emp, std::fabs(f - (i + 1) / n_total));
    }
    note(fmt("sup |F_exact - F_empirical| = %.5f over %zu provider draws", sup_emp,
             nearest.size()));

    // The closed-form (Jensen) CDF upper-bounds the exact law; at mu = 10 the
    // convexity gap peaks near h1 = sigma, so it is checked as a one-sided
    // bound with a measured ceiling rather than a symmetric tolerance.
    double sup_jensen = 0.0;
    double min_slack = 1e300;
    for (int i = 0; i < grid_n; ++i) {
        const double h = i * step;
        const double fj = nearest_cdf_jensen(h, c_m, params);
        sup_jensen = std::max(sup_jensen, fj - grid_cdf[i]);
        min_slack = std::min(min_slack, fj - grid_cdf[i]);
    }
    note(fmt("jensen CDF - exact CDF in [%.3g, %.5f] on the grid", min_slack, sup_jensen));

    const double ups_jensen =
        rate_coverage_approx(c_m, params, NearestPdfVariant::jensen);
    const double ups_exact_pdf =
        rate_coverage_approx(c_m, params, NearestPdfVariant::exact);
    const double ups_gap = std::fabs(ups_jensen - ups_exact_pdf);
    note(fmt("rate coverage via jensen pdf %.5f vs exact pdf %.5f (|diff| = %.5f)",
             ups_jensen, ups_exact_pdf, ups_gap));

    Outcome out;
    out.require(sup_emp < 0.02, fmt("empirical sup-distance %.5f >= 0.02", sup_emp));
    out.require(min_slack >= -1e-9, "jensen CDF fell below the exact CDF");
    out.require(sup_jensen < 0.1,
                fmt("jensen CDF gap %.5f >= 0.1 ceiling", sup_jensen));
    out.require(ups_gap < 0.01,
                fmt("jensen vs exact-pdf rate coverage differ by %.5f >= 0.01", ups_gap));
    out.summary = fmt(
        "empirical sup %.4f (< 0.02); jensen upper-bounds exact, sup gap %.4f (< 0.1), "
        "rate-coverage effect %.4f (< 0.01)",
        sup_emp, sup_jensen, ups_gap);
    return out;
}

// --- criterion 3: mean-plus-nearest approximation tightness ------------------

Outcome criterion3() {
    NetworkParams params;
    params.n_bar = 20.0;
    params.p = 0.5;
    params.theta = 1.0;
    const double c_m = 0.5;

    Outcome out;
    double worst = 0.0;
    std::uint64_t point = 0;
    for (double lambda_km2 : {10.0, 30.0}) {
        for (double sigma : {10.0, 20.0, 30.0, 40.0, 50.0}) {
            params.lambda_p = lambda_km2 * 1e-6;
            params.sigma = sigma;
            SimulationOptions options;
            options.trials = 20000;
            options.seed = 3300 + point++;
            const Estimate mc = estimate_rate_coverage(DeliveryScheme::comp, params, c_m, options);
            // Exact nearest-provider density: at this provider mean (c p n_bar = 5)
            // the closed-form density's upward skew alone costs ~0.02-0.03.
            const double approx =
                rate_coverage_approx(c_m, params, NearestPdfVariant::exact);
            const double diff = std::fabs(approx - mc.mean);
            const double tol = std::max(0.03, 3.0 * mc.std_error);
            worst = std::max(worst, diff);
            note(fmt("lambda_p=%2.0f /km^2 sigma=%2.0f m: mc=%.5f se=%.5f approx=%.5f |diff|=%.5f",
                     lambda_km2, sigma, mc.mean, mc.std_error, approx, diff));
            out.require(diff <= tol,
                        fmt("|approx - mc| %.5f > %.5f at lambda_p=%g sigma=%g", diff, tol,
                            lambda_km2, sigma));
        }
    }
    out.summary = fmt(
        "max |approx - mc| = %.4f over 10-point grid, exact nearest density (tolerance 0.03)",
        worst);
    return out;
}

// --- criterion 4: offloading gain under Zipf caching -------------------------

Outcome criterion4() {
    NetworkParams params; // library defaults carry the reference geometry
    params.theta = 1.0;

    Outcome out;
    const LaplaceTable table(params);
    const auto ups_bound = [&](double cm) { return rate_coverage_bound(cm, params); };
    const auto ups_approx = [&](double cm) {
        return rate_coverage_approx(cm, params, NearestPdfVariant::jensen, &table);
    };

    double prev_mc = -1.0, prev_se = 0.0;
    double worst_approx = 0.0, worst_bound_excess = -1.0;
    int index = 0;
    for (double beta = 0.2; beta <= 2.0 + 1e-9; beta += 0.2) {
        const ContentParams content = ContentParams::zipf(12, 2, beta);
        const CachingVector caching = scheme_zipf(content);
        const double po_bound = offloading_gain_curve(caching, content.popularity, ups_bound);
        const double po_approx = offloading_gain_curve(caching, content.popularity, ups_approx);
        SimulationOptions options;
        options.trials = 20000;
        options.seed = 4400 + index++;
        const Estimate mc = estimate_offloading_gain(params, content, caching, options);
        const double tol = std::max(0.03, 3.0 * mc.std_error);
        note(fmt("beta=%.1f: mc=%.5f se=%.5f bound=%.5f approx=%.5f", beta, mc.mean,
                 mc.std_error, po_bound, po_approx));
        worst_bound_excess = std::max(worst_bound_excess, po_bound - mc.mean);
        worst_approx = std::max(worst_approx, std::fabs(po_approx - mc.mean));
        out.require(po_bound <= mc.mean + 3.0 * mc.std_error,
                    fmt("bound offloading exceeds mc + 3se at beta=%.1f", beta));
        out.require(std::fabs(po_approx - mc.mean) <= tol,
                    fmt("|approx offloading - mc| %.5f > %.5f at beta=%.1f",
                        std::fabs(po_approx - mc.mean), tol, beta));
        if (prev_mc >= 0.0)
            out.require(mc.mean >= prev_mc - 3.0 * combined_se(mc.std_error, prev_se),
                        fmt("mc offloading decreased beyond noise at beta=%.1f", beta));
        prev_mc = mc.mean;
        prev_se = mc.std_error;
    }
    out.summary = fmt(
        "max |approx - mc| = %.4f, max bound excess over mc = %+.4f, mc curve non-decreasing",
        worst_approx, worst_bound_excess);
    return out;
}

// --- criterion 5: optimizer dominance -----------------------------------------

Outcome criterion5() {
    NetworkParams params;
    params.theta = 1.0;

    Outcome out;
    double min_p1_vs_p2 = 1e300, min_p2_vs_static = 1e300;
    int index = 0;
    for (double beta : {0.2, 0.6, 1.0}) {
        const ContentParams content = ContentParams::zipf(40, 8, beta);
        const OptimResult p1 = optimize_p1(params, content, {}, 5100 + index);
        const OptimResult p2 = optimize_p2(params, content);
        const KktReport report = kkt_report_p2(p2.c_star, p2.v_star, params, content);
        out.require(p1.budget_residual <= 1e-6,
                    fmt("p1 budget residual %.2e > 1e-6 at beta=%.1f", p1.budget_residual, beta));
        out.require(p1.stationarity_residual <= 1e-6,
                    fmt("p1 stationarity residual %.2e > 1e-6 at beta=%.1f",
                        p1.stationarity_residual, beta));
        out.require(report.budget_residual <= 1e-6,
                    fmt("p2 budget residual %.2e > 1e-6 at beta=%.1f", report.budget_residual,
                        beta));
        out.require(report.max_stationarity_violation <= 1e-6,
                    fmt("p2 stationarity violation %.2e > 1e-6 at beta=%.1f",
                        report.max_stationarity_violation, beta));

        const std::array<std::pair<const char*, CachingVector>, 5> candidates = {{
            {"p1", p1.c_star},
            {"p2", p2.c_star},
            {"zipf", scheme_zipf(content)},
            {"cpf", scheme_cpf(content)},
            {"rc", scheme_rc(content)},
        }};
        std::array<Estimate, 5> mc;
        std::string row = fmt("beta=%.1f:", beta);
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            SimulationOptions options;
            options.trials = 40000;
            options.seed = 5500 + index; // common random numbers across vectors
            mc[k] = estimate_offloading_gain(params, content, candidates[k].second, options);
            row += fmt(" %s=%.5f", candidates[k].first, mc[k].mean);
        }
        note(row + fmt(" (se ~%.5f)", mc[0].std_error));

        min_p1_vs_p2 = std::min(min_p1_vs_p2, mc[0].mean - mc[1].mean);
        out.require(mc[0].mean >= mc[1].mean - 1e-3,
                    fmt("mc(p1) %.5f < mc(p2) %.5f - 1e-3 at beta=%.1f", mc[0].mean, mc[1].mean,
                        beta));
        for (std::size_t k = 2; k < candidates.size(); ++k) {
            const double slack =
                mc[1].mean - 1e-3 - (mc[k].mean - 3.0 * combined_se(mc[1].std_error, mc[k].std_error));
            min_p2_vs_static = std::min(min_p2_vs_static, slack);
            out.require(slack >= 0.0,
                        fmt("mc(p2) - 1e-3 trails mc(%s) - 3se by %.5f at beta=%.1f",
                            candidates[k].first, -slack, beta));
        }
        ++index;
    }
    out.summary = fmt(
        "kkt residuals <= 1e-6; min mc(p1)-mc(p2) = %+.4f; min slack of p2 over static = %+.4f",
        min_p1_vs_p2, min_p2_vs_static);
    return out;
}

// --- criterion 6: geometry-dependent skew --------------------------------------

Outcome criterion6() {
    NetworkParams params;
    params.theta = 1.0;
    const ContentParams content = ContentParams::zipf(12, 2, 0.4);

    Outcome out;
    std::vector<double> entropies;
    for (auto [sigma, lambda_km2] : {std::pair{10.0, 10.0}, {30.0, 30.0}, {50.0, 40.0}}) {
        params.sigma = sigma;
        params.lambda_p = lambda_km2 * 1e-6;
        const OptimResult p2 = optimize_p2(params, content);
        const double entropy = normalized_entropy(p2.c_star);
        entropies.push_back(entropy);
        note(fmt("sigma=%2.0f m lambda_p=%2.0f /km^2: normalized entropy %.5f", sigma,
                 lambda_km2, entropy));
    }
    for (std::size_t i = 1; i < entropies.size(); ++i)
        out.require(entropies[i] < entropies[i - 1],
                    fmt("entropy did not strictly decrease at step %zu", i));
    out.summary = fmt("normalized entropy %.4f > %.4f > %.4f (denser geometry, more skew)",
                      entropies[0], entropies[1], entropies[2]);
    return out;
}

// --- criterion 7: delivery scheme ordering and gain ------------------------------

Outcome criterion7() {
    NetworkParams params;
    params.sigma = 30.0;
    params.n_bar = 20.0;
    params.p = 0.5;
    params.theta = 0.1; // window pilot tuned at the lowest threshold in the sweep
    const double c_m = 0.5;

    Outcome out;
    double gain_at_10db = 0.0;
    int index = 0;
    for (double lambda_km2 : {10.0, 30.0}) {
        params.lambda_p = lambda_km2 * 1e-6;
        SimulationOptions options;
        options.trials = 20000;
        options.seed = 7700 + index++;
        const auto sirs = sample_sir_all(params, c_m, options);
        const double n = static_cast<double>(sirs.size());
        for (double theta_db : {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0}) {
            const double theta = std::pow(10.0, theta_db / 10.0);
            std::array<double, 3> coverage{};
            for (const auto& sample : sirs)
                for (int s = 0; s < 3; ++s) coverage[s] += (sample[s] > theta) ? 1.0 : 0.0;
            std::array<double, 3> se{};
            for (int s = 0; s < 3; ++s) {
                coverage[s] /= n;
                se[s] = checks::binomial_se(coverage[s], sirs.size());
            }
            const double comp = coverage[0], ncp = coverage[1], rscp = coverage[2];
            note(fmt("lambda_p=%2.0f theta=%3.0f dB: comp=%.4f ncp=%.4f rscp=%.4f", lambda_km2,
                     theta_db, comp, ncp, rscp));
            out.require(comp >= ncp - 3.0 * combined_se(se[0], se[1]),
                        fmt("comp < ncp - 3se at lambda_p=%g theta=%g dB", lambda_km2, theta_db));
            out.require(ncp >= rscp - 3.0 * combined_se(se[1], se[2]),
                        fmt("ncp < rscp - 3se at lambda_p=%g theta=%g dB", lambda_km2, theta_db));
            if (theta_db == 10.0 && lambda_km2 == 30.0) {
                gain_at_10db = (rscp > 0.0) ? comp / rscp : 1e300;
                out.require(gain_at_10db >= 2.0,
                            fmt("comp/rscp = %.3f < 2 at theta=10 dB lambda_p=30", gain_at_10db));
            }
        }
    }
    out.summary = fmt("comp >= ncp >= rscp within 3se on the full sweep; comp/rscp = %.2f at "
                      "10 dB, lambda_p=30 (>= 2)",
                      gain_at_10db);
    return out;
}

// --- criterion 8: module property suites ------------------------------------------

Outcome criterion8() {
    Outcome out;
    int passed = 0;
    std::vector<checks::CheckResult> results = checks::run_all_checks(8800);
    for (const checks::CheckResult& r : results) {
        note(fmt("%-34s %s %s", r.name.c_str(), r.ok ? "ok  " : "FAIL", r.detail.c_str()));
        if (r.ok)
            ++passed;
        else
            out.require(false, "property check failed: " + r.name);
    }
    out.summary = fmt("%d/%zu property checks passed", passed, results.size());
    return out;
}

struct Criterion {
    int id;
    const char* label;
    double budget_s;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "coverage lower bound vs Monte Carlo", 300, criterion1},
    {2, "nearest-provider distance law", 60, criterion2},
    {3, "mean-plus-nearest approximation tightness", 600, criterion3},
    {4, "offloading gain consistency under Zipf caching", 600, criterion4},
    {5, "optimizer dominance with certificates", 900, criterion5},
    {6, "geometry-driven caching skew", 60, criterion6},
    {7, "delivery scheme ordering and gain", 600, criterion7},
    {8, "module property suites", 600, criterion8},
};

bool run_criterion(const Criterion& criterion) {
    std::printf("criterion %d: %s\n", criterion.id, criterion.label);
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = criterion.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_s)
        std::printf("[WARN] criterion %d: runtime %.0f s exceeded the %.0f s budget\n",
                    criterion.id, elapsed, criterion.budget_s);
    std::printf("[%s] criterion %d: %s (%.1f s)\n", outcome.ok ? "PASS" : "FAIL", criterion.id,
                outcome.summary.c_str(), elapsed);
    std::fflush(stdout);
    return outcome.ok;
}

} // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (selected < 0 || selected > 8) {
        std::fprintf(stderr, "criterion must be 1..8\n");
        return 2;
    }

    bool all_ok = true;
    for (const Criterion& criterion : kCriteria)
        if (selected == 0 || criterion.id == selected) all_ok &= run_criterion(criterion);
    return all_ok ? 0 : 1;
}
