#include "d2dcomp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "d2dcomp/errors.hpp"
#include "d2dcomp/rng.hpp"

namespace d2dcomp {

namespace {

// Optimizers check structure only, not popularity normalization: the solution
// map must commute with popularity rescaling, so sum q = 1 is not required
// here.
void check_problem(const NetworkParams& params, const ContentParams& content) {
    params.validate();
    if (content.n_files < 1) throw std::invalid_argument("n_files must be at least 1");
    if (content.cache_size < 1 || content.cache_size > content.n_files)
        throw std::invalid_argument("cache_size must lie in [1, n_files]");
    if (content.popularity.size() != static_cast<std::size_t>(content.n_files))
        throw std::invalid_argument("popularity must have one entry per file");
    for (double q : content.popularity)
        if (!(q > 0.0) || !std::isfinite(q))
            throw std::invalid_argument("popularity entries must be positive and finite");
}

void check_vector(const CachingVector& c, int n_files) {
    if (c.size() != static_cast<std::size_t>(n_files))
        throw std::invalid_argument("c must have one entry per file");
    for (double v : c)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("c entries must lie in [0, 1]");
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Degenerate linear objective (a = 0, the no-provider network): maximize
// sum q c under the budget, splitting the boundary tie group evenly.
OptimResult linear_budget_solution(const ContentParams& content) {
    const std::vector<double>& q = content.popularity;
    std::vector<double> sorted(q);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double thr = sorted[static_cast<std::size_t>(content.cache_size) - 1];
    int ones = 0, ties = 0;
    for (double v : q) {
        if (v > thr) ++ones;
        else if (v == thr) ++ties;
    }
    const double share = (content.cache_size - ones) / static_cast<double>(ties);
    OptimResult result;
    result.c_star.resize(q.size());
    double total = 0.0;
    for (std::size_t m = 0; m < q.size(); ++m) {
        result.c_star[m] = q[m] > thr ? 1.0 : (q[m] == thr ? share : 0.0);
        total += result.c_star[m];
    }
    result.v_star = thr;
    result.budget_residual = std::abs(total - content.cache_size);
    return result;
}

// ---- single-provider objective pieces ----

struct P2Problem {
    double a = 0.0;
    double z = 1.0;
    double factor_at_1 = 0.0; // phi'(1)/q
    double factor_at_0 = 0.0; // phi'(0)/q

    explicit P2Problem(const NetworkParams& params)
        : a(params.p * params.n_bar), z(z_factor(params)) {
        factor_at_1 = 1.0 + std::expm1(-a) / z;
        factor_at_0 = 1.0 + a / z;
    }

    // phi'(c)/q, strictly decreasing in c.
    double derivative_factor(double c) const {
        return 1.0 + ((1.0 - c) * a * std::exp(-a * c) + std::expm1(-a * c)) / z;
    }

    // phi''(c)/q < 0.
    double curvature_factor(double c) const {
        return -a * std::exp(-a * c) * (2.0 + a * (1.0 - c)) / z;
    }

    // Unique c with phi'(c) = v, saturated at the box. All comparisons stay
    // in v-versus-q*factor form, so rescaling every q and v by a power of
    // two reproduces the same c bitwise.
    double c_of_v(double q, double v) const {
        if (v >= q * factor_at_0) return 0.0;
        if (v <= q * factor_at_1) return 1.0;
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 90; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (q * derivative_factor(mid) > v) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
};

double p2_value(double c, double a, double z) {
    return c + (1.0 - c) * (-std::expm1(-a * c)) / z;
}

// ---- mean-plus-nearest surrogate pieces ----

// I(c0) with rate_coverage_approx(c) ~= c * a * I(c) exactly at c = c0:
// the per-file linearization slope of the approximate rate coverage.
double surrogate_slope_integral(double c0, const NetworkParams& params,
                                const LaplaceTable& table,
                                const QuadratureSettings& qs) {
    const double a = params.p * params.n_bar;
    const double s2 = 2.0 * params.sigma * params.sigma;
    const bool quartic = params.alpha == 4.0;
    return integrate(
        [&](double h) {
            const double x = h * h / (2.0 * s2);
            const double density = h / s2 * std::exp(c0 * a * std::expm1(-x) - x);
            const double h2 = h * h;
            const double pl = quartic ? 1.0 / (h2 * h2) : std::pow(h, -params.alpha);
            const double denom = pl + cond_mean(h, c0, params, qs);
            return density * table(params.theta / (params.gamma_d * denom));
        },
        0.0, 14.0 * params.sigma, qs);
}

// Exact water-filling for the linearized objective
// sum q_m (c_m + (1-c_m) a I_m c_m): c_m(v) = clamp(1/2 - (v-q_m)/(2 q_m a I_m)).
struct WaterFill {
    CachingVector c;
    double v = 0.0;
    double residual = 0.0;
};

WaterFill water_fill(const std::vector<double>& q, const std::vector<double>& slope,
                     double a, int cache_size) {
    const std::size_t n = q.size();
    std::vector<double> denom(n); // 2 q_m a I_m, floored so I = 0 degrades to
                                  // the linear limit instead of dividing by 0
    double v_lo = std::numeric_limits<double>::infinity();
    double v_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < n; ++m) {
        const double ai = std::max(slope[m], 0.0) * a;
        denom[m] = std::max(2.0 * q[m] * ai, 1e-300);
        v_lo = std::min(v_lo, q[m] * (1.0 - ai));
        v_hi = std::max(v_hi, q[m] * (1.0 + ai));
    }
    auto c_of_v = [&](double v) {
        CachingVector c(n);
        for (std::size_t m = 0; m < n; ++m)
            c[m] = clamp01(0.5 - (v - q[m]) / denom[m]);
        return c;
    };
    auto total = [](const CachingVector& c) {
        double s = 0.0;
        for (double v : c) s += v;
        return s;
    };

    const double budget = static_cast<double>(cache_size);
    // The bracket already pins sum(v_lo) = n >= M and sum(v_hi) = 0 <= M;
    // widen geometrically as a guard against rounding at the edges.
    double width = v_hi - v_lo;
    for (int grow = 0; total(c_of_v(v_lo)) < budget; ++grow) {
        if (grow >= 60) throw NumericError("water-filling bracket failure");
        v_lo -= width;
        width *= 2.0;
    }
    width = v_hi - v_lo;
    for (int grow = 0; total(c_of_v(v_hi)) > budget; ++grow) {
        if (grow >= 60) throw NumericError("water-filling bracket failure");
        v_hi += width;
        width *= 2.0;
    }

    for (int i = 0; i < 110 && v_lo < v_hi; ++i) {
        const double mid = 0.5 * (v_lo + v_hi);
        if (mid <= v_lo || mid >= v_hi) break;
        if (total(c_of_v(mid)) >= budget) v_lo = mid;
        else v_hi = mid;
    }

    WaterFill result;
    result.v = v_lo;
    result.c = c_of_v(v_lo);

    // The active set is now fixed; solve the interior multiplier exactly.
    int ones = 0;
    double sum_half = 0.0, sum_inv = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (result.c[m] >= 1.0) ++ones;
        else if (result.c[m] > 0.0) {
            sum_half += 0.5 + q[m] / denom[m];
            sum_inv += 1.0 / denom[m];
        }
    }
    if (sum_inv > 0.0) {
        const double v_exact = (sum_half - (budget - ones)) / sum_inv;
        CachingVector refined = c_of_v(v_exact);
        if (std::abs(total(refined) - budget) <= std::abs(total(result.c) - budget)) {
            result.v = v_exact;
            result.c = std::move(refined);
        }
    }
    result.residual = std::abs(total(result.c) - budget);
    return result;
}

struct SurrogateCertificate {
    double v = 0.0;
    double stationarity = 0.0;
};

// Max KKT violation of c against the linearized objective with slopes I_m.
SurrogateCertificate surrogate_kkt(const CachingVector& c, const std::vector<double>& q,
                                   const std::vector<double>& slope, double a,
                                   double v_hint, bool use_hint) {
    const std::size_t n = q.size();
    std::vector<double> grad(n);
    for (std::size_t m = 0; m < n; ++m)
        grad[m] = q[m] * (1.0 + a * std::max(slope[m], 0.0) * (1.0 - 2.0 * c[m]));
    double v = v_hint;
    if (!use_hint) {
        // Chebyshev center of the interior gradients.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t m = 0; m < n; ++m) {
            if (c[m] > 0.0 && c[m] < 1.0) {
                lo = std::min(lo, grad[m]);
                hi = std::max(hi, grad[m]);
            }
        }
        v = lo <= hi ? 0.5 * (lo + hi) : 0.0;
    }
    double violation = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (c[m] <= 0.0) violation = std::max(violation, grad[m] - v);
        else if (c[m] >= 1.0) violation = std::max(violation, v - grad[m]);
        else violation = std::max(violation, std::abs(grad[m] - v));
    }
    SurrogateCertificate cert;
    cert.v = v;
    cert.stationarity = violation;
    return cert;
}

} // namespace

void OptimizerSettings::validate() const {
    if (!(bisection_tol > 0.0)) throw std::invalid_argument("bisection_tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (multistart_count < 0)
        throw std::invalid_argument("multistart_count must be nonnegative");
    if (!(fixed_point_tol > 0.0))
        throw std::invalid_argument("fixed_point_tol must be positive");
}

double objective_p2(const CachingVector& c, const NetworkParams& params,
                    const ContentParams& content) {
    check_problem(params, content);
    check_vector(c, content.n_files);
    const double a = params.p * params.n_bar;
    const double z = z_factor(params);
    double total = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m)
        total += content.popularity[m] * p2_value(c[m], a, z);
    return total;
}

double objective_p1(const CachingVector& c, const NetworkParams& params,
                    const ContentParams& content, const LaplaceTable* table) {
    check_problem(params, content);
    check_vector(c, content.n_files);
    const LaplaceTable local = table ? LaplaceTable(*table) : LaplaceTable(params);
    std::map<double, double> memo; // files sharing c_m share the integral
    double total = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        auto it = memo.find(c[m]);
        if (it == memo.end())
            it = memo.emplace(c[m], rate_coverage_approx(c[m], params,
                                                         NearestPdfVariant::jensen,
                                                         &local))
                     .first;
        total += content.popularity[m] * (c[m] + (1.0 - c[m]) * it->second);
    }
    return total;
}

OptimResult optimize_p2(const NetworkParams& params, const ContentParams& content,
                        const OptimizerSettings& settings) {
    check_problem(params, content);
    settings.validate();
    const std::vector<double>& q = content.popularity;
    const double budget = static_cast<double>(content.cache_size);

    if (params.p * params.n_bar == 0.0) {
        OptimResult result = linear_budget_solution(content);
        result.objective = objective_p2(result.c_star, params, content);
        KktReport report = kkt_report_p2(result.c_star, result.v_star, params, content);
        result.stationarity_residual = report.max_stationarity_violation;
        result.converged = result.budget_residual <= settings.bisection_tol;
        return result;
    }

    const P2Problem problem(params);
    auto total_at = [&](double v) {
        double s = 0.0;
        for (double qm : q) s += problem.c_of_v(qm, v);
        return s;
    };

    double v_lo = 0.0;
    double v_hi = 0.0;
    for (double qm : q) v_hi = std::max(v_hi, qm * problem.factor_at_0);

    int iterations = 0;
    double v = v_lo;
    if (total_at(v_lo) - budget > 0.0) {
        for (; iterations < 200; ++iterations) {
            v = 0.5 * (v_lo + v_hi);
            const double excess = total_at(v) - budget;
            if (std::abs(excess) < 0.1 * settings.bisection_tol) break;
            if (excess >= 0.0) v_lo = v;
            else v_hi = v;
            if (!(v_lo < v_hi)) break;
        }
        // Newton polish on the multiplier; exact derivative from the interior
        // curvatures. Scale-equivariant like the bisection.
        for (int step = 0; step < 3; ++step) {
            double excess = -budget;
            double slope = 0.0;
            for (double qm : q) {
                const double c = problem.c_of_v(qm, v);
                excess += c;
                if (c > 0.0 && c < 1.0)
                    slope += 1.0 / (qm * problem.curvature_factor(c));
            }
            if (slope == 0.0 || excess == 0.0) break;
            const double next = v - excess / slope;
            if (!std::isfinite(next) || next <= 0.0) break;
            v = next;
        }
    }

    OptimResult result;
    result.c_star.resize(q.size());
    double total = 0.0;
    for (std::size_t m = 0; m < q.size(); ++m) {
        result.c_star[m] = problem.c_of_v(q[m], v);
        total += result.c_star[m];
    }
    result.v_star = v;
    result.iterations = iterations;
    result.budget_residual = std::abs(total - budget);
    result.converged = result.budget_residual <= settings.bisection_tol;
    result.objective = objective_p2(result.c_star, params, content);
    const KktReport report = kkt_report_p2(result.c_star, v, params, content);
    result.stationarity_residual = report.max_stationarity_violation;
    return result;
}

KktReport kkt_report_p2(const CachingVector& c, double v, const NetworkParams& params,
                        const ContentParams& content) {
    check_problem(params, content);
    check_vector(c, content.n_files);
    const double a = params.p * params.n_bar;
    const double z = z_factor(params);
    KktReport report;
    double total = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        total += c[m];
        const double q = content.popularity[m];
        const double grad =
            a == 0.0 ? q
                     : q * (1.0 + ((1.0 - c[m]) * a * std::exp(-a * c[m]) +
                                   std::expm1(-a * c[m])) /
                                      z);
        double violation = 0.0;
        if (c[m] <= 0.0) violation = grad - v;
        else if (c[m] >= 1.0) violation = v - grad;
        else violation = std::abs(grad - v);
        report.max_stationarity_violation =
            std::max(report.max_stationarity_violation, violation);
    }
    report.budget_residual = std::abs(total - content.cache_size);
    return report;
}

OptimResult optimize_p1(const NetworkParams& params, const ContentParams& content,
                        const OptimizerSettings& settings, std::uint64_t seed) {
    check_problem(params, content);
    settings.validate();
    const std::vector<double>& q = content.popularity;
    const std::size_t n = q.size();
    const double a = params.p * params.n_bar;

    if (a == 0.0) {
        OptimResult result = linear_budget_solution(content);
        result.objective = objective_p1(result.c_star, params, content);
        result.converged = result.budget_residual <= settings.bisection_tol;
        return result;
    }

    const LaplaceTable table(params);
    const QuadratureSettings qs;
    auto slopes_at = [&](const CachingVector& c0) {
        std::map<double, double> memo;
        std::vector<double> slope(n);
        for (std::size_t m = 0; m < n; ++m) {
            auto it = memo.find(c0[m]);
            if (it == memo.end())
                it = memo.emplace(c0[m],
                                  surrogate_slope_integral(c0[m], params, table, qs))
                         .first;
            slope[m] = it->second;
        }
        return slope;
    };

    struct Candidate {
        CachingVector c;
        double v = 0.0;
        double residual = 0.0;
        std::vector<double> slope;
        bool from_water_fill = false;
        int iterations = 0;
        bool converged = true;
    };

    auto fixed_point = [&](CachingVector c0) {
        Candidate cand;
        double prev_diff = std::numeric_limits<double>::infinity();
        const int rounds = settings.iterate_surrogate ? settings.max_iter : 1;
        for (int iter = 1; iter <= rounds; ++iter) {
            cand.iterations = iter;
            cand.slope = slopes_at(c0);
            WaterFill wf = water_fill(q, cand.slope, a, content.cache_size);
            cand.c = wf.c;
            cand.v = wf.v;
            cand.residual = wf.residual;
            cand.from_water_fill = true;
            double diff = 0.0;
            for (std::size_t m = 0; m < n; ++m)
                diff = std::max(diff, std::abs(wf.c[m] - c0[m]));
            if (diff <= settings.fixed_point_tol || !settings.iterate_surrogate)
                return cand;
            if (diff >= prev_diff) {
                // Oscillation: damp the linearization point.
                for (std::size_t m = 0; m < n; ++m) c0[m] = 0.5 * (c0[m] + wf.c[m]);
            } else {
                c0 = wf.c;
            }
            prev_diff = diff;
        }
        cand.converged = false;
        return cand;
    };

    std::vector<Candidate> pool;
    const OptimResult warm = optimize_p2(params, content, settings);
    pool.push_back(fixed_point(warm.c_star));

    Rng rng = make_rng(seed, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < settings.multistart_count; ++s) {
        CachingVector start(n);
        for (std::size_t m = 0; m < n; ++m) start[m] = unif(rng);
        pool.push_back(fixed_point(start));
    }

    // The raw single-provider solution competes directly, so the chosen
    // objective can never fall below it.
    {
        Candidate raw;
        raw.c = warm.c_star;
        raw.v = warm.v_star;
        raw.residual = warm.budget_residual;
        raw.slope = slopes_at(warm.c_star);
        raw.from_water_fill = false;
        pool.push_back(std::move(raw));
    }

    std::size_t best = 0;
    double best_objective = -std::numeric_limits<double>::infinity();
    std::vector<double> objectives(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        objectives[i] = objective_p1(pool[i].c, params, content, &table);
        if (objectives[i] > best_objective) {
            best_objective = objectives[i];
            best = i;
        }
    }

    const Candidate& winner = pool[best];
    OptimResult result;
    result.c_star = winner.c;
    result.objective = objectives[best];
    result.iterations = winner.iterations;
    result.converged = winner.converged;
    result.budget_residual = winner.residual;
    const SurrogateCertificate cert = surrogate_kkt(
        winner.c, q, winner.slope, a, winner.v, winner.from_water_fill);
    result.v_star = cert.v;
    result.stationarity_residual = cert.stationarity;
    return result;
}

double normalized_entropy(const CachingVector& c) {
    if (c.size() < 2)
        throw std::invalid_argument("c must have at least two entries");
    double mass = 0.0;
    for (double v : c) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("c entries must lie in [0, 1]");
        mass += v;
    }
    if (!(mass > 0.0)) throw std::invalid_argument("c must have positive mass");
    double entropy = 0.0;
    for (double v : c) {
        if (v <= 0.0) continue;
        const double w = v / mass;
        entropy -= w * std::log(w);
    }
    return entropy / std::log(static_cast<double>(c.size()));
}

} // namespace d2dcomp
