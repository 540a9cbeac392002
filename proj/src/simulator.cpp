#include "d2dcomp/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "d2dcomp/errors.hpp"
#include "d2dcomp/rng.hpp"

namespace d2dcomp {

namespace {

constexpr std::uint64_t kTrialChunk = 4096;
// Seed lane for internal window-radius pilots, far above any trial index.
constexpr std::uint64_t kWindowSeedLane = 0x57494E444F570000ULL;

// One full coverage trial. Fixed draw order (the reproducibility contract):
// representative center; provider count; per provider offset then fading;
// the RSCP pick (only when >1 provider); then the remote field: parent
// count, then per parent its position, active-member count, and per member
// offset and fading. `inner` <= 0 disables the secondary accumulator.
struct TrialDraw {
    int providers = 0;
    double x[3] = {0.0, 0.0, 0.0}; // desired power per scheme, gamma_d-free
    double y = 0.0;                // interference inside `window`
    double y_inner = 0.0;          // interference inside `inner`
};

TrialDraw run_trial(const NetworkParams& params, double c_m, double window,
                    double inner, Rng& rng) {
    TrialDraw draw;
    std::normal_distribution<double> offset(0.0, params.sigma);
    std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const Vec2 center{offset(rng), offset(rng)};

    const double mu = c_m * params.p * params.n_bar;
    long long k = 0;
    if (mu > 0.0) {
        std::poisson_distribution<long long> count(mu);
        k = count(rng);
    }
    draw.providers = static_cast<int>(k);

    double sum_re = 0.0, sum_im = 0.0;
    double nearest_dist = std::numeric_limits<double>::infinity();
    double nearest_re = 0.0, nearest_im = 0.0;
    double first_re = 0.0, first_im = 0.0;
    std::vector<double> re, im;
    if (k > 1) {
        re.reserve(static_cast<std::size_t>(k));
        im.reserve(static_cast<std::size_t>(k));
    }
    for (long long i = 0; i < k; ++i) {
        const Vec2 member = center + Vec2{offset(rng), offset(rng)};
        const double h = member.norm();
        const double amp = std::sqrt(path_loss(h, params.alpha));
        const double gr = gauss(rng) * amp;
        const double gi = gauss(rng) * amp;
        sum_re += gr;
        sum_im += gi;
        if (h < nearest_dist) {
            nearest_dist = h;
            nearest_re = gr;
            nearest_im = gi;
        }
        if (i == 0) {
            first_re = gr;
            first_im = gi;
        }
        if (k > 1) {
            re.push_back(gr);
            im.push_back(gi);
        }
    }
    if (k > 0) {
        draw.x[0] = sum_re * sum_re + sum_im * sum_im;
        draw.x[1] = nearest_re * nearest_re + nearest_im * nearest_im;
        if (k > 1) {
            std::uniform_int_distribution<std::size_t> pick(
                0, static_cast<std::size_t>(k) - 1);
            const std::size_t chosen = pick(rng);
            draw.x[2] = re[chosen] * re[chosen] + im[chosen] * im[chosen];
        } else {
            draw.x[2] = first_re * first_re + first_im * first_im;
        }
    }

    const double parent_mean = params.lambda_p * M_PI * window * window;
    long long parents = 0;
    if (parent_mean > 0.0) {
        std::poisson_distribution<long long> count(parent_mean);
        parents = count(rng);
    }
    const double active_mean = params.p * params.n_bar;
    const double inner_sq = inner > 0.0 ? inner * inner : -1.0;
    for (long long c = 0; c < parents; ++c) {
        const double r = window * std::sqrt(unif(rng));
        const double a = 2.0 * M_PI * unif(rng);
        const Vec2 parent{r * std::cos(a), r * std::sin(a)};
        long long actives = 0;
        if (active_mean > 0.0) {
            std::poisson_distribution<long long> count(active_mean);
            actives = count(rng);
        }
        const bool is_inner = inner_sq >= 0.0 && parent.norm_sq() <= inner_sq;
        for (long long i = 0; i < actives; ++i) {
            const Vec2 member = parent + Vec2{offset(rng), offset(rng)};
            const double fading = -std::log1p(-unif(rng));
            const double contrib = fading * path_loss(member.norm(), params.alpha);
            draw.y += contrib;
            if (is_inner) draw.y_inner += contrib;
        }
    }
    return draw;
}

double trial_sir(const TrialDraw& draw, int scheme) {
    if (draw.providers == 0) return -1.0;
    if (draw.y > 0.0) return draw.x[scheme] / draw.y;
    return std::numeric_limits<double>::infinity();
}

double resolve_window(const NetworkParams& params, double c_m,
                      const SimulationOptions& options) {
    if (options.window_radius > 0.0) return options.window_radius;
    return choose_window_radius(params, c_m, sub_seed(options.seed, kWindowSeedLane));
}

int resolve_threads(const SimulationOptions& options) {
    if (options.threads > 0) return options.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run `trials` independent trials, each on its own sub-seeded generator, and
// hand every draw to `consume(trial_index, draw)`. Chunks are distributed
// over threads; consumers touch disjoint state per trial index, so results
// cannot depend on the thread count.
template <typename Consume>
void run_trials(const NetworkParams& params, double c_m, double window,
                std::uint64_t trials, std::uint64_t seed, int threads,
                Consume&& consume) {
    const std::uint64_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
    const int workers =
        static_cast<int>(std::min<std::uint64_t>(chunks, static_cast<std::uint64_t>(threads)));
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= chunks) return;
            const std::uint64_t begin = chunk * kTrialChunk;
            const std::uint64_t end = std::min(trials, begin + kTrialChunk);
            for (std::uint64_t t = begin; t < end; ++t) {
                Rng rng = make_rng(seed, t);
                consume(t, run_trial(params, c_m, window, -1.0, rng));
            }
        }
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
}

Estimate binomial_estimate(std::uint64_t successes, std::uint64_t trials) {
    Estimate est;
    est.trials = trials;
    est.mean = static_cast<double>(successes) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
    return est;
}

} // namespace

void SimulationOptions::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
    if (!(window_radius >= 0.0) || !std::isfinite(window_radius))
        throw std::invalid_argument("window_radius must be nonnegative and finite");
}

void EnergyParams::validate() const {
    if (!(p_d_watts > 0.0) || !std::isfinite(p_d_watts))
        throw std::invalid_argument("p_d_watts must be positive and finite");
    if (!(s_bar_bits > 0.0) || !std::isfinite(s_bar_bits))
        throw std::invalid_argument("s_bar_bits must be positive and finite");
    if (!(w_hz > 0.0) || !std::isfinite(w_hz))
        throw std::invalid_argument("w_hz must be positive and finite");
}

std::array<Estimate, 3> estimate_rate_coverage_all(const NetworkParams& params,
                                                   double c_m,
                                                   const SimulationOptions& options) {
    params.validate();
    options.validate();
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
    const double window = resolve_window(params, c_m, options);
    const int threads = resolve_threads(options);

    std::array<std::atomic<std::uint64_t>, 3> covered{};
    run_trials(params, c_m, window, options.trials, options.seed, threads,
               [&](std::uint64_t, const TrialDraw& draw) {
                   for (int s = 0; s < 3; ++s) {
                       const double sir = trial_sir(draw, s);
                       if (sir >= params.theta) covered[s].fetch_add(1);
                   }
               });

    std::array<Estimate, 3> result;
    for (int s = 0; s < 3; ++s)
        result[s] = binomial_estimate(covered[s].load(), options.trials);
    return result;
}

Estimate estimate_rate_coverage(DeliveryScheme scheme, const NetworkParams& params,
                                double c_m, const SimulationOptions& options) {
    return estimate_rate_coverage_all(params, c_m, options)[static_cast<int>(scheme)];
}

std::vector<std::array<double, 3>> sample_sir_all(const NetworkParams& params,
                                                  double c_m,
                                                  const SimulationOptions& options) {
    params.validate();
    options.validate();
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
    const double window = resolve_window(params, c_m, options);
    const int threads = resolve_threads(options);

    std::vector<std::array<double, 3>> sirs(options.trials);
    run_trials(params, c_m, window, options.trials, options.seed, threads,
               [&](std::uint64_t t, const TrialDraw& draw) {
                   for (int s = 0; s < 3; ++s) sirs[t][s] = trial_sir(draw, s);
               });
    return sirs;
}

Estimate estimate_offloading_gain(const NetworkParams& params,
                                  const ContentParams& content,
                                  const CachingVector& caching,
                                  const SimulationOptions& options) {
    params.validate();
    content.validate();
    options.validate();
    if (caching.size() != static_cast<std::size_t>(content.n_files))
        throw std::invalid_argument("caching must have one entry per file");
    for (double c : caching)
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("caching entries must lie in [0, 1]");

    std::vector<double> cdf(content.popularity.size());
    double cum = 0.0;
    for (std::size_t m = 0; m < cdf.size(); ++m) {
        cum += content.popularity[m];
        cdf[m] = cum;
    }
    cdf.back() = 1.0;

    const double window =
        resolve_window(params, *std::max_element(caching.begin(), caching.end()),
                       options);
    const int threads = resolve_threads(options);

    // Request sampling: file from the popularity law, then self-cache hit or
    // a full coverage trial against that file's provider process.
    const std::uint64_t chunks = (options.trials + kTrialChunk - 1) / kTrialChunk;
    const int workers = static_cast<int>(
        std::min<std::uint64_t>(chunks, static_cast<std::uint64_t>(threads)));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> served{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= chunks) return;
            const std::uint64_t begin = chunk * kTrialChunk;
            const std::uint64_t end = std::min(options.trials, begin + kTrialChunk);
            std::uint64_t hits = 0;
            for (std::uint64_t t = begin; t < end; ++t) {
                Rng rng = make_rng(options.seed, t);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                const double pick = unif(rng);
                const std::size_t m = static_cast<std::size_t>(
                    std::lower_bound(cdf.begin(), cdf.end(), pick) - cdf.begin());
                if (unif(rng) < caching[m]) {
                    ++hits;
                    continue;
                }
                const TrialDraw draw =
                    run_trial(params, caching[m], window, -1.0, rng);
                if (trial_sir(draw, 0) >= params.theta) ++hits;
            }
            served.fetch_add(hits);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
    return binomial_estimate(served.load(), options.trials);
}

double energy_per_request(double q_m, double c_m, double n_bar,
                          const EnergyParams& energy, double theta,
                          double upsilon_m) {
    energy.validate();
    if (!(q_m > 0.0 && q_m <= 1.0))
        throw std::invalid_argument("q_m must lie in (0, 1]");
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
    if (!(n_bar > 0.0) || !std::isfinite(n_bar))
        throw std::invalid_argument("n_bar must be positive and finite");
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("theta must be nonnegative and finite");
    if (!std::isfinite(upsilon_m) || upsilon_m > 1.0)
        throw std::invalid_argument("upsilon_m must lie in (0, 1]");
    const double rate = energy.w_hz * std::log2(1.0 + theta) * upsilon_m;
    if (!(rate > 0.0))
        throw NumericError("delivered rate is zero; energy per request undefined");
    if (c_m == 0.0) return 0.0;
    return q_m * c_m * n_bar * energy.p_d_watts * energy.s_bar_bits / rate;
}

double choose_window_radius(const NetworkParams& params, double c_m,
                            std::uint64_t seed) {
    params.validate();
    if (!(c_m >= 0.0 && c_m <= 1.0))
        throw std::invalid_argument("c_m must lie in [0, 1]");
    const double base = std::sqrt(300.0 / (M_PI * params.lambda_p));
    constexpr std::uint64_t kPilots = 1024;
    constexpr int kDoublings = 5;
    for (int step = 0; step < kDoublings; ++step) {
        const double radius = base * static_cast<double>(1 << step);
        std::uint64_t inner_count = 0;
        std::uint64_t outer_count = 0;
        for (std::uint64_t j = 0; j < kPilots; ++j) {
            Rng rng = make_rng(seed, static_cast<std::uint64_t>(step) * kPilots + j);
            const TrialDraw draw =
                run_trial(params, c_m, 2.0 * radius, radius, rng);
            if (draw.providers == 0) continue;
            const double sir_inner = draw.y_inner > 0.0
                                         ? draw.x[0] / draw.y_inner
                                         : std::numeric_limits<double>::infinity();
            const double sir_outer = draw.y > 0.0
                                         ? draw.x[0] / draw.y
                                         : std::numeric_limits<double>::infinity();
            if (sir_inner >= params.theta) ++inner_count;
            if (sir_outer >= params.theta) ++outer_count;
        }
        const double p_outer =
            static_cast<double>(outer_count) / static_cast<double>(kPilots);
        const double delta = std::abs(static_cast<double>(inner_count) -
                                      static_cast<double>(outer_count)) /
                             static_cast<double>(kPilots);
        const double se = std::sqrt(p_outer * (1.0 - p_outer) /
                                    static_cast<double>(kPilots));
        if (delta <= se) return radius;
    }
    return base * static_cast<double>(1 << kDoublings);
}

} // namespace d2dcomp
