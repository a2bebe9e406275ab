#include "clr/es.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "clr/rng.hpp"

namespace clr {

namespace {

constexpr std::uint64_t kTagPerturb = 0x5e5a7b1e;
constexpr std::uint64_t kTagEpisode = 0xe915a0de;
constexpr std::uint64_t kTagEval = 0xe7a10000;

double effective_alpha(const EsConfig& cfg, std::size_t dim) {
    if (cfg.theory_lipschitz > 0.0)
        return 1.0 / ((static_cast<double>(dim) + 4.0) *
                      std::sqrt(static_cast<double>(cfg.iters) + 1.0) *
                      cfg.theory_lipschitz);
    return cfg.alpha;
}

// Gaussian direction rescaled to the sphere of radius sqrt(d). Keeps
// E[eps eps^T] = I and makes the antithetic estimate exact on scalar affine
// objectives for any population size.
std::vector<double> sample_direction(Rng& rng, std::size_t dim, bool norm_match) {
    std::vector<double> eps(dim);
    double norm2 = 0.0;
    for (double& e : eps) {
        e = rng.gaussian();
        norm2 += e * e;
    }
    if (norm_match && norm2 > 0.0) {
        double scale = std::sqrt(static_cast<double>(dim) / norm2);
        for (double& e : eps) e *= scale;
    }
    return eps;
}

double evaluate(const Objective& objective, std::span<const double> theta,
                std::uint64_t seed, int episodes) {
    double sum = 0.0;
    for (int e = 0; e < episodes; ++e)
        sum += objective(theta, derive_seed(seed, kTagEpisode, static_cast<std::uint64_t>(e)));
    return sum / episodes;
}

std::vector<double> centered_ranks(std::span<const double> fitnesses) {
    const int n = static_cast<int>(fitnesses.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitnesses[a] < fitnesses[b]; });

    // Average ranks across ties; map to [-0.5, 0.5].
    std::vector<double> ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && fitnesses[order[j + 1]] == fitnesses[order[i]]) ++j;
        double avg = 0.5 * (i + j);
        for (int k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    std::vector<double> shaped(n);
    for (int k = 0; k < n; ++k)
        shaped[k] = n > 1 ? ranks[k] / (n - 1) - 0.5 : 0.0;
    return shaped;
}

}  // namespace

void EsConfig::validate() const {
    if (n < 2) throw std::invalid_argument("population size must be >= 2");
    if (mirrored && n % 2 != 0)
        throw std::invalid_argument("mirrored sampling needs an even population");
    if (sigma <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("sigma and alpha must be positive");
    if (iters < 0) throw std::invalid_argument("iters must be >= 0");
    if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be >= 1");
}

void parallel_for(int count, int degree, const std::function<void(int)>& fn) {
    if (degree <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int threads = std::min(degree, count);
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::vector<double> es_gradient_estimate(std::span<const double> fitnesses,
                                         const std::vector<std::vector<double>>& perturbations,
                                         double sigma, FitnessShaping shaping) {
    if (fitnesses.size() != perturbations.size() || fitnesses.empty())
        throw std::invalid_argument("fitness/perturbation length mismatch");
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");

    std::vector<double> shaped;
    if (shaping == FitnessShaping::CenteredRank) {
        shaped = centered_ranks(fitnesses);
    } else {
        shaped.assign(fitnesses.begin(), fitnesses.end());
    }

    const std::size_t dim = perturbations.front().size();
    const double inv = 1.0 / (static_cast<double>(fitnesses.size()) * sigma);
    std::vector<double> g(dim, 0.0);
    for (std::size_t i = 0; i < perturbations.size(); ++i)
        for (std::size_t k = 0; k < dim; ++k) g[k] += shaped[i] * perturbations[i][k];
    for (double& v : g) v *= inv;
    return g;
}

IterationStats es_step(std::vector<double>& theta, const Objective& objective,
                       const EsConfig& cfg, int iteration) {
    cfg.validate();
    const std::size_t dim = theta.size();
    const int n = cfg.n;

    std::vector<std::vector<double>> eps(n);
    if (cfg.mirrored) {
        for (int i = 0; i < n / 2; ++i) {
            Rng rng(derive_seed(cfg.seed, kTagPerturb,
                                static_cast<std::uint64_t>(iteration),
                                static_cast<std::uint64_t>(i)));
            eps[2 * i] = sample_direction(rng, dim, true);
            eps[2 * i + 1].resize(dim);
            for (std::size_t k = 0; k < dim; ++k) eps[2 * i + 1][k] = -eps[2 * i][k];
        }
    } else {
        for (int i = 0; i < n; ++i) {
            Rng rng(derive_seed(cfg.seed, kTagPerturb,
                                static_cast<std::uint64_t>(iteration),
                                static_cast<std::uint64_t>(i)));
            eps[i] = sample_direction(rng, dim, false);
        }
    }

    // Fitness order is defined by perturbation index, not completion order.
    std::vector<double> fitness(n);
    parallel_for(n, cfg.parallelism, [&](int i) {
        std::vector<double> candidate(dim);
        for (std::size_t k = 0; k < dim; ++k)
            candidate[k] = theta[k] + cfg.sigma * eps[i][k];
        fitness[i] = evaluate(objective, candidate,
                              derive_seed(cfg.seed, kTagPerturb,
                                          static_cast<std::uint64_t>(iteration),
                                          static_cast<std::uint64_t>(i), 0xf17),
                              cfg.eval_episodes);
    });

    std::vector<double> g = es_gradient_estimate(fitness, eps, cfg.sigma, cfg.shaping);
    const double alpha = effective_alpha(cfg, dim);
    for (std::size_t k = 0; k < dim; ++k) theta[k] += alpha * g[k];

    IterationStats stats;
    stats.pop_mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / n;
    stats.pop_max = *std::max_element(fitness.begin(), fitness.end());
    return stats;
}

std::vector<double> TrainRecord::eval_curve() const {
    std::vector<double> curve;
    curve.reserve(rows.size());
    for (const auto& r : rows) curve.push_back(r.eval_fitness);
    return curve;
}

TrainResult train_task(const Objective& objective, std::vector<double> theta0,
                       const EsConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;

    // Held-out evaluation seeds, fixed across iterations and disjoint from
    // the perturbation stream.
    auto evaluate_current = [&](const std::vector<double>& theta) {
        return evaluate(objective, theta, derive_seed(cfg.seed, kTagEval),
                        cfg.eval_episodes);
    };

    TrainResult result;
    result.best_theta = theta0;
    result.best_fitness = -std::numeric_limits<double>::infinity();

    auto record_row = [&](int iter, double pop_mean, double eval, double wall_ms) {
        if (eval > result.best_fitness) {
            result.best_fitness = eval;
            result.best_theta = theta0;
            result.record.best_iteration = iter;
        }
        result.record.rows.push_back({iter, pop_mean, eval, result.best_fitness, wall_ms});
    };

    record_row(0, std::numeric_limits<double>::quiet_NaN(), evaluate_current(theta0), 0.0);

    for (int iter = 1; iter <= cfg.iters; ++iter) {
        auto start = clock::now();
        IterationStats stats = es_step(theta0, objective, cfg, iter);
        double eval = evaluate_current(theta0);
        double wall_ms =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
        record_row(iter, stats.pop_mean, eval, wall_ms);
    }
    return result;
}

double bench_f1(double x) { return -x * x + 10.0; }

// 100 minus the 2-d Ackley surface: global maximum of exactly 100 at the
// origin, ripple local maxima on the integer lattice elsewhere.
double bench_f2(double x, double y) {
    const double pi2 = 2.0 * std::numbers::pi;
    double ackley = -20.0 * std::exp(-0.2 * std::sqrt(0.5 * (x * x + y * y))) -
                    std::exp(0.5 * (std::cos(pi2 * x) + std::cos(pi2 * y))) +
                    std::numbers::e + 20.0;
    return 100.0 - ackley;
}

}  // namespace clr
