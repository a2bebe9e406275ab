#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace clr {

enum class FitnessShaping { None, CenteredRank };

struct EsConfig {
    int n = 20;                // population size, even when mirrored
    double sigma = 0.05;       // perturbation scale
    double alpha = 0.01;       // learning rate
    int iters = 40;
    int eval_episodes = 1;     // rollouts averaged per fitness evaluation
    FitnessShaping shaping = FitnessShaping::CenteredRank;
    bool mirrored = true;
    std::uint64_t seed = 0;
    // When > 0, use the 1/((d+4) sqrt(T+1) L) learning-rate schedule with this
    // Lipschitz constant instead of alpha (benchmark objectives only).
    double theory_lipschitz = 0.0;
    // Evaluation threads. Results are a pure function of the seed, never of
    // the schedule.
    int parallelism = 1;

    void validate() const;
};

// Fitness of a flat parameter vector; eval_seed lets episodic objectives
// resample scenarios, deterministic objectives ignore it.
using Objective = std::function<double(std::span<const double> theta,
                                       std::uint64_t eval_seed)>;

// g = 1/(n sigma) * sum_i F~_i eps_i with F~ the raw fitnesses or the
// centered ranks mapped to [-0.5, 0.5] (average ranks on ties, so a constant
// population yields an exactly zero estimate).
std::vector<double> es_gradient_estimate(std::span<const double> fitnesses,
                                         const std::vector<std::vector<double>>& perturbations,
                                         double sigma, FitnessShaping shaping);

struct IterationStats {
    double pop_mean = 0.0;
    double pop_max = 0.0;
};

// One ascent update in place: sample n perturbations (antithetic norm-matched
// pairs when mirrored), evaluate, apply alpha * gradient estimate.
IterationStats es_step(std::vector<double>& theta, const Objective& objective,
                       const EsConfig& cfg, int iteration);

struct TrainRecord {
    struct Row {
        int iteration;        // 0 is the pre-training evaluation
        double pop_mean;      // NaN on row 0
        double eval_fitness;  // held-out evaluation of the current params
        double best_so_far;
        double wall_ms;
    };
    std::vector<Row> rows;
    int best_iteration = 0;

    std::vector<double> eval_curve() const;
};

struct TrainResult {
    std::vector<double> best_theta;  // best-evaluated snapshot, not the last
    double best_fitness = 0.0;
    TrainRecord record;
};

TrainResult train_task(const Objective& objective, std::vector<double> theta0,
                       const EsConfig& cfg);

// Benchmark objectives, maximized.
double bench_f1(double x);
double bench_f2(double x, double y);

// Index-ordered parallel map; falls back to a serial loop for degree <= 1.
void parallel_for(int count, int degree, const std::function<void(int)>& fn);

}  // namespace clr
