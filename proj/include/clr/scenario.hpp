#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clr/grid.hpp"

namespace clr {

struct RenewableProfile {
    std::string device;
    std::vector<double> actual_kw;  // length T, each in [0, cap]
    double cap_kw = 0.0;
};

// f(t, x) = forecast made at step t for step t+x, x in {0, .., lookahead-1}.
// f(t, 0) is the realized value at t; beyond the horizon the last actual
// value is held so the state stays fixed-dimensional.
struct ForecastTensor {
    std::string device;
    int horizon = 0;    // T
    int lookahead = 0;  // kappa/tau
    std::vector<double> values;  // row-major T x lookahead, kW

    double at(int t, int x) const { return values[static_cast<std::size_t>(t) * lookahead + x]; }
};

RenewableProfile generate_profile(double cap_kw, int horizon, ProfileShape shape,
                                  std::uint64_t seed);
RenewableProfile profile_from_values(const std::string& device,
                                     const std::vector<double>& values_kw,
                                     double cap_kw, int horizon);

// Relative forecast error at lookahead x is zero-mean gaussian with standard
// deviation error_level * x / lookahead: errors grow linearly with lookahead
// and the scale at full depth equals error_level. Noise is addressed per
// (t, x) so the same seed yields the same draws at every error level.
ForecastTensor synthesize_forecast(const RenewableProfile& profile,
                                   double error_level, double kappa_hours,
                                   double tau_hours, std::uint64_t seed);

struct Task {
    std::string id;
    SystemModel system;
    std::vector<double> demand_p_kw;    // per load, overrides applied
    std::vector<double> demand_q_kvar;  // base power factor preserved
    std::vector<RenewableProfile> profiles;    // one per renewable, fleet order
    std::vector<ForecastTensor> forecasts;
    double error_level = 0.0;  // Xi
    int horizon_steps = 72;
    double tau_hours = 1.0 / 12.0;
    double kappa_hours = 4.0;
    double mu = 1.0;       // fluctuation penalty weight
    double lambda = 1e8;   // voltage penalty weight
    std::uint64_t seed = 0;

    int lookahead_steps() const;
    void validate() const;
};

struct TaskFamilyOptions {
    int count = 60;
    double demand_lo_kw = 20.0;
    double demand_hi_kw = 160.0;
    double error_level = 0.0;
    double kappa_hours = 4.0;
    double tau_hours = 1.0 / 12.0;
    int horizon_steps = 72;
    double mu = 1.0;
    double lambda = 1e8;
};

// Tasks vary per-load active demand uniformly in [lo, hi], keep the base
// power factor, and draw fresh renewable scenarios. Actual profiles depend
// only on (seed, task index, device), never on the error level or lookahead,
// so sweep cells share scenarios.
std::vector<Task> make_task_family(const SystemModel& base,
                                   const TaskFamilyOptions& opt,
                                   std::uint64_t seed);

struct TaskSplit {
    std::vector<Task> train;
    std::vector<Task> test;
};
TaskSplit split_family(const std::vector<Task>& tasks, int n_train);

}  // namespace clr
