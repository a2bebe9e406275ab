#pragma once

#include <functional>
#include <span>
#include <vector>

#include "clr/scenario.hpp"

namespace clr {

// State layout: [forecast blocks per renewable | prev restoration fractions |
// storage SOC | fuel reserves | t]. Dimension is
// n_renew*lookahead + N + n_storage + n_fuel + 1.
struct EnvState {
    std::vector<double> forecast_kw;
    std::vector<double> prev_restoration;  // fractions in [0,1]
    std::vector<double> soc_kwh;
    std::vector<double> fuel_kwh;
    int t = 1;  // 1-based step index

    std::vector<double> as_vector() const;
    static int dimension(const Task& task);
};

// Action layout: [load levels | storage power (discharge-positive) |
// fuel power | angles for the first |G|-1 fleet devices]. The last device's
// angle is pinned at the midpoint of its bounds.
struct Action {
    std::vector<double> load_kw;
    std::vector<double> storage_kw;
    std::vector<double> fuel_kw;
    std::vector<double> angles_rad;

    static int dimension(const Task& task);
};

struct StepInfo {
    std::vector<double> served_kw;      // per load
    std::vector<double> der_p_kw;       // per fleet device (renewables post-curtailment)
    std::vector<double> der_q_kvar;
    std::vector<double> voltages;       // per bus, p.u.^2
    double curtailment_kw = 0.0;
    double balance_residual_kw = 0.0;
    double reactive_slack_kvar = 0.0;   // absorbed at the root
    double priority_term = 0.0;
    double fluctuation_term = 0.0;
    double voltage_term = 0.0;
};

struct StepOutcome {
    EnvState next;
    double reward = 0.0;
    StepInfo info;
    bool done = false;
};

struct Reconciled {
    std::vector<double> served_kw;
    std::vector<double> storage_kw;
    std::vector<double> fuel_kw;
    std::vector<double> renewable_kw;  // post-curtailment, per renewable
    double curtailment_kw = 0.0;
};

// State-tightened dispatch boxes: the SOC/fuel update cannot leave its box
// within one interval.
void storage_box(const Task& task, int storage_pos, double soc_kwh,
                 double& lo, double& hi);
void fuel_box(const Task& task, int fuel_pos, double fuel_kwh,
              double& lo, double& hi);

class Environment {
public:
    explicit Environment(Task task);

    EnvState reset();

    // Maps a squashed raw vector onto the state-tightened feasible boxes.
    Action project_action(std::span<const double> raw) const;
    // Clips an already-physical action into the same boxes.
    Action clip_action(const Action& a) const;

    StepOutcome step(std::span<const double> raw_action);
    StepOutcome step(const Action& action);

    const Task& task() const { return task_; }
    const EnvState& state() const { return state_; }

private:
    StepOutcome step_impl(const Action& projected);
    std::vector<double> forecast_block(int t) const;

    Task task_;
    EnvState state_;
    std::vector<int> renew_idx_, storage_idx_, fuel_idx_;
    std::vector<double> fuel_power_sum_kw_;  // running sum of fuel dispatch
    bool running_ = false;
};

Reconciled reconcile_balance(const Action& action,
                             std::span<const double> actual_renewables_kw,
                             const EnvState& state, const Task& task);

// soc' after one interval at power p (kW, discharge-positive).
double soc_update(double soc_kwh, double p_kw, double eff_charge,
                  double eff_discharge, double tau_hours);

struct EpisodeTrace {
    std::vector<StepOutcome> steps;
    double total_reward = 0.0;
};

using RawPolicy = std::function<std::vector<double>(const std::vector<double>& state)>;
using ActionPolicy = std::function<Action(const EnvState& state, const Task& task)>;

EpisodeTrace rollout(const RawPolicy& policy, const Task& task);
EpisodeTrace rollout(const ActionPolicy& controller, const Task& task);

}  // namespace clr
