#include "clr/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clr/grid.hpp"

namespace clr {

namespace {

double box_map(double raw, double lo, double hi) {
    double r = std::clamp(raw, -1.0, 1.0);
    return lo + 0.5 * (r + 1.0) * (hi - lo);
}

}  // namespace

std::vector<double> EnvState::as_vector() const {
    std::vector<double> v;
    v.reserve(forecast_kw.size() + prev_restoration.size() + soc_kwh.size() +
              fuel_kwh.size() + 1);
    v.insert(v.end(), forecast_kw.begin(), forecast_kw.end());
    v.insert(v.end(), prev_restoration.begin(), prev_restoration.end());
    v.insert(v.end(), soc_kwh.begin(), soc_kwh.end());
    v.insert(v.end(), fuel_kwh.begin(), fuel_kwh.end());
    v.push_back(static_cast<double>(t));
    return v;
}

int EnvState::dimension(const Task& task) {
    const auto& fleet = task.system.fleet;
    int n_renew = static_cast<int>(fleet.renewable_indices().size());
    int n_storage = static_cast<int>(fleet.storage_indices().size());
    int n_fuel = static_cast<int>(fleet.fuel_indices().size());
    int n_loads = static_cast<int>(task.system.loads.loads.size());
    return n_renew * task.lookahead_steps() + n_loads + n_storage + n_fuel + 1;
}

int Action::dimension(const Task& task) {
    const auto& fleet = task.system.fleet;
    int n_storage = static_cast<int>(fleet.storage_indices().size());
    int n_fuel = static_cast<int>(fleet.fuel_indices().size());
    int n_loads = static_cast<int>(task.system.loads.loads.size());
    int n_dev = static_cast<int>(fleet.devices.size());
    return n_loads + n_storage + n_fuel + (n_dev - 1);
}

Environment::Environment(Task task) : task_(std::move(task)) {
    task_.validate();
    renew_idx_ = task_.system.fleet.renewable_indices();
    storage_idx_ = task_.system.fleet.storage_indices();
    fuel_idx_ = task_.system.fleet.fuel_indices();
}

std::vector<double> Environment::forecast_block(int t) const {
    const int k = task_.lookahead_steps();
    int row = std::min(t, task_.horizon_steps) - 1;  // hold the last row past T
    std::vector<double> block;
    block.reserve(task_.forecasts.size() * k);
    for (const auto& fc : task_.forecasts)
        for (int x = 0; x < k; ++x) block.push_back(fc.at(row, x));
    return block;
}

EnvState Environment::reset() {
    state_ = EnvState{};
    state_.t = 1;
    state_.prev_restoration.assign(task_.system.loads.loads.size(), 0.0);
    for (int d : storage_idx_)
        state_.soc_kwh.push_back(task_.system.fleet.devices[d].soc_init_kwh);
    for (int d : fuel_idx_)
        state_.fuel_kwh.push_back(task_.system.fleet.devices[d].fuel_reserve_kwh);
    state_.forecast_kw = forecast_block(1);
    fuel_power_sum_kw_.assign(fuel_idx_.size(), 0.0);
    running_ = true;
    return state_;
}

void storage_box(const Task& task, int storage_pos, double soc_kwh,
                 double& lo, double& hi) {
    const auto idx = task.system.fleet.storage_indices();
    const DerDevice& d = task.system.fleet.devices[idx[storage_pos]];
    double tau = task.tau_hours;
    // Discharge removes (p/eff_dis)*tau from the SOC, charge adds
    // eff_ch*|p|*tau; neither may leave [soc_min, soc_max] this step.
    hi = std::min(d.discharge_max_kw, (soc_kwh - d.soc_min_kwh) * d.eff_discharge / tau);
    lo = -std::min(d.charge_max_kw, (d.soc_max_kwh - soc_kwh) / (d.eff_charge * tau));
    hi = std::max(hi, 0.0);
    lo = std::min(lo, 0.0);
}

void fuel_box(const Task& task, int fuel_pos, double fuel_kwh,
              double& lo, double& hi) {
    const auto idx = task.system.fleet.fuel_indices();
    const DerDevice& d = task.system.fleet.devices[idx[fuel_pos]];
    hi = std::min(d.p_max_kw, fuel_kwh / task.tau_hours);
    hi = std::max(hi, 0.0);
    lo = std::min(d.p_min_kw, hi);
}

Action Environment::project_action(std::span<const double> raw) const {
    if (static_cast<int>(raw.size()) != Action::dimension(task_))
        throw std::invalid_argument("raw action has wrong dimension");

    const auto& devices = task_.system.fleet.devices;
    Action a;
    std::size_t k = 0;
    for (double demand : task_.demand_p_kw)
        a.load_kw.push_back(box_map(raw[k++], 0.0, demand));
    for (std::size_t s = 0; s < storage_idx_.size(); ++s) {
        double lo, hi;
        storage_box(task_, static_cast<int>(s), state_.soc_kwh[s], lo, hi);
        a.storage_kw.push_back(box_map(raw[k++], lo, hi));
    }
    for (std::size_t f = 0; f < fuel_idx_.size(); ++f) {
        double lo, hi;
        fuel_box(task_, static_cast<int>(f), state_.fuel_kwh[f], lo, hi);
        a.fuel_kw.push_back(box_map(raw[k++], lo, hi));
    }
    for (std::size_t d = 0; d + 1 < devices.size(); ++d)
        a.angles_rad.push_back(box_map(raw[k++], devices[d].angle_lo, devices[d].angle_hi));
    return a;
}

Action Environment::clip_action(const Action& a) const {
    const auto& devices = task_.system.fleet.devices;
    Action out = a;
    for (std::size_t i = 0; i < out.load_kw.size(); ++i)
        out.load_kw[i] = std::clamp(out.load_kw[i], 0.0, task_.demand_p_kw[i]);
    for (std::size_t s = 0; s < out.storage_kw.size(); ++s) {
        double lo, hi;
        storage_box(task_, static_cast<int>(s), state_.soc_kwh[s], lo, hi);
        out.storage_kw[s] = std::clamp(out.storage_kw[s], lo, hi);
    }
    for (std::size_t f = 0; f < out.fuel_kw.size(); ++f) {
        double lo, hi;
        fuel_box(task_, static_cast<int>(f), state_.fuel_kwh[f], lo, hi);
        out.fuel_kw[f] = std::clamp(out.fuel_kw[f], lo, hi);
    }
    for (std::size_t d = 0; d < out.angles_rad.size(); ++d)
        out.angles_rad[d] =
            std::clamp(out.angles_rad[d], devices[d].angle_lo, devices[d].angle_hi);
    return out;
}

Reconciled reconcile_balance(const Action& action,
                             std::span<const double> actual_renewables_kw,
                             const EnvState& state, const Task& task) {
    Reconciled rec;
    rec.served_kw = action.load_kw;
    rec.storage_kw = action.storage_kw;
    rec.fuel_kw = action.fuel_kw;
    rec.renewable_kw.assign(actual_renewables_kw.begin(), actual_renewables_kw.end());

    double renew_total = 0.0;
    for (double r : rec.renewable_kw) renew_total += r;
    double discharge = 0.0, charge = 0.0;
    for (double p : rec.storage_kw) (p >= 0.0 ? discharge : charge) += std::abs(p);
    double fuel_total = 0.0;
    for (double p : rec.fuel_kw) fuel_total += p;

    double gen = renew_total + discharge + fuel_total - charge;
    double commanded = 0.0;
    for (double l : rec.served_kw) commanded += l;

    if (gen < 0.0) {
        // Commanded charging exceeds available generation: shed all loads and
        // back the charging off until the balance closes.
        std::fill(rec.served_kw.begin(), rec.served_kw.end(), 0.0);
        double deficit = -gen;
        for (double& p : rec.storage_kw) {
            if (deficit <= 0.0) break;
            if (p < 0.0) {
                double give = std::min(deficit, -p);
                p += give;
                deficit -= give;
            }
        }
        return rec;
    }

    if (commanded <= gen) {
        // Serve as commanded; surplus charges storage up to the tightened
        // bound, then curtails renewables, then backs down dispatch.
        double surplus = gen - commanded;
        for (std::size_t s = 0; s < rec.storage_kw.size() && surplus > 0.0; ++s) {
            double lo, hi;
            storage_box(task, static_cast<int>(s), state.soc_kwh[s], lo, hi);
            double room = rec.storage_kw[s] - lo;  // how much further down we can go
            double take = std::min(surplus, room);
            rec.storage_kw[s] -= take;
            surplus -= take;
        }
        if (surplus > 0.0 && renew_total > 0.0) {
            rec.curtailment_kw = std::min(surplus, renew_total);
            double keep = 1.0 - rec.curtailment_kw / renew_total;
            for (double& r : rec.renewable_kw) r *= keep;
            surplus -= rec.curtailment_kw;
        }
        for (double& p : rec.storage_kw) {
            if (surplus <= 0.0) break;
            if (p > 0.0) {
                double give = std::min(surplus, p);
                p -= give;
                surplus -= give;
            }
        }
        for (std::size_t f = 0; f < rec.fuel_kw.size() && surplus > 0.0; ++f) {
            double lo, hi;
            fuel_box(task, static_cast<int>(f), state.fuel_kwh[f], lo, hi);
            double give = std::min(surplus, rec.fuel_kw[f] - lo);
            rec.fuel_kw[f] -= give;
            surplus -= give;
        }
    } else {
        // Proportional shedding.
        double scale = gen / commanded;
        for (double& l : rec.served_kw) l *= scale;
    }
    return rec;
}

double soc_update(double soc_kwh, double p_kw, double eff_charge,
                  double eff_discharge, double tau_hours) {
    if (p_kw > 0.0) return soc_kwh - (p_kw / eff_discharge) * tau_hours;
    if (p_kw < 0.0) return soc_kwh - eff_charge * p_kw * tau_hours;
    return soc_kwh;
}

StepOutcome Environment::step(std::span<const double> raw_action) {
    return step_impl(project_action(raw_action));
}

StepOutcome Environment::step(const Action& action) {
    return step_impl(clip_action(action));
}

StepOutcome Environment::step_impl(const Action& act) {
    if (!running_) throw std::logic_error("step before reset");
    if (state_.t > task_.horizon_steps)
        throw std::logic_error("stepping past the control horizon");

    const auto& sys = task_.system;
    const auto& devices = sys.fleet.devices;
    const int t0 = state_.t - 1;

    std::vector<double> actual(renew_idx_.size());
    for (std::size_t r = 0; r < renew_idx_.size(); ++r)
        actual[r] = task_.profiles[r].actual_kw[t0];

    Reconciled rec = reconcile_balance(act, actual, state_, task_);

    // Angles: commanded for the first |G|-1 devices, midpoint for the last.
    std::vector<double> angles(devices.size());
    for (std::size_t d = 0; d + 1 < devices.size(); ++d) angles[d] = act.angles_rad[d];
    angles.back() = 0.5 * (devices.back().angle_lo + devices.back().angle_hi);

    StepInfo info;
    info.served_kw = rec.served_kw;
    info.curtailment_kw = rec.curtailment_kw;
    info.der_p_kw.assign(devices.size(), 0.0);
    info.der_q_kvar.assign(devices.size(), 0.0);
    for (std::size_t s = 0; s < storage_idx_.size(); ++s)
        info.der_p_kw[storage_idx_[s]] = rec.storage_kw[s];
    for (std::size_t f = 0; f < fuel_idx_.size(); ++f)
        info.der_p_kw[fuel_idx_[f]] = rec.fuel_kw[f];
    for (std::size_t r = 0; r < renew_idx_.size(); ++r)
        info.der_p_kw[renew_idx_[r]] = rec.renewable_kw[r];
    for (std::size_t d = 0; d < devices.size(); ++d)
        info.der_q_kvar[d] = info.der_p_kw[d] * std::tan(angles[d]);

    // Net bus injections, loads at their fixed power factor.
    const int n_bus = static_cast<int>(sys.net.buses.size());
    std::vector<double> inj_p(n_bus, 0.0), inj_q(n_bus, 0.0);
    double load_q_total = 0.0, der_q_total = 0.0;
    for (std::size_t i = 0; i < sys.loads.loads.size(); ++i) {
        int b = sys.net.index_of(sys.loads.loads[i].bus);
        double q = rec.served_kw[i] * (task_.demand_q_kvar[i] / task_.demand_p_kw[i]);
        inj_p[b] -= rec.served_kw[i];
        inj_q[b] -= q;
        load_q_total += q;
    }
    for (std::size_t d = 0; d < devices.size(); ++d) {
        int b = sys.net.index_of(devices[d].bus);
        inj_p[b] += info.der_p_kw[d];
        inj_q[b] += info.der_q_kvar[d];
        der_q_total += info.der_q_kvar[d];
    }
    info.reactive_slack_kvar = load_q_total - der_q_total;

    info.voltages = solve_power_flow(sys.net, inj_p, inj_q);
    info.voltage_term = voltage_penalty(info.voltages, sys.net, task_.lambda);

    double served_total = 0.0, charge_total = 0.0, discharge_total = 0.0;
    double fuel_total = 0.0, renew_used = 0.0;
    for (double v : rec.served_kw) served_total += v;
    for (double p : rec.storage_kw) (p >= 0.0 ? discharge_total : charge_total) += std::abs(p);
    for (double p : rec.fuel_kw) fuel_total += p;
    for (double r : rec.renewable_kw) renew_used += r;
    info.balance_residual_kw =
        (served_total + charge_total) - (renew_used + discharge_total + fuel_total);

    // Reward on realized served power.
    double priority = 0.0, fluct = 0.0;
    for (std::size_t i = 0; i < rec.served_kw.size(); ++i) {
        double prev_kw = state_.prev_restoration[i] * task_.demand_p_kw[i];
        priority += sys.loads.loads[i].priority * rec.served_kw[i];
        fluct += sys.loads.loads[i].priority * std::max(0.0, prev_kw - rec.served_kw[i]);
    }
    info.priority_term = priority;
    info.fluctuation_term = task_.mu * fluct;
    double reward = info.priority_term - info.fluctuation_term + info.voltage_term;

    // Dynamics.
    EnvState next = state_;
    for (std::size_t i = 0; i < rec.served_kw.size(); ++i)
        next.prev_restoration[i] =
            std::clamp(rec.served_kw[i] / task_.demand_p_kw[i], 0.0, 1.0);
    for (std::size_t s = 0; s < storage_idx_.size(); ++s) {
        const DerDevice& d = devices[storage_idx_[s]];
        next.soc_kwh[s] =
            std::clamp(soc_update(state_.soc_kwh[s], rec.storage_kw[s], d.eff_charge,
                                  d.eff_discharge, task_.tau_hours),
                       d.soc_min_kwh, d.soc_max_kwh);
    }
    for (std::size_t f = 0; f < fuel_idx_.size(); ++f) {
        fuel_power_sum_kw_[f] += rec.fuel_kw[f];
        next.fuel_kwh[f] = devices[fuel_idx_[f]].fuel_reserve_kwh -
                           fuel_power_sum_kw_[f] * task_.tau_hours;
    }
    next.t = state_.t + 1;
    next.forecast_kw = forecast_block(next.t);

    StepOutcome out;
    out.next = next;
    out.reward = reward;
    out.info = std::move(info);
    out.done = next.t > task_.horizon_steps;
    state_ = std::move(next);
    return out;
}

EpisodeTrace rollout(const RawPolicy& policy, const Task& task) {
    Environment env(task);
    EnvState s = env.reset();
    EpisodeTrace trace;
    trace.steps.reserve(task.horizon_steps);
    for (int t = 0; t < task.horizon_steps; ++t) {
        auto raw = policy(s.as_vector());
        StepOutcome out = env.step(raw);
        trace.total_reward += out.reward;
        s = out.next;
        trace.steps.push_back(std::move(out));
    }
    return trace;
}

EpisodeTrace rollout(const ActionPolicy& controller, const Task& task) {
    Environment env(task);
    EnvState s = env.reset();
    EpisodeTrace trace;
    trace.steps.reserve(task.horizon_steps);
    for (int t = 0; t < task.horizon_steps; ++t) {
        Action a = controller(s, task);
        StepOutcome out = env.step(a);
        trace.total_reward += out.reward;
        s = out.next;
        trace.steps.push_back(std::move(out));
    }
    return trace;
}

}  // namespace clr
