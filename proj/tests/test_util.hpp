#pragma once

// Hand-built miniature tasks shared across test suites.

#include <string>
#include <vector>

#include "clr/scenario.hpp"

namespace clr::testing {

// Two prioritized loads fed by one micro-turbine over a low-impedance pair of
// laterals; no storage, no renewables. lambda defaults to zero so rewards are
// pure restoration arithmetic.
inline Task make_micro_task(double demand_a = 120.0, double demand_b = 50.0,
                            int horizon = 12, double lambda = 0.0,
                            double fuel_reserve = 5000.0) {
    SystemModel sys;
    sys.net.buses = {"r", "a", "b"};
    sys.net.root = "r";
    sys.net.lines = {{"r", "a", 1e-4, 2e-4}, {"r", "b", 1e-4, 2e-4}};

    Load la;
    la.name = "La";
    la.bus = "a";
    la.demand_p_kw = demand_a;
    la.demand_q_kvar = demand_a * 0.3;
    la.priority = 1.0;
    Load lb;
    lb.name = "Lb";
    lb.bus = "b";
    lb.demand_p_kw = demand_b;
    lb.demand_q_kvar = demand_b * 0.3;
    lb.priority = 0.5;
    sys.loads.loads = {la, lb};

    DerDevice mt;
    mt.name = "mt";
    mt.kind = DerKind::Fuel;
    mt.bus = "r";
    mt.p_min_kw = 0.0;
    mt.p_max_kw = 400.0;
    mt.fuel_reserve_kwh = fuel_reserve;
    mt.angle_lo = 0.0;
    mt.angle_hi = 0.5;
    sys.fleet.devices = {mt};

    Task task;
    task.id = "micro";
    task.system = sys;
    task.demand_p_kw = {demand_a, demand_b};
    task.demand_q_kvar = {demand_a * 0.3, demand_b * 0.3};
    task.horizon_steps = horizon;
    task.tau_hours = 1.0 / 12.0;
    task.kappa_hours = 1.0 / 12.0;  // lookahead of one step, no renewables anyway
    task.mu = 1.0;
    task.lambda = lambda;
    task.validate();
    return task;
}

// One renewable, two loads, nothing dispatchable. With a flat-zero actual
// profile the grid is dead and any policy serves nothing.
inline Task make_renewable_only_task(const std::vector<double>& actual_kw,
                                     double cap_kw = 300.0) {
    SystemModel sys;
    sys.net.buses = {"r", "a"};
    sys.net.root = "r";
    sys.net.lines = {{"r", "a", 1e-4, 2e-4}};

    Load la;
    la.name = "La";
    la.bus = "a";
    la.demand_p_kw = 100.0;
    la.demand_q_kvar = 30.0;
    la.priority = 1.0;
    Load lb = la;
    lb.name = "Lb";
    lb.priority = 0.5;
    sys.loads.loads = {la, lb};

    DerDevice pv;
    pv.name = "pv";
    pv.kind = DerKind::Renewable;
    pv.bus = "r";
    pv.capacity_kw = cap_kw;
    pv.angle_lo = 0.0;
    pv.angle_hi = 0.5;
    sys.fleet.devices = {pv};

    Task task;
    task.id = "renewable-only";
    task.system = sys;
    task.demand_p_kw = {100.0, 100.0};
    task.demand_q_kvar = {30.0, 30.0};
    task.horizon_steps = static_cast<int>(actual_kw.size());
    task.tau_hours = 1.0 / 12.0;
    task.kappa_hours = 1.0 / 12.0;
    task.mu = 1.0;
    task.lambda = 0.0;
    auto profile = profile_from_values("pv", actual_kw, cap_kw, task.horizon_steps);
    task.forecasts.push_back(
        synthesize_forecast(profile, 0.0, task.kappa_hours, task.tau_hours, 0));
    task.profiles.push_back(std::move(profile));
    task.validate();
    return task;
}

// 13-bus task with small demands and a deterministic scenario.
inline Task make_ieee13_task(std::uint64_t seed, int horizon = 24,
                             double error_level = 0.0) {
    TaskFamilyOptions opt;
    opt.count = 1;
    opt.horizon_steps = horizon;
    opt.error_level = error_level;
    return make_task_family(build_ieee13_analog(), opt, seed)[0];
}

}  // namespace clr::testing
