#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clr/env.hpp"
#include "clr/es.hpp"
#include "clr/policy.hpp"

namespace clr {

struct MetaTask {
    std::string id;
    Objective objective;
};

enum class EtaSchedule { Constant, InverseM, InverseSqrtM };

struct MetaConfig {
    EsConfig es;                                   // within-task optimizer
    EtaSchedule schedule = EtaSchedule::InverseM;  // eta_m = 1/m by default
    double eta0 = 1.0;                             // value for Constant
    int finetune_budget = 10;

    double eta(int m) const;  // m is 1-based
};

// phi' = phi0 + eta * (phi_hat - phi0).
PolicyParams meta_update(const PolicyParams& phi0, const PolicyParams& phi_hat,
                         double eta);

struct MetaTaskRecord {
    std::string task_id;
    double eta = 0.0;
    PolicyParams phi_start;    // phi_{m,0}
    PolicyParams phi_adapted;  // best-evaluated within-task snapshot
    TrainRecord train;
};

struct MetaRecord {
    std::vector<MetaTaskRecord> tasks;
    PolicyParams meta_params;  // post-meta-update vector phi_{M+1,0}
};

// One policy network threaded sequentially through all tasks: within-task ES
// then the first-order meta-update. Per-task optimizer seeds derive from
// cfg.es.seed and the task index.
MetaRecord meta_train(const std::vector<MetaTask>& tasks,
                      const PolicyParams& params0, const MetaConfig& cfg);

// meta_train with eta forced to 1: each task starts from the previous task's
// adapted parameters.
MetaRecord warm_start_train(const std::vector<MetaTask>& tasks,
                            const PolicyParams& params0, const MetaConfig& cfg);

struct FineTuneResult {
    PolicyParams adapted;
    TrainRecord record;
};

FineTuneResult fine_tune(const PolicyParams& meta_params, const Objective& objective,
                         int budget, const EsConfig& es_cfg);

// Rule-based controller: renewables at full output, fuel at its feasible
// maximum, storage discharging at its feasible maximum when the forecast mean
// over the lookahead falls below the currently served load (idle otherwise,
// charging happens through reconciliation surplus), generation allocated to
// loads in priority order, angles at the midpoint of their bounds.
Action greedy_dispatch(const EnvState& state, const Task& task);

// CLR fitness: episode return of the policy net on the task. Deterministic;
// the eval seed is accepted for interface uniformity.
Objective make_task_objective(const Task& task, const PolicyParams& prototype);

// Same fitness but with the forecast noise re-drawn from the episode seed
// (actuals untouched). At zero error level this coincides with the fixed
// objective; at higher levels the policy faces a fresh error realization per
// episode instead of one memorizable tensor.
Objective make_task_objective_resampled(const Task& task,
                                        const PolicyParams& prototype);

}  // namespace clr
