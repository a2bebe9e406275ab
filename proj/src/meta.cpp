#include "clr/meta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clr/rng.hpp"

namespace clr {

double MetaConfig::eta(int m) const {
    switch (schedule) {
        case EtaSchedule::Constant: return eta0;
        case EtaSchedule::InverseM: return 1.0 / m;
        case EtaSchedule::InverseSqrtM: return 1.0 / std::sqrt(static_cast<double>(m));
    }
    return eta0;
}

PolicyParams meta_update(const PolicyParams& phi0, const PolicyParams& phi_hat,
                         double eta) {
    if (phi0.shape != phi_hat.shape)
        throw std::invalid_argument("meta_update requires identical shapes");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in (0, 1]");
    PolicyParams out = phi0;
    if (eta == 1.0) {  // exact endpoint, bit-identical to warm starting
        out.theta = phi_hat.theta;
        return out;
    }
    for (std::size_t i = 0; i < out.theta.size(); ++i)
        out.theta[i] = phi0.theta[i] + eta * (phi_hat.theta[i] - phi0.theta[i]);
    return out;
}

namespace {

MetaRecord run_meta(const std::vector<MetaTask>& tasks, const PolicyParams& params0,
                    const MetaConfig& cfg, bool force_eta_one) {
    if (tasks.empty()) throw std::invalid_argument("meta training needs tasks");

    MetaRecord record;
    PolicyParams current = params0;
    for (std::size_t m = 0; m < tasks.size(); ++m) {
        EsConfig es = cfg.es;
        es.seed = derive_seed(cfg.es.seed, 0x7a5c, static_cast<std::uint64_t>(m));

        MetaTaskRecord tr;
        tr.task_id = tasks[m].id;
        tr.phi_start = current;

        TrainResult result = train_task(tasks[m].objective, current.theta, es);
        tr.phi_adapted = current;
        tr.phi_adapted.theta = result.best_theta;
        tr.train = std::move(result.record);
        tr.eta = force_eta_one ? 1.0 : cfg.eta(static_cast<int>(m) + 1);

        current = meta_update(current, tr.phi_adapted, tr.eta);
        record.tasks.push_back(std::move(tr));
    }
    record.meta_params = current;
    return record;
}

}  // namespace

MetaRecord meta_train(const std::vector<MetaTask>& tasks, const PolicyParams& params0,
                      const MetaConfig& cfg) {
    return run_meta(tasks, params0, cfg, false);
}

MetaRecord warm_start_train(const std::vector<MetaTask>& tasks,
                            const PolicyParams& params0, const MetaConfig& cfg) {
    return run_meta(tasks, params0, cfg, true);
}

FineTuneResult fine_tune(const PolicyParams& meta_params, const Objective& objective,
                         int budget, const EsConfig& es_cfg) {
    EsConfig es = es_cfg;
    es.iters = budget;
    TrainResult result = train_task(objective, meta_params.theta, es);
    FineTuneResult out;
    out.adapted = meta_params;
    out.adapted.theta = std::move(result.best_theta);
    out.record = std::move(result.record);
    return out;
}

Action greedy_dispatch(const EnvState& state, const Task& task) {
    const auto& fleet = task.system.fleet;
    const auto renew = fleet.renewable_indices();
    const auto storage = fleet.storage_indices();
    const auto fuel = fleet.fuel_indices();
    const int lookahead = task.lookahead_steps();

    Action a;

    // Current renewable reading (first forecast entry) and the lookahead mean.
    double renew_now = 0.0, renew_mean = 0.0;
    for (std::size_t r = 0; r < renew.size(); ++r) {
        renew_now += state.forecast_kw[r * lookahead];
        for (int x = 0; x < lookahead; ++x)
            renew_mean += state.forecast_kw[r * lookahead + x];
    }
    renew_mean /= lookahead;

    double served_now = 0.0;
    for (std::size_t i = 0; i < state.prev_restoration.size(); ++i)
        served_now += state.prev_restoration[i] * task.demand_p_kw[i];

    double generation = renew_now;
    for (std::size_t f = 0; f < fuel.size(); ++f) {
        double lo, hi;
        fuel_box(task, static_cast<int>(f), state.fuel_kwh[f], lo, hi);
        a.fuel_kw.push_back(hi);
        generation += hi;
    }
    const bool forecast_dips = renew_mean < served_now;
    for (std::size_t s = 0; s < storage.size(); ++s) {
        double lo, hi;
        storage_box(task, static_cast<int>(s), state.soc_kwh[s], lo, hi);
        double p = forecast_dips ? hi : 0.0;
        a.storage_kw.push_back(p);
        generation += p;
    }

    // Allocate generation to loads in descending priority, ties broken by
    // descending demand then index, each served fully before the next.
    const int n_loads = static_cast<int>(task.demand_p_kw.size());
    std::vector<int> order(n_loads);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        double pi = task.system.loads.loads[i].priority;
        double pj = task.system.loads.loads[j].priority;
        if (pi != pj) return pi > pj;
        if (task.demand_p_kw[i] != task.demand_p_kw[j])
            return task.demand_p_kw[i] > task.demand_p_kw[j];
        return i < j;
    });
    a.load_kw.assign(n_loads, 0.0);
    double remaining = generation;
    for (int i : order) {
        double serve = std::min(remaining, task.demand_p_kw[i]);
        a.load_kw[i] = serve;
        remaining -= serve;
        if (remaining <= 0.0) break;
    }

    for (std::size_t d = 0; d + 1 < fleet.devices.size(); ++d)
        a.angles_rad.push_back(
            0.5 * (fleet.devices[d].angle_lo + fleet.devices[d].angle_hi));
    return a;
}

Objective make_task_objective(const Task& task, const PolicyParams& prototype) {
    return [task, prototype](std::span<const double> theta, std::uint64_t) {
        PolicyParams p = prototype;
        p.theta.assign(theta.begin(), theta.end());
        EpisodeTrace trace = rollout(
            [&p](const std::vector<double>& s) { return forward(p, s); }, task);
        return trace.total_reward;
    };
}

Objective make_task_objective_resampled(const Task& task,
                                        const PolicyParams& prototype) {
    return [task, prototype](std::span<const double> theta, std::uint64_t eval_seed) {
        Task episode = task;
        for (std::size_t r = 0; r < episode.profiles.size(); ++r)
            episode.forecasts[r] = synthesize_forecast(
                episode.profiles[r], episode.error_level, episode.kappa_hours,
                episode.tau_hours,
                derive_seed(task.seed, 0xfc57, static_cast<std::uint64_t>(r),
                            eval_seed));
        PolicyParams p = prototype;
        p.theta.assign(theta.begin(), theta.end());
        EpisodeTrace trace = rollout(
            [&p](const std::vector<double>& s) { return forward(p, s); }, episode);
        return trace.total_reward;
    };
}

}  // namespace clr
