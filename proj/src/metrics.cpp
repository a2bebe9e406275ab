#include "clr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clr {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double saidi(const EpisodeTrace& trace, const Task& task, bool binary) {
    const int n = static_cast<int>(task.demand_p_kw.size());
    const double step_minutes = task.tau_hours * 60.0;
    double total = 0.0;
    for (const auto& step : trace.steps) {
        for (int i = 0; i < n; ++i) {
            double frac = step.info.served_kw[i] / task.demand_p_kw[i];
            double outage = binary ? (frac >= 1.0 ? 0.0 : 1.0) : 1.0 - frac;
            total += outage * step_minutes;
        }
    }
    return total / n;
}

std::optional<double> restoration_time(const EpisodeTrace& trace, const Task& task,
                                       double threshold_pct) {
    if (!(threshold_pct > 0.0 && threshold_pct <= 100.0))
        throw std::invalid_argument("threshold must be in (0, 100]");
    double demand_total = 0.0;
    for (double d : task.demand_p_kw) demand_total += d;
    const double step_minutes = task.tau_hours * 60.0;
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        double served = 0.0;
        for (double s : trace.steps[t].info.served_kw) served += s;
        if (served / demand_total >= threshold_pct / 100.0)
            return (static_cast<double>(t) + 1.0) * step_minutes;
    }
    return std::nullopt;
}

ReliabilityReport reliability_report(const EpisodeTrace& trace, const Task& task) {
    ReliabilityReport rep;
    rep.saidi_minutes = saidi(trace, task);
    for (int pct : {50, 90, 95})
        rep.restoration_time_minutes[pct] = restoration_time(trace, task, pct);

    const int n = static_cast<int>(task.demand_p_kw.size());
    const double step_minutes = task.tau_hours * 60.0;
    rep.per_load_outage_minutes.assign(n, 0.0);
    for (const auto& step : trace.steps)
        for (int i = 0; i < n; ++i)
            rep.per_load_outage_minutes[i] +=
                (1.0 - step.info.served_kw[i] / task.demand_p_kw[i]) * step_minutes;

    if (!trace.steps.empty()) {
        double served = 0.0, demand = 0.0;
        for (int i = 0; i < n; ++i) {
            served += trace.steps.back().info.served_kw[i];
            demand += task.demand_p_kw[i];
        }
        rep.pct_restored_final = 100.0 * served / demand;
    }
    return rep;
}

AdaptationReport adaptation_metrics(std::span<const double> method_curve,
                                    std::span<const double> baseline_curve,
                                    int tail_k) {
    if (method_curve.size() != baseline_curve.size() || method_curve.empty())
        throw std::invalid_argument("curves must be nonempty and equal length");

    const int k = std::min<int>(tail_k, static_cast<int>(method_curve.size()));
    AdaptationReport rep;
    rep.mean_cumulative_reward = mean_of(method_curve);
    rep.delta_init = method_curve.front() - baseline_curve.front();
    rep.delta_r = mean_of(method_curve.last(k)) - mean_of(baseline_curve.last(k));

    const double threshold = mean_of(baseline_curve.last(k));
    for (std::size_t i = 0; i < method_curve.size(); ++i) {
        if (method_curve[i] >= threshold) {
            rep.episodes_to_threshold = static_cast<int>(i);
            break;
        }
    }
    return rep;
}

TheoryDiagnostics theory_diagnostics(const MetaRecord& record,
                                     const std::vector<PolicyParams>& pseudo_optima,
                                     const std::vector<MetaTask>& tasks) {
    const std::size_t m_count = record.tasks.size();
    if (pseudo_optima.size() != m_count || tasks.size() != m_count)
        throw std::invalid_argument(
            "need one pseudo-optimum and one objective per recorded task");

    TheoryDiagnostics diag;

    // Running task-averaged optimality gap against the pseudo-optima.
    double gap_sum = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
        double f_opt = tasks[m].objective(pseudo_optima[m].theta, 0);
        double f_hat = tasks[m].objective(record.tasks[m].phi_adapted.theta, 0);
        gap_sum += f_opt - f_hat;
        diag.taog.push_back(gap_sum / static_cast<double>(m + 1));
    }

    // Empirical similarity: best candidate initialization among the final
    // meta parameters and the mean of the adapted vectors.
    PolicyParams mean_adapted = record.tasks.front().phi_adapted;
    for (std::size_t i = 0; i < mean_adapted.theta.size(); ++i) {
        double s = 0.0;
        for (const auto& tr : record.tasks) s += tr.phi_adapted.theta[i];
        mean_adapted.theta[i] = s / static_cast<double>(m_count);
    }
    const std::vector<const PolicyParams*> candidates = {&record.meta_params,
                                                         &mean_adapted};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double avg = 0.0;
        for (const auto& tr : record.tasks)
            avg += param_distance(tr.phi_adapted, *candidates[c]);
        avg /= static_cast<double>(m_count);
        if (c == 0 || avg < diag.d_star_hat) diag.d_star_hat = avg;
    }

    for (std::size_t m = 1; m < m_count; ++m) {
        double norm2 = 2.0 * param_distance(pseudo_optima[m], pseudo_optima[m - 1]);
        diag.path_length += std::sqrt(norm2);
    }

    // Loss variability over a fixed probe grid of trajectory snapshots
    // (documented lower-bound estimate of the sup).
    std::vector<const PolicyParams*> probes;
    for (const auto& tr : record.tasks) {
        probes.push_back(&tr.phi_start);
        probes.push_back(&tr.phi_adapted);
    }
    probes.push_back(&record.meta_params);
    if (probes.size() > 32) probes.resize(32);

    std::vector<double> prev_losses, cur_losses;
    for (std::size_t m = 0; m < m_count; ++m) {
        cur_losses.clear();
        for (const PolicyParams* p : probes)
            cur_losses.push_back(tasks[m].objective(p->theta, 0));
        if (m > 0) {
            double worst = 0.0;
            for (std::size_t i = 0; i < probes.size(); ++i)
                worst = std::max(worst, std::abs(cur_losses[i] - prev_losses[i]));
            diag.temporal_variability += worst;
        }
        prev_losses = cur_losses;
    }
    return diag;
}

}  // namespace clr
