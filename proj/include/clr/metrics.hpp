#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "clr/env.hpp"
#include "clr/meta.hpp"

namespace clr {

struct ReliabilityReport {
    double saidi_minutes = 0.0;
    std::map<int, std::optional<double>> restoration_time_minutes;  // 50/90/95 %
    double pct_restored_final = 0.0;
    std::vector<double> per_load_outage_minutes;
};

// Average outage duration per load over the horizon. Partial restoration
// accrues outage fractionally by default; binary mode counts a load as
// restored only at full service.
double saidi(const EpisodeTrace& trace, const Task& task, bool binary = false);

// Minutes until the served fraction of total demand first reaches the
// threshold; nullopt when it never does.
std::optional<double> restoration_time(const EpisodeTrace& trace, const Task& task,
                                       double threshold_pct);

ReliabilityReport reliability_report(const EpisodeTrace& trace, const Task& task);

struct AdaptationReport {
    double mean_cumulative_reward = 0.0;
    double delta_init = 0.0;  // jump-start gap at episode 0
    double delta_r = 0.0;     // mean last-k gap
    std::optional<int> episodes_to_threshold;
};

// Both curves must come from the same evaluation protocol. The threshold for
// episodes_to_threshold is the baseline's converged (last-k mean) level.
AdaptationReport adaptation_metrics(std::span<const double> method_curve,
                                    std::span<const double> baseline_curve,
                                    int tail_k = 5);

// Parameter-space proxies for the sequence-level diagnostics: task-averaged
// optimality gap against supplied pseudo-optima, empirical similarity as the
// best average parameter distance over a candidate set of initializations,
// path length over pseudo-optima, and loss variability over a fixed probe
// grid of at most 32 trajectory snapshots.
struct TheoryDiagnostics {
    std::vector<double> taog;  // running averages, length M
    double d_star_hat = 0.0;
    double path_length = 0.0;
    double temporal_variability = 0.0;
};

TheoryDiagnostics theory_diagnostics(const MetaRecord& record,
                                     const std::vector<PolicyParams>& pseudo_optima,
                                     const std::vector<MetaTask>& tasks);

}  // namespace clr
