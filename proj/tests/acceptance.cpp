// Acceptance suite: one pass/fail line per criterion, all criteria executed
// even after a failure, nonzero exit if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clr/cli.hpp"
#include "clr/es.hpp"
#include "clr/meta.hpp"
#include "clr/metrics.hpp"
#include "clr/rng.hpp"
#include "oracle_power_flow.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace clr;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

struct Criterion {
    int id;
    std::string label;
    std::chrono::steady_clock::time_point start;
    bool ok = true;
    std::string detail;

    Criterion(int id_, std::string label_)
        : id(id_), label(std::move(label_)), start(std::chrono::steady_clock::now()) {}

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        } else if (!cond) {
            detail += "; " + what;
        }
    }

    ~Criterion() {
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
        if (ok) {
            std::printf("[PASS] criterion %2d: %s (%.2fs)\n", id, label.c_str(), secs);
        } else {
            std::printf("[FAIL] criterion %2d: %s (%.2fs) -- %s\n", id, label.c_str(),
                        secs, detail.c_str());
            ++g_failures;
        }
        std::fflush(stdout);
    }
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Objective quadratic_objective(std::vector<double> c) {
    return [c = std::move(c)](std::span<const double> theta, std::uint64_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double d = theta[i] - c[i];
            s -= d * d;
        }
        return s;
    };
}

PolicyParams flat_params(int n_out, std::uint64_t seed) {
    return init_params(1, n_out, {}, seed);
}

// --- criterion 1 -----------------------------------------------------------

void criterion_benchmarks() {
    Criterion c(1, "benchmark optimization reaches the analytic optima");

    Objective f1 = [](std::span<const double> t, std::uint64_t) {
        return bench_f1(t[0]);
    };
    EsConfig cfg1;
    cfg1.n = 50;
    cfg1.sigma = 0.1;
    cfg1.alpha = 0.1;
    cfg1.iters = 300;
    cfg1.seed = 7;
    TrainResult r1 = train_task(f1, {3.0}, cfg1);
    c.require(r1.best_fitness >= 10.0 - 1e-2,
              "f1 best " + std::to_string(r1.best_fitness) + " < 10 - 1e-2");

    Objective f2 = [](std::span<const double> t, std::uint64_t) {
        return bench_f2(t[0], t[1]);
    };
    EsConfig cfg2;
    cfg2.n = 100;
    cfg2.sigma = 0.3;
    cfg2.alpha = 0.3;
    cfg2.iters = 300;
    cfg2.seed = 17;
    TrainResult r2 = train_task(f2, {2.5, -2.5}, cfg2);
    c.require(r2.best_fitness >= 100.0 - 0.5,
              "f2 best " + std::to_string(r2.best_fitness) + " < 99.5");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_estimator() {
    Criterion c(2, "zeroth-order estimator unbiased, mirrored exact on affine");

    // Smoothed gradient of -x^2 at x0=1 is exactly -2 at any sigma.
    const double x0 = 1.0, sigma = 0.1;
    const int n = 10000;
    Rng rng(20250101);
    std::vector<double> terms(n);
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        double e = rng.gaussian();
        terms[i] = -(x0 + sigma * e) * (x0 + sigma * e) * e / sigma;
        m += terms[i];
    }
    m /= n;
    double var = 0.0;
    for (double t : terms) var += (t - m) * (t - m);
    var /= (n - 1);
    double se = std::sqrt(var / n);
    c.require(std::abs(m - (-2.0)) < 3.0 * se,
              "quadratic estimate off by " + std::to_string(std::abs(m + 2.0)) +
                  " > 3 SE " + std::to_string(3.0 * se));

    // Mirrored pairs on f(phi) = 3 phi: one ascent step moves by exactly
    // alpha * 3, for any n and seed.
    Objective affine = [](std::span<const double> t, std::uint64_t) {
        return 3.0 * t[0];
    };
    for (int pop : {2, 6, 20}) {
        EsConfig cfg;
        cfg.n = pop;
        cfg.sigma = 0.05;
        cfg.alpha = 0.2;
        cfg.shaping = FitnessShaping::None;
        cfg.mirrored = true;
        cfg.seed = 900 + pop;
        std::vector<double> theta = {1.0};
        es_step(theta, affine, cfg, 1);
        c.require(std::abs(theta[0] - (1.0 + 0.2 * 3.0)) < 1e-12,
                  "mirrored affine step inexact at n=" + std::to_string(pop));
    }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_power_flow_oracle() {
    Criterion c(3, "tree power flow matches the dense oracle to 1e-9");

    Rng rng(20260810);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 4 + static_cast<int>(rng.next_u64() % 27);
        auto rc = testing::make_random_radial(rng, n);
        auto fast = solve_power_flow(rc.net, rc.injection_p_kw, rc.injection_q_kvar);
        auto slow = testing::dense_power_flow_oracle(rc.net, rc.injection_p_kw,
                                                     rc.injection_q_kvar);
        for (int b = 0; b < n; ++b)
            worst = std::max(worst, std::abs(fast[b] - slow[b]));
    }
    c.require(worst < 1e-9, "max |dv| = " + std::to_string(worst));
}

// --- criterion 4 -----------------------------------------------------------

void criterion_conservation() {
    Criterion c(4, "conservation suite over 1000 random-action episodes");

    const double fuel_reserve = 1200.0;
    Rng action_rng(515151);
    double worst_residual = 0.0;
    bool boxes_ok = true, fuel_identity_ok = true, decomposition_ok = true;

    for (int episode = 0; episode < 1000; ++episode) {
        Task task = testing::make_ieee13_task(1000 + episode % 5, 72);
        Environment env(task);
        env.reset();
        double fuel_sum = 0.0;
        const auto fuel_idx = task.system.fleet.fuel_indices();
        for (int t = 0; t < task.horizon_steps; ++t) {
            std::vector<double> raw(Action::dimension(task));
            for (double& v : raw) v = action_rng.uniform(-1.5, 1.5);
            StepOutcome out = env.step(raw);

            worst_residual = std::max(worst_residual,
                                      std::abs(out.info.balance_residual_kw));
            boxes_ok = boxes_ok && out.next.soc_kwh[0] >= 160.0 &&
                       out.next.soc_kwh[0] <= 1250.0 &&
                       out.next.fuel_kwh[0] >= -1e-9 &&
                       out.next.fuel_kwh[0] <= fuel_reserve + 1e-9;
            decomposition_ok =
                decomposition_ok &&
                out.reward == out.info.priority_term - out.info.fluctuation_term +
                                  out.info.voltage_term;
            fuel_sum += out.info.der_p_kw[fuel_idx[0]];
        }
        fuel_identity_ok = fuel_identity_ok &&
                           env.state().fuel_kwh[0] ==
                               fuel_reserve - fuel_sum * task.tau_hours;
    }
    c.require(worst_residual < 1e-9,
              "worst balance residual " + std::to_string(worst_residual));
    c.require(boxes_ok, "SOC or fuel left its box");
    c.require(fuel_identity_ok, "fuel conservation identity broke");
    c.require(decomposition_ok, "reward != sum of reported terms");
}

// --- criterion 5 -----------------------------------------------------------

void criterion_dimensions() {
    Criterion c(5, "state/action dimensions are (114,20) and (121,29)");

    Task t13 = testing::make_ieee13_task(1);
    c.require(EnvState::dimension(t13) == 114, "13-bus state dim");
    c.require(Action::dimension(t13) == 20, "13-bus action dim");

    TaskFamilyOptions opt;
    opt.count = 1;
    opt.horizon_steps = 24;
    Task t123 = make_task_family(build_ieee123_analog(), opt, 3)[0];
    c.require(EnvState::dimension(t123) == 121, "123-bus state dim");
    c.require(Action::dimension(t123) == 29, "123-bus action dim");
}

// --- criteria 6 and 8 ------------------------------------------------------

struct DeskProtocol {
    TaskFamilyOptions family_opt;
    EsConfig es;
    std::vector<int> hidden = {64, 64};

    DeskProtocol() {
        family_opt.count = 16;
        family_opt.horizon_steps = 24;
        family_opt.error_level = 0.0;
        family_opt.kappa_hours = 4.0;
        es.n = 20;
        es.sigma = 0.05;
        es.alpha = 0.05;
        es.iters = 40;
        es.parallelism = 2;
    }
};

void criterion_meta_advantage() {
    Criterion c(6, "meta initialization beats from-scratch on >= 3 of 4 test tasks");

    DeskProtocol proto;
    SystemModel sys = build_ieee13_analog();
    std::vector<Task> tasks = make_task_family(sys, proto.family_opt, 606060);
    TaskSplit split = split_family(tasks, 12);

    std::vector<std::vector<double>> delta_init(4), delta_r(4);
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        PolicyParams p0 = init_params(EnvState::dimension(tasks[0]),
                                      Action::dimension(tasks[0]), proto.hidden,
                                      derive_seed(rep, 0x1a17));
        p0.normalizer = make_normalizer(tasks[0]);

        MetaConfig mc;
        mc.es = proto.es;
        mc.es.seed = derive_seed(rep, 0x3e7a);

        std::vector<MetaTask> train_tasks;
        for (const auto& task : split.train)
            train_tasks.push_back({task.id, make_task_objective(task, p0)});
        MetaRecord meta = meta_train(train_tasks, p0, mc);

        for (std::size_t k = 0; k < split.test.size(); ++k) {
            const Task& task = split.test[k];
            Objective objective = make_task_objective(task, p0);
            EsConfig ft = proto.es;
            ft.seed = derive_seed(rep, 0xf1e, static_cast<std::uint64_t>(k));

            FineTuneResult mgf = fine_tune(meta.meta_params, objective, 40, ft);
            PolicyParams scratch =
                init_params(EnvState::dimension(task), Action::dimension(task),
                            proto.hidden, derive_seed(rep, 0x5c8a, k));
            scratch.normalizer = make_normalizer(task);
            FineTuneResult esrl = fine_tune(scratch, objective, 40, ft);

            AdaptationReport rep_k = adaptation_metrics(mgf.record.eval_curve(),
                                                        esrl.record.eval_curve());
            delta_init[k].push_back(rep_k.delta_init);
            delta_r[k].push_back(rep_k.delta_r);
        }
    }

    int winning_tasks = 0;
    std::string summary;
    for (int k = 0; k < 4; ++k) {
        double mi = median(delta_init[k]);
        double mr = median(delta_r[k]);
        if (mi > 0.0 && mr >= 0.0) ++winning_tasks;
        summary += " task" + std::to_string(k) + ": d_init=" + std::to_string(mi) +
                   " dR=" + std::to_string(mr);
    }
    g_notes.push_back("criterion 6 medians:" + summary);
    c.require(winning_tasks >= 3,
              "only " + std::to_string(winning_tasks) + " of 4 test tasks won;" +
                  summary);
}

void criterion_forecast_error_degrades() {
    Criterion c(8, "training reward degrades from 0% to 25% forecast error");

    // The criterion-6 desk family (same seed, same actuals) with a 2-hour
    // lookahead; 16 tasks x 5 seeds of paired trainings per error level.
    DeskProtocol proto;
    SystemModel sys = build_ieee13_analog();
    proto.family_opt.kappa_hours = 2.0;

    auto endpoint_mean = [&](double xi) {
        TaskFamilyOptions opt = proto.family_opt;
        opt.error_level = xi;
        std::vector<Task> tasks = make_task_family(sys, opt, 606060);
        std::vector<double> endpoints;
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            for (std::size_t k = 0; k < tasks.size(); ++k) {
                const Task& task = tasks[k];
                PolicyParams p0 = init_params(EnvState::dimension(task),
                                              Action::dimension(task), proto.hidden,
                                              derive_seed(rep, 0xe5, k));
                p0.normalizer = make_normalizer(task);
                Objective objective = make_task_objective_resampled(task, p0);
                EsConfig es = proto.es;
                es.seed = derive_seed(rep, 0x8e8, k);
                TrainResult r = train_task(objective, p0.theta, es);

                // Held-out episode seeds, shared across error levels.
                double eval = 0.0;
                for (std::uint64_t e = 0; e < 4; ++e)
                    eval += objective(r.best_theta, derive_seed(0xbead, e));
                endpoints.push_back(eval / 4.0);
            }
        }
        return mean(endpoints);
    };

    double at_zero = endpoint_mean(0.0);
    double at_quarter = endpoint_mean(0.25);
    g_notes.push_back("criterion 8 endpoint means: xi=0 -> " +
                      std::to_string(at_zero) + ", xi=0.25 -> " +
                      std::to_string(at_quarter));
    c.require(at_quarter < at_zero,
              "mean at 25% (" + std::to_string(at_quarter) +
                  ") not below mean at 0% (" + std::to_string(at_zero) + ")");
}

// --- criterion 7 -----------------------------------------------------------

void criterion_warm_start_equivalence() {
    Criterion c(7, "warm start is bit-identical to eta == 1 meta training");

    TaskFamilyOptions opt;
    opt.count = 3;
    opt.horizon_steps = 12;
    std::vector<Task> tasks = make_task_family(build_ieee13_analog(), opt, 33);

    PolicyParams p0 = init_params(EnvState::dimension(tasks[0]),
                                  Action::dimension(tasks[0]), {16}, 5);
    p0.normalizer = make_normalizer(tasks[0]);

    std::vector<MetaTask> mts;
    for (const auto& task : tasks)
        mts.push_back({task.id, make_task_objective(task, p0)});

    MetaConfig cfg;
    cfg.es.n = 8;
    cfg.es.iters = 4;
    cfg.es.seed = 99;

    MetaConfig pinned = cfg;
    pinned.schedule = EtaSchedule::Constant;
    pinned.eta0 = 1.0;

    MetaRecord warm = warm_start_train(mts, p0, cfg);
    MetaRecord meta1 = meta_train(mts, p0, pinned);
    c.require(warm.meta_params.theta == meta1.meta_params.theta,
              "final parameters differ");
    for (std::size_t m = 0; m < mts.size(); ++m) {
        c.require(warm.tasks[m].phi_adapted.theta == meta1.tasks[m].phi_adapted.theta,
                  "adapted parameters differ at task " + std::to_string(m));
        c.require(warm.tasks[m].train.eval_curve() ==
                      meta1.tasks[m].train.eval_curve(),
                  "curves differ at task " + std::to_string(m));
    }
}

// --- criterion 9 -----------------------------------------------------------

void criterion_theory_diagnostics() {
    Criterion c(9, "synthetic-family diagnostics: exact P_M, TAOG trends");

    // Exact path length against analytic optima.
    {
        Rng rng(42);
        std::vector<std::vector<double>> optima;
        std::vector<MetaTask> tasks;
        std::vector<PolicyParams> pseudo;
        for (int m = 0; m < 6; ++m) {
            std::vector<double> cm = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
            optima.push_back(cm);
            tasks.push_back({"q" + std::to_string(m), quadratic_objective(cm)});
            PolicyParams p = flat_params(1, 0);
            p.theta = cm;
            pseudo.push_back(p);
        }
        MetaConfig cfg;
        cfg.es.n = 16;
        cfg.es.sigma = 0.1;
        cfg.es.alpha = 0.2;
        cfg.es.iters = 30;
        cfg.es.seed = 11;
        MetaRecord rec = meta_train(tasks, flat_params(1, 1), cfg);
        TheoryDiagnostics diag = theory_diagnostics(rec, pseudo, tasks);

        double expected = 0.0;
        for (int m = 1; m < 6; ++m) {
            double dx = optima[m][0] - optima[m - 1][0];
            double dy = optima[m][1] - optima[m - 1][1];
            expected += std::sqrt(dx * dx + dy * dy);
        }
        c.require(std::abs(diag.path_length - expected) < 1e-9,
                  "path length not exact");
    }

    // TAOG nonincreasing in M: sign test across 20 seeds; under the binomial
    // null, 15+ decreases has p ~ 0.021 < 0.05. The i.i.d. optima cluster
    // away from the initialization, so a learned initialization has regret
    // to remove; the within-task budget is short enough that the start
    // point, not the optimizer, dominates the residual gap.
    auto taog_sequence = [&](std::uint64_t seed, int iters) {
        Rng rng(derive_seed(seed, 0x7a06));
        std::vector<MetaTask> tasks;
        std::vector<PolicyParams> pseudo;
        for (int m = 0; m < 8; ++m) {
            std::vector<double> cm = {4.0 + 0.7 * rng.gaussian(),
                                      4.0 + 0.7 * rng.gaussian()};
            tasks.push_back({"q" + std::to_string(m), quadratic_objective(cm)});
            PolicyParams p = flat_params(1, 0);
            p.theta = cm;
            pseudo.push_back(p);
        }
        MetaConfig cfg;
        cfg.es.n = 16;
        cfg.es.sigma = 0.1;
        cfg.es.alpha = 0.2;
        cfg.es.iters = iters;
        cfg.es.seed = derive_seed(seed, 0xe5);
        MetaRecord rec = meta_train(tasks, flat_params(1, seed), cfg);
        return theory_diagnostics(rec, pseudo, tasks).taog;
    };

    int decreases = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto taog = taog_sequence(seed, 10);
        if (taog.back() < taog.front()) ++decreases;
    }
    c.require(decreases >= 15, "TAOG decreased for only " +
                                   std::to_string(decreases) + "/20 seeds");

    // TAOG shrinks as the within-task budget grows.
    std::vector<double> by_budget;
    for (int budget : {10, 40, 160}) {
        std::vector<double> finals;
        for (std::uint64_t seed = 0; seed < 10; ++seed)
            finals.push_back(taog_sequence(seed, budget).back());
        by_budget.push_back(mean(finals));
    }
    g_notes.push_back("criterion 9 TAOG by budget {10,40,160}: " +
                      std::to_string(by_budget[0]) + ", " +
                      std::to_string(by_budget[1]) + ", " +
                      std::to_string(by_budget[2]));
    c.require(by_budget[0] > by_budget[1] && by_budget[1] > by_budget[2],
              "TAOG not decreasing in the within-task budget");
}

// --- criterion 10 ----------------------------------------------------------

void criterion_reliability_oracle() {
    Criterion c(10, "reliability metrics match brute-force reintegration");

    Task task = testing::make_micro_task(100.0, 100.0, 72, 0.0);
    task.demand_p_kw = {100.0, 100.0};

    auto trace_from = [](const std::vector<std::vector<double>>& served) {
        EpisodeTrace trace;
        for (const auto& row : served) {
            StepOutcome out;
            out.info.served_kw = row;
            trace.steps.push_back(std::move(out));
        }
        return trace;
    };

    // Worked example: one load restored from t = 2 h on, the other never.
    {
        std::vector<std::vector<double>> served(72, {0.0, 0.0});
        for (int t = 24; t < 72; ++t) served[t][0] = 100.0;
        double s = saidi(trace_from(served), task);
        c.require(std::abs(s - 240.0) < 1e-9,
                  "worked example gave " + std::to_string(s));
    }

    Rng rng(2024);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        std::vector<std::vector<double>> served(72);
        for (auto& row : served)
            row = {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
        EpisodeTrace trace = trace_from(served);

        double outage = 0.0;
        for (int t = 0; t < 72; ++t)
            outage += (2.0 - (served[t][0] + served[t][1]) / 100.0) * 5.0;
        c.require(std::abs(saidi(trace, task) - outage / 2.0) < 1e-9,
                  "saidi mismatch at trial " + std::to_string(trial));

        for (double pct : {50.0, 90.0, 95.0}) {
            int first = -1;
            for (int t = 0; t < 72 && first < 0; ++t)
                if (served[t][0] + served[t][1] >= pct * 2.0) first = t;
            auto rt = restoration_time(trace, task, pct);
            bool match = first < 0 ? !rt.has_value()
                                   : rt.has_value() &&
                                         std::abs(*rt - (first + 1) * 5.0) < 1e-12;
            c.require(match, "restoration time mismatch at trial " +
                                 std::to_string(trial));
        }
    }
}

// --- criterion 11 ----------------------------------------------------------

void criterion_determinism() {
    Criterion c(11, "identical configs reproduce artifacts byte for byte");

    // Benchmark training (the criterion 1 pipeline) is replay-identical.
    {
        Objective f2 = [](std::span<const double> t, std::uint64_t) {
            return bench_f2(t[0], t[1]);
        };
        EsConfig cfg;
        cfg.n = 40;
        cfg.sigma = 0.3;
        cfg.alpha = 0.3;
        cfg.iters = 50;
        cfg.seed = 31;
        TrainResult a = train_task(f2, {2.5, -2.5}, cfg);
        TrainResult b = train_task(f2, {2.5, -2.5}, cfg);
        c.require(a.best_theta == b.best_theta && a.best_fitness == b.best_fitness,
                  "benchmark training not replay-identical");
    }

    // Desk-scale CLI pipeline (the criterion 6 shape at a reduced budget).
    fs::path base = fs::temp_directory_path() / "clr_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);

    nlohmann::json j;
    j["system"] = "ieee13";
    j["tasks"] = {{"count", 4}, {"train", 3}};
    j["horizon_steps"] = 12;
    j["kappa_hours"] = 1.0;
    j["policy"] = {{"hidden", {16}}};
    j["es"] = {{"n", 6}, {"sigma", 0.05}, {"alpha", 0.05}, {"iters", 3}};
    j["meta"] = {{"eta", "1/m"}, {"finetune_budget", 3}};
    j["seed"] = 99;
    j["out"] = (base / "a").string();
    {
        std::ofstream out(base / "cfg.json");
        out << j.dump(2);
    }

    int rc1 = run_cli({"train-meta", "--config", (base / "cfg.json").string()});
    int rc2 = run_cli({"train-meta", "--config", (base / "cfg.json").string(),
                       "--out", (base / "b").string()});
    c.require(rc1 == 0 && rc2 == 0, "train-meta runs failed");
    for (const char* name :
         {"manifest.json", "curves.csv", "family.json", "meta_checkpoint.json"})
        c.require(slurp(base / "a" / name) == slurp(base / "b" / name),
                  std::string("train-meta artifact differs: ") + name);

    int rc3 = run_cli({"finetune-eval", "--run", (base / "a").string(), "--out",
                       (base / "ev_a").string()});
    int rc4 = run_cli({"finetune-eval", "--run", (base / "a").string(), "--out",
                       (base / "ev_b").string()});
    c.require(rc3 == 0 && rc4 == 0, "finetune-eval runs failed");
    for (const char* name : {"adaptation.csv", "reliability.csv", "curves_finetune.csv"})
        c.require(slurp(base / "ev_a" / name) == slurp(base / "ev_b" / name),
                  std::string("finetune artifact differs: ") + name);
    fs::remove_all(base);
}

}  // namespace

int main() {
    criterion_benchmarks();
    criterion_estimator();
    criterion_power_flow_oracle();
    criterion_conservation();
    criterion_dimensions();
    criterion_meta_advantage();
    criterion_warm_start_equivalence();
    criterion_forecast_error_degrades();
    criterion_theory_diagnostics();
    criterion_reliability_oracle();
    criterion_determinism();

    for (const auto& note : g_notes) std::printf("  %s\n", note.c_str());
    if (g_failures > 0) {
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
