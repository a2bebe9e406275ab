#include "clr/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "clr/es.hpp"
#include "clr/meta.hpp"
#include "clr/metrics.hpp"
#include "clr/policy.hpp"
#include "clr/rng.hpp"
#include "clr/serialize.hpp"

namespace fs = std::filesystem;

namespace clr {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

struct RunConfig {
    std::string system = "ieee13";  // ieee13 | ieee123 | path to system json
    int task_count = 60;
    int train_count = 32;
    double demand_lo_kw = 20.0;
    double demand_hi_kw = 160.0;
    int horizon_steps = 72;
    double tau_hours = 1.0 / 12.0;
    double kappa_hours = 4.0;
    double error_level = 0.0;
    double mu = 1.0;
    double lambda = 1e8;
    std::vector<int> hidden = {64, 64};
    EsConfig es;
    EtaSchedule eta_schedule = EtaSchedule::InverseM;
    double eta0 = 1.0;
    int finetune_budget = 10;
    std::vector<double> sweep_error_levels = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
    std::vector<double> sweep_kappa_hours = {1.0, 2.0, 4.0, 6.0};
    std::string profiles_csv;  // optional
    std::string out = "runs/out";
    std::uint64_t seed = 0;

    nlohmann::json echo;  // config as loaded, for the manifest
};

FitnessShaping shaping_from(const std::string& s) {
    if (s == "none") return FitnessShaping::None;
    if (s == "centered-rank") return FitnessShaping::CenteredRank;
    throw std::invalid_argument("es.shaping must be 'none' or 'centered-rank'");
}

EtaSchedule eta_from(const std::string& s) {
    if (s == "constant") return EtaSchedule::Constant;
    if (s == "1/m") return EtaSchedule::InverseM;
    if (s == "1/sqrt(m)") return EtaSchedule::InverseSqrtM;
    throw std::invalid_argument("meta.eta must be 'constant', '1/m' or '1/sqrt(m)'");
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.echo = j;
    cfg.system = j.value("system", cfg.system);
    if (j.contains("tasks")) {
        const auto& t = j["tasks"];
        cfg.task_count = t.value("count", cfg.task_count);
        cfg.train_count = t.value("train", cfg.train_count);
        cfg.demand_lo_kw = t.value("demand_lo_kw", cfg.demand_lo_kw);
        cfg.demand_hi_kw = t.value("demand_hi_kw", cfg.demand_hi_kw);
    }
    cfg.horizon_steps = j.value("horizon_steps", cfg.horizon_steps);
    cfg.tau_hours = j.value("tau_hours", cfg.tau_hours);
    cfg.kappa_hours = j.value("kappa_hours", cfg.kappa_hours);
    cfg.error_level = j.value("error_level", cfg.error_level);
    cfg.mu = j.value("mu", cfg.mu);
    cfg.lambda = j.value("lambda", cfg.lambda);
    if (j.contains("policy"))
        cfg.hidden = j["policy"].value("hidden", cfg.hidden);
    if (j.contains("es")) {
        const auto& e = j["es"];
        cfg.es.n = e.value("n", cfg.es.n);
        cfg.es.sigma = e.value("sigma", cfg.es.sigma);
        cfg.es.alpha = e.value("alpha", cfg.es.alpha);
        cfg.es.iters = e.value("iters", cfg.es.iters);
        cfg.es.eval_episodes = e.value("eval_episodes", cfg.es.eval_episodes);
        cfg.es.mirrored = e.value("mirrored", cfg.es.mirrored);
        if (e.contains("shaping"))
            cfg.es.shaping = shaping_from(e["shaping"].get<std::string>());
    }
    if (j.contains("meta")) {
        const auto& m = j["meta"];
        if (m.contains("eta")) cfg.eta_schedule = eta_from(m["eta"].get<std::string>());
        cfg.eta0 = m.value("eta0", cfg.eta0);
        cfg.finetune_budget = m.value("finetune_budget", cfg.finetune_budget);
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        cfg.sweep_error_levels =
            s.value("error_levels", cfg.sweep_error_levels);
        cfg.sweep_kappa_hours = s.value("kappa_hours", cfg.sweep_kappa_hours);
    }
    cfg.profiles_csv = j.value("profiles_csv", cfg.profiles_csv);
    cfg.out = j.value("out", cfg.out);
    cfg.seed = j.value("seed", cfg.seed);

    // Validation beyond per-module checks.
    if (cfg.system != "ieee13" && cfg.system != "ieee123" && !fs::exists(cfg.system))
        throw std::invalid_argument("field 'system': no such file: " + cfg.system);
    if (!cfg.profiles_csv.empty() && !fs::exists(cfg.profiles_csv))
        throw std::invalid_argument("field 'profiles_csv': no such file: " +
                                    cfg.profiles_csv);
    if (cfg.train_count < 1 || cfg.train_count > cfg.task_count)
        throw std::invalid_argument("field 'tasks.train': split outside [1, count]");
    cfg.es.validate();
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    if (!fs::exists(path))
        throw std::invalid_argument("config file does not exist: " + path.string());
    return config_from_json(read_json(path));
}

SystemModel build_system(const RunConfig& cfg) {
    if (cfg.system == "ieee13") return build_ieee13_analog();
    if (cfg.system == "ieee123") return build_ieee123_analog();
    return system_from_json(read_json(cfg.system));
}

std::vector<Task> build_family(const RunConfig& cfg, const SystemModel& sys,
                               double error_level, double kappa_hours) {
    TaskFamilyOptions opt;
    opt.count = cfg.task_count;
    opt.demand_lo_kw = cfg.demand_lo_kw;
    opt.demand_hi_kw = cfg.demand_hi_kw;
    opt.error_level = error_level;
    opt.kappa_hours = kappa_hours;
    opt.tau_hours = cfg.tau_hours;
    opt.horizon_steps = cfg.horizon_steps;
    opt.mu = cfg.mu;
    opt.lambda = cfg.lambda;

    std::vector<Task> tasks = make_task_family(sys, opt, cfg.seed);
    if (!cfg.profiles_csv.empty()) {
        // CSV actuals replace the synthetic profiles in every task.
        auto columns = read_profile_csv(cfg.profiles_csv);
        for (auto& task : tasks) {
            const auto renew = task.system.fleet.renewable_indices();
            for (std::size_t r = 0; r < renew.size(); ++r) {
                const DerDevice& dev = task.system.fleet.devices[renew[r]];
                auto it = columns.find(dev.name);
                if (it == columns.end())
                    throw std::invalid_argument("profiles_csv lacks column " + dev.name);
                auto profile = profile_from_values(dev.name, it->second,
                                                   dev.capacity_kw, cfg.horizon_steps);
                task.forecasts[r] = synthesize_forecast(
                    profile, task.error_level, task.kappa_hours, task.tau_hours,
                    derive_seed(task.seed, 0xf0eca575, static_cast<std::uint64_t>(r)));
                task.profiles[r] = std::move(profile);
            }
        }
    }
    return tasks;
}

MetaConfig make_meta_config(const RunConfig& cfg) {
    MetaConfig mc;
    mc.es = cfg.es;
    mc.es.seed = cfg.seed;
    mc.schedule = cfg.eta_schedule;
    mc.eta0 = cfg.eta0;
    mc.finetune_budget = cfg.finetune_budget;
    return mc;
}

PolicyParams init_policy_for(const Task& task, const RunConfig& cfg,
                             std::uint64_t seed) {
    PolicyParams p = init_params(EnvState::dimension(task), Action::dimension(task),
                                 cfg.hidden, seed);
    p.normalizer = make_normalizer(task);
    return p;
}

// Advisory lock: one writer per run directory.
class DirLock {
public:
    explicit DirLock(const fs::path& dir) : lock_(dir / ".lock") {
        fs::create_directories(dir);
        if (fs::exists(lock_))
            throw std::runtime_error("run directory is locked: " + lock_.string());
        std::ofstream out(lock_);
        out << "locked\n";
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(lock_, ec);
    }

private:
    fs::path lock_;
};

void write_curves_csv(const fs::path& file,
                      const std::vector<std::pair<std::string, TrainRecord>>& records) {
    CsvWriter csv(file, {"task", "iteration", "pop_mean", "eval", "best"});
    for (const auto& [id, rec] : records)
        for (const auto& row : rec.rows)
            csv.row({id, std::to_string(row.iteration), format_double(row.pop_mean),
                     format_double(row.eval_fitness), format_double(row.best_so_far)});
}

void write_timings_csv(const fs::path& file,
                       const std::vector<std::pair<std::string, TrainRecord>>& records) {
    CsvWriter csv(file, {"task", "iteration", "wall_ms"});
    for (const auto& [id, rec] : records)
        for (const auto& row : rec.rows)
            csv.row({id, std::to_string(row.iteration), format_double(row.wall_ms)});
}

int cmd_validate_config(const std::string& config_path) {
    load_config(config_path);
    std::cout << "config ok: " << config_path << "\n";
    return kExitOk;
}

int cmd_train_meta(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    fs::path out(cfg.out);
    DirLock lock(out);

    SystemModel sys = build_system(cfg);
    std::vector<Task> tasks = build_family(cfg, sys, cfg.error_level, cfg.kappa_hours);
    TaskSplit split = split_family(tasks, cfg.train_count);

    PolicyParams params0 = init_policy_for(tasks.front(), cfg, cfg.seed);
    MetaConfig mc = make_meta_config(cfg);

    std::vector<MetaTask> meta_tasks;
    for (const auto& task : split.train)
        meta_tasks.push_back({task.id, make_task_objective(task, params0)});

    MetaRecord record = meta_train(meta_tasks, params0, mc);

    // Persist: manifest, family, meta checkpoint, per-task checkpoints, curves.
    fs::create_directories(out / "tasks");
    write_json(family_to_json(tasks), out / "family.json");
    save_checkpoint(record.meta_params, out / "meta_checkpoint.json");

    nlohmann::json manifest;
    manifest["command"] = "train-meta";
    manifest["config"] = cfg.echo;
    manifest["seed"] = cfg.seed;
    manifest["train_tasks"] = nlohmann::json::array();
    std::vector<std::pair<std::string, TrainRecord>> records;
    for (const auto& tr : record.tasks) {
        save_checkpoint(tr.phi_adapted, out / "tasks" / (tr.task_id + ".json"));
        manifest["train_tasks"].push_back(
            {{"id", tr.task_id}, {"eta", tr.eta}, {"best_iteration", tr.train.best_iteration}});
        records.emplace_back(tr.task_id, tr.train);
    }
    manifest["test_tasks"] = nlohmann::json::array();
    for (const auto& task : split.test) manifest["test_tasks"].push_back(task.id);
    write_json(manifest, out / "manifest.json");
    write_curves_csv(out / "curves.csv", records);
    write_timings_csv(out / "timings.csv", records);

    // Final meta-policy evaluation: zero-shot mean over the training tasks.
    double zero_shot = 0.0;
    for (const auto& mt : meta_tasks)
        zero_shot += mt.objective(record.meta_params.theta, 0);
    zero_shot /= static_cast<double>(meta_tasks.size());

    double wall_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count();
    std::cout << "train-meta done: tasks=" << meta_tasks.size()
              << " meta_eval=" << format_double(zero_shot)
              << " wall_s=" << format_double(wall_s) << "\n";
    return kExitOk;
}

int cmd_finetune_eval(const std::string& run_dir, std::optional<int> budget_override,
                      const std::string& out_override, int parallel) {
    fs::path run(run_dir);
    if (!fs::exists(run / "manifest.json"))
        throw std::invalid_argument("no manifest.json under " + run_dir);
    nlohmann::json manifest = read_json(run / "manifest.json");
    if (manifest.value("command", "") != "train-meta")
        throw std::invalid_argument("finetune-eval needs a train-meta run directory");

    RunConfig cfg = config_from_json(manifest.at("config"));
    if (budget_override) cfg.finetune_budget = *budget_override;
    cfg.es.parallelism = parallel;

    fs::path out = out_override.empty() ? run / "eval" : fs::path(out_override);
    DirLock lock(out);

    std::vector<Task> tasks = family_from_json(read_json(run / "family.json"));
    TaskSplit split = split_family(tasks, cfg.train_count);
    PolicyParams meta_params = load_checkpoint(run / "meta_checkpoint.json");
    PolicyParams prototype = meta_params;  // shape/normalizer template

    EsConfig ft = cfg.es;
    ft.iters = cfg.finetune_budget;

    // Warm-start chain over the training tasks, fine-tuned like the meta policy.
    MetaConfig mc = make_meta_config(cfg);
    std::vector<MetaTask> train_objectives;
    for (const auto& task : split.train)
        train_objectives.push_back({task.id, make_task_objective(task, prototype)});
    PolicyParams warm_init = init_policy_for(split.train.front(), cfg, cfg.seed);
    MetaRecord warm_record = warm_start_train(train_objectives, warm_init, mc);

    CsvWriter adaptation(out / "adaptation.csv",
                         {"method", "task", "delta_init", "delta_r", "mean_reward",
                          "episodes_to_threshold"});
    CsvWriter reliability(out / "reliability.csv",
                          {"method", "task", "saidi_min", "rt50_min", "rt90_min",
                           "rt95_min", "pct_restored"});
    CsvWriter curves(out / "curves_finetune.csv", {"method", "task", "iteration", "eval"});
    fs::create_directories(out / "traces");

    auto emit_reliability = [&](const std::string& method, const Task& task,
                                const EpisodeTrace& trace) {
        ReliabilityReport rep = reliability_report(trace, task);
        auto rt = [&](int pct) {
            auto v = rep.restoration_time_minutes.at(pct);
            return v ? format_double(*v) : std::string("never");
        };
        reliability.row({method, task.id, format_double(rep.saidi_minutes), rt(50),
                         rt(90), rt(95), format_double(rep.pct_restored_final)});
        write_trace_csv(trace, task,
                        out / "traces" / (method + "_" + task.id + ".csv"));
    };

    for (std::size_t k = 0; k < split.test.size(); ++k) {
        const Task& task = split.test[k];
        Objective objective = make_task_objective(task, prototype);
        EsConfig task_es = ft;
        task_es.seed = derive_seed(cfg.seed, 0xf17e, static_cast<std::uint64_t>(k));

        FineTuneResult mgf = fine_tune(meta_params, objective, cfg.finetune_budget, task_es);
        PolicyParams scratch0 =
            init_policy_for(task, cfg, derive_seed(cfg.seed, 0x5c8a7c8));
        FineTuneResult esrl = fine_tune(scratch0, objective, cfg.finetune_budget, task_es);
        FineTuneResult warm =
            fine_tune(warm_record.meta_params, objective, cfg.finetune_budget, task_es);

        EpisodeTrace greedy_trace = rollout(
            [](const EnvState& s, const Task& t) { return greedy_dispatch(s, t); }, task);
        std::vector<double> greedy_curve(mgf.record.rows.size(),
                                         greedy_trace.total_reward);

        auto esrl_curve = esrl.record.eval_curve();
        auto report_method = [&](const std::string& method,
                                 const std::vector<double>& curve) {
            AdaptationReport rep = adaptation_metrics(curve, esrl_curve);
            adaptation.row({method, task.id, format_double(rep.delta_init),
                            format_double(rep.delta_r),
                            format_double(rep.mean_cumulative_reward),
                            rep.episodes_to_threshold
                                ? std::to_string(*rep.episodes_to_threshold)
                                : std::string("never")});
            for (std::size_t i = 0; i < curve.size(); ++i)
                curves.row({method, task.id, std::to_string(i), format_double(curve[i])});
        };
        report_method("mgf", mgf.record.eval_curve());
        report_method("esrl", esrl_curve);
        report_method("warm", warm.record.eval_curve());
        report_method("greedy", greedy_curve);

        auto policy_trace = [&](const PolicyParams& p) {
            return rollout([&p](const std::vector<double>& s) { return forward(p, s); },
                           task);
        };
        emit_reliability("mgf", task, policy_trace(mgf.adapted));
        emit_reliability("esrl", task, policy_trace(esrl.adapted));
        emit_reliability("warm", task, policy_trace(warm.adapted));
        emit_reliability("greedy", task, greedy_trace);
    }

    nlohmann::json eval_manifest;
    eval_manifest["command"] = "finetune-eval";
    eval_manifest["run"] = run_dir;
    eval_manifest["budget"] = cfg.finetune_budget;
    eval_manifest["methods"] = {"mgf", "esrl", "warm", "greedy"};
    write_json(eval_manifest, out / "manifest.json");

    std::cout << "finetune-eval done: test_tasks=" << split.test.size()
              << " budget=" << cfg.finetune_budget << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    fs::path out(cfg.out);
    DirLock lock(out);

    SystemModel sys = build_system(cfg);

    nlohmann::json manifest;
    manifest["command"] = "sweep";
    manifest["config"] = cfg.echo;
    manifest["cells"] = nlohmann::json::array();

    CsvWriter grid(out / "sweep.csv", [&] {
        std::vector<std::string> header = {"error_level"};
        for (double k : cfg.sweep_kappa_hours)
            header.push_back("kappa_" + format_double(k));
        return header;
    }());

    for (double xi : cfg.sweep_error_levels) {
        std::vector<std::string> row = {format_double(xi)};
        for (double kappa : cfg.sweep_kappa_hours) {
            std::vector<Task> tasks = build_family(cfg, sys, xi, kappa);
            double mean_final = 0.0;
            for (std::size_t k = 0; k < tasks.size(); ++k) {
                const Task& task = tasks[k];
                PolicyParams p0 =
                    init_policy_for(task, cfg, derive_seed(cfg.seed, 0x5c8a7c8));
                Objective objective = make_task_objective_resampled(task, p0);
                EsConfig es = cfg.es;
                es.seed =
                    derive_seed(cfg.seed, 0xf17e, static_cast<std::uint64_t>(k));
                TrainResult result = train_task(objective, p0.theta, es);
                mean_final += result.best_fitness;
            }
            mean_final /= static_cast<double>(tasks.size());
            row.push_back(format_double(mean_final));

            // Scenario digest proves cells share actual profiles.
            std::uint64_t digest = 0xcbf29ce484222325ULL;
            for (const auto& task : tasks)
                for (const auto& profile : task.profiles)
                    for (double v : profile.actual_kw) {
                        std::uint64_t bits;
                        static_assert(sizeof(bits) == sizeof(v));
                        std::memcpy(&bits, &v, sizeof(bits));
                        digest = (digest ^ bits) * 0x100000001b3ULL;
                    }
            manifest["cells"].push_back({{"error_level", xi},
                                         {"kappa_hours", kappa},
                                         {"scenario_digest", digest}});
        }
        grid.row(row);
    }
    write_json(manifest, out / "manifest.json");
    std::cout << "sweep done: " << cfg.sweep_error_levels.size() << "x"
              << cfg.sweep_kappa_hours.size() << " grid\n";
    return kExitOk;
}

int cmd_report(const std::string& run_dir) {
    fs::path run(run_dir);
    if (!fs::exists(run / "manifest.json"))
        throw std::invalid_argument("no manifest.json under " + run_dir);
    nlohmann::json manifest = read_json(run / "manifest.json");
    const std::string command = manifest.value("command", "");
    fs::path out = run / "report";
    fs::create_directories(out);

    if (command == "train-meta") {
        // Tidy learning curves: (task, iteration, mean, best).
        std::ifstream in(run / "curves.csv");
        if (!in) throw std::invalid_argument("missing curves.csv in " + run_dir);
        std::string line;
        std::getline(in, line);  // header
        CsvWriter tidy(out / "curves.csv", {"task", "iteration", "mean", "best"});
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            tidy.row({cells[0], cells[1], cells[3], cells[4]});
        }
        std::cout << "report done: curves\n";
        return kExitOk;
    }

    if (command == "finetune-eval") {
        std::vector<Task> tasks;
        {
            fs::path family = fs::path(manifest.at("run").get<std::string>()) / "family.json";
            if (fs::exists(family)) tasks = family_from_json(read_json(family));
        }
        auto task_by_id = [&](const std::string& id) -> const Task* {
            for (const auto& t : tasks)
                if (t.id == id) return &t;
            return nullptr;
        };

        CsvWriter heatmap(out / "heatmap.csv",
                          {"method", "task", "load", "t", "served_fraction"});
        CsvWriter dispatch(out / "dispatch.csv",
                           {"method", "task", "device", "t", "p_kw"});
        for (const auto& entry : fs::directory_iterator(run / "traces")) {
            std::string stem = entry.path().stem().string();
            auto sep = stem.find('_');
            std::string method = stem.substr(0, sep);
            std::string task_id = stem.substr(sep + 1);
            const Task* task = task_by_id(task_id);
            if (!task) continue;

            std::ifstream in(entry.path());
            std::string line;
            std::getline(in, line);
            const int n_loads = static_cast<int>(task->demand_p_kw.size());
            const int n_dev = static_cast<int>(task->system.fleet.devices.size());
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::vector<std::string> cells;
                std::stringstream ss(line);
                std::string cell;
                while (std::getline(ss, cell, ',')) cells.push_back(cell);
                for (int i = 0; i < n_loads; ++i) {
                    double frac = std::stod(cells[1 + i]) / task->demand_p_kw[i];
                    heatmap.row({method, task_id, task->system.loads.loads[i].name,
                                 cells[0], format_double(frac)});
                }
                for (int d = 0; d < n_dev; ++d)
                    dispatch.row({method, task_id,
                                  task->system.fleet.devices[d].name, cells[0],
                                  cells[1 + n_loads + d]});
            }
        }

        // Summary table joining adaptation and reliability rows.
        for (const char* name : {"adaptation.csv", "reliability.csv"})
            if (fs::exists(run / name))
                fs::copy_file(run / name, out / name,
                              fs::copy_options::overwrite_existing);
        std::cout << "report done: heatmap, dispatch, tables\n";
        return kExitOk;
    }

    if (command == "sweep") {
        fs::copy_file(run / "sweep.csv", out / "sweep.csv",
                      fs::copy_options::overwrite_existing);
        std::cout << "report done: sweep grid\n";
        return kExitOk;
    }

    throw std::invalid_argument("unrecognized run directory kind: " + command);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Critical load restoration trainer"};
    app.name("clr");
    app.require_subcommand(1);

    std::string config_path, run_dir, out_override;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int parallel = 1;
    int budget = -1;

    if (const char* env = std::getenv("CLR_PARALLEL")) parallel = std::atoi(env);

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "run configuration json")
                ->required();
        cmd->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--out", out_override, "override the output directory");
        cmd->add_option("--parallel", parallel,
                        "evaluation threads (never changes results)");
    };

    CLI::App* validate = app.add_subcommand("validate-config", "parse and validate");
    validate->add_option("--config", config_path)->required();

    CLI::App* train = app.add_subcommand("train-meta", "meta-train across tasks");
    add_common(train, true);

    CLI::App* finetune =
        app.add_subcommand("finetune-eval", "fine-tune and compare baselines");
    finetune->add_option("--run", run_dir, "train-meta run directory")->required();
    finetune->add_option("--budget", budget, "fine-tune iterations");
    finetune->add_option("--out", out_override);
    finetune->add_option("--parallel", parallel);

    CLI::App* sweep = app.add_subcommand("sweep", "forecast error x lookahead grid");
    add_common(sweep, true);

    CLI::App* report = app.add_subcommand("report", "emit plot-ready csv data");
    report->add_option("--run", run_dir, "finished run directory")->required();

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        auto finish_config = [&]() {
            RunConfig cfg = load_config(config_path);
            if (seed_given) cfg.seed = seed_override;
            if (!out_override.empty()) cfg.out = out_override;
            if (const char* env = std::getenv("CLR_OUT")) cfg.out = env;
            cfg.es.parallelism = parallel;
            return cfg;
        };
        if (validate->parsed()) return cmd_validate_config(config_path);
        if (train->parsed()) return cmd_train_meta(finish_config());
        if (finetune->parsed())
            return cmd_finetune_eval(run_dir,
                                     budget >= 0 ? std::optional<int>(budget)
                                                 : std::nullopt,
                                     out_override, parallel);
        if (sweep->parsed()) return cmd_sweep(finish_config());
        if (report->parsed()) return cmd_report(run_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitInvalid;
}

}  // namespace clr
