#include "clr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "clr/rng.hpp"

namespace clr {

namespace {

constexpr std::uint64_t kTagDemand = 0xd377a11d;
constexpr std::uint64_t kTagProfile = 0x9a0f11e5;
constexpr std::uint64_t kTagForecast = 0xf0eca575;

double clamp_to_cap(double v, double cap) {
    return std::clamp(v, 0.0, cap);
}

}  // namespace

RenewableProfile generate_profile(double cap_kw, int horizon, ProfileShape shape,
                                  std::uint64_t seed) {
    if (cap_kw <= 0.0 || horizon < 1)
        throw std::invalid_argument("generate_profile: cap > 0 and horizon >= 1 required");
    if (shape == ProfileShape::Csv)
        throw std::invalid_argument("csv profiles come from profile_from_values");

    RenewableProfile p;
    p.cap_kw = cap_kw;
    p.actual_kw.resize(horizon);
    Rng rng(derive_seed(seed, kTagProfile));

    if (shape == ProfileShape::DiurnalSolar) {
        // Raised-cosine bump peaked mid-horizon, multiplicative log-normal
        // noise (unit mean).
        const double noise_sigma = 0.15;
        for (int t = 0; t < horizon; ++t) {
            double u = (t + 0.5) / horizon;
            double bump = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
            double noise =
                std::exp(noise_sigma * rng.gaussian() - 0.5 * noise_sigma * noise_sigma);
            p.actual_kw[t] = clamp_to_cap(cap_kw * bump * noise, cap_kw);
        }
    } else {
        // Mean-reverting walk around half capacity.
        const double revert = 0.15;
        const double step_sigma = 0.12;
        double mean = 0.5 * cap_kw;
        double w = mean;
        for (int t = 0; t < horizon; ++t) {
            w += revert * (mean - w) + step_sigma * cap_kw * rng.gaussian();
            w = clamp_to_cap(w, cap_kw);
            p.actual_kw[t] = w;
        }
    }
    return p;
}

RenewableProfile profile_from_values(const std::string& device,
                                     const std::vector<double>& values_kw,
                                     double cap_kw, int horizon) {
    if (static_cast<int>(values_kw.size()) < horizon)
        throw std::invalid_argument("profile_from_values: need at least " +
                                    std::to_string(horizon) + " rows, got " +
                                    std::to_string(values_kw.size()));
    RenewableProfile p;
    p.device = device;
    p.cap_kw = cap_kw;
    p.actual_kw.assign(values_kw.begin(), values_kw.begin() + horizon);
    for (double v : p.actual_kw)
        if (v < 0.0 || v > cap_kw)
            throw std::invalid_argument("profile_from_values: value outside [0, cap]");
    return p;
}

ForecastTensor synthesize_forecast(const RenewableProfile& profile,
                                   double error_level, double kappa_hours,
                                   double tau_hours, std::uint64_t seed) {
    if (error_level < 0.0 || error_level > 1.0)
        throw std::invalid_argument("error_level must be in [0, 1]");
    double ratio = kappa_hours / tau_hours;
    int lookahead = static_cast<int>(std::llround(ratio));
    if (lookahead < 1 || std::abs(ratio - lookahead) > 1e-9)
        throw std::invalid_argument("kappa/tau must be a positive integer");

    const int horizon = static_cast<int>(profile.actual_kw.size());
    ForecastTensor f;
    f.device = profile.device;
    f.horizon = horizon;
    f.lookahead = lookahead;
    f.values.resize(static_cast<std::size_t>(horizon) * lookahead);

    for (int t = 0; t < horizon; ++t) {
        f.values[static_cast<std::size_t>(t) * lookahead] = profile.actual_kw[t];
        for (int x = 1; x < lookahead; ++x) {
            int src = std::min(t + x, horizon - 1);  // constant padding at the end
            double z = gaussian_at(seed, kTagForecast, static_cast<std::uint64_t>(t),
                                   static_cast<std::uint64_t>(x));
            double rel = error_level * (static_cast<double>(x) / lookahead) * z;
            f.values[static_cast<std::size_t>(t) * lookahead + x] =
                clamp_to_cap(profile.actual_kw[src] * (1.0 + rel), profile.cap_kw);
        }
    }
    return f;
}

int Task::lookahead_steps() const {
    return static_cast<int>(std::llround(kappa_hours / tau_hours));
}

void Task::validate() const {
    system.validate();
    const auto renew = system.fleet.renewable_indices();
    if (profiles.size() != renew.size() || forecasts.size() != renew.size())
        throw std::domain_error("task needs one profile and one forecast per renewable");
    if (demand_p_kw.size() != system.loads.loads.size() ||
        demand_q_kvar.size() != system.loads.loads.size())
        throw std::domain_error("task demand overrides must cover every load");
    for (double d : demand_p_kw)
        if (d <= 0.0) throw std::domain_error("task demands must be positive");
    if (horizon_steps < 1) throw std::domain_error("horizon must be >= 1");
    double ratio = kappa_hours / tau_hours;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9)
        throw std::domain_error("kappa/tau must be an integer");
    for (const auto& p : profiles)
        if (static_cast<int>(p.actual_kw.size()) != horizon_steps)
            throw std::domain_error("profile length must equal the horizon");
    for (const auto& fc : forecasts)
        if (fc.horizon != horizon_steps || fc.lookahead != lookahead_steps())
            throw std::domain_error("forecast tensor shape mismatch");
}

std::vector<Task> make_task_family(const SystemModel& base,
                                   const TaskFamilyOptions& opt,
                                   std::uint64_t seed) {
    if (opt.count < 1) throw std::invalid_argument("task count must be >= 1");
    if (!(opt.demand_lo_kw > 0.0 && opt.demand_lo_kw <= opt.demand_hi_kw))
        throw std::invalid_argument("demand range must satisfy 0 < lo <= hi");

    std::vector<Task> tasks;
    tasks.reserve(opt.count);
    const auto renew = base.fleet.renewable_indices();

    for (int m = 0; m < opt.count; ++m) {
        Task task;
        task.id = "task-" + std::to_string(m);
        task.system = base;
        task.error_level = opt.error_level;
        task.kappa_hours = opt.kappa_hours;
        task.tau_hours = opt.tau_hours;
        task.horizon_steps = opt.horizon_steps;
        task.mu = opt.mu;
        task.lambda = opt.lambda;
        task.seed = derive_seed(seed, static_cast<std::uint64_t>(m));

        Rng demand_rng(derive_seed(task.seed, kTagDemand));
        for (const auto& load : base.loads.loads) {
            double p = demand_rng.uniform(opt.demand_lo_kw, opt.demand_hi_kw);
            double q = p * (load.demand_q_kvar / load.demand_p_kw);
            task.demand_p_kw.push_back(p);
            task.demand_q_kvar.push_back(q);
        }

        for (std::size_t r = 0; r < renew.size(); ++r) {
            const DerDevice& dev = base.fleet.devices[renew[r]];
            // Scenario seeds are independent of error level and lookahead.
            auto profile = generate_profile(
                dev.capacity_kw, opt.horizon_steps, dev.shape,
                derive_seed(task.seed, kTagProfile, static_cast<std::uint64_t>(r)));
            profile.device = dev.name;
            auto forecast = synthesize_forecast(
                profile, opt.error_level, opt.kappa_hours, opt.tau_hours,
                derive_seed(task.seed, kTagForecast, static_cast<std::uint64_t>(r)));
            task.profiles.push_back(std::move(profile));
            task.forecasts.push_back(std::move(forecast));
        }
        task.validate();
        tasks.push_back(std::move(task));
    }
    return tasks;
}

TaskSplit split_family(const std::vector<Task>& tasks, int n_train) {
    if (n_train < 0 || n_train > static_cast<int>(tasks.size()))
        throw std::invalid_argument("train split outside family size");
    TaskSplit split;
    split.train.assign(tasks.begin(), tasks.begin() + n_train);
    split.test.assign(tasks.begin() + n_train, tasks.end());
    return split;
}

}  // namespace clr
