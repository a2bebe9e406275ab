#include "clr/policy.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "clr/base64.hpp"
#include "clr/rng.hpp"

namespace clr {

Normalizer Normalizer::identity(int dim) {
    Normalizer n;
    n.scale.assign(dim, 1.0);
    n.offset.assign(dim, 0.0);
    return n;
}

std::size_t PolicyParams::param_count(const std::vector<int>& shape) {
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < shape.size(); ++l)
        count += static_cast<std::size_t>(shape[l]) * shape[l + 1] + shape[l + 1];
    return count;
}

PolicyParams init_params(int d_in, int d_out, const std::vector<int>& hidden,
                         std::uint64_t seed) {
    if (d_in < 1 || d_out < 1)
        throw std::invalid_argument("policy dims must be >= 1");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("hidden sizes must be >= 1");

    PolicyParams p;
    p.shape.push_back(d_in);
    p.shape.insert(p.shape.end(), hidden.begin(), hidden.end());
    p.shape.push_back(d_out);
    p.normalizer = Normalizer::identity(d_in);
    p.seed_lineage = seed;
    p.theta.reserve(PolicyParams::param_count(p.shape));

    Rng rng(derive_seed(seed, 0x9011c7));
    for (std::size_t l = 0; l + 1 < p.shape.size(); ++l) {
        const int fan_in = p.shape[l];
        const int fan_out = p.shape[l + 1];
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int o = 0; o < fan_out; ++o)
            for (int i = 0; i < fan_in; ++i) p.theta.push_back(scale * rng.gaussian());
        for (int o = 0; o < fan_out; ++o) p.theta.push_back(0.0);
    }
    return p;
}

std::vector<double> forward(const PolicyParams& params,
                            std::span<const double> input) {
    if (static_cast<int>(input.size()) != params.shape.front())
        throw std::invalid_argument("policy input has wrong dimension");
    if (params.theta.size() != PolicyParams::param_count(params.shape))
        throw std::invalid_argument("theta length does not match shape");

    std::vector<double> x(input.size());
    for (std::size_t i = 0; i < input.size(); ++i)
        x[i] = params.normalizer.scale[i] * input[i] + params.normalizer.offset[i];

    std::size_t k = 0;
    for (std::size_t l = 0; l + 1 < params.shape.size(); ++l) {
        const int fan_in = params.shape[l];
        const int fan_out = params.shape[l + 1];
        std::vector<double> y(fan_out);
        for (int o = 0; o < fan_out; ++o) {
            double sum = 0.0;
            for (int i = 0; i < fan_in; ++i) sum += params.theta[k++] * x[i];
            y[o] = sum;
        }
        for (int o = 0; o < fan_out; ++o) y[o] += params.theta[k++];
        for (double& v : y) v = std::tanh(v);
        x = std::move(y);
    }
    return x;
}

double param_distance(const PolicyParams& a, const PolicyParams& b) {
    if (a.shape != b.shape)
        throw std::invalid_argument("param_distance requires identical shapes");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.theta.size(); ++i) {
        double d = a.theta[i] - b.theta[i];
        sum += d * d;
    }
    return 0.5 * sum;
}

Normalizer make_normalizer(const Task& task) {
    const auto& fleet = task.system.fleet;
    Normalizer n;
    for (int r : fleet.renewable_indices()) {
        double cap = fleet.devices[r].capacity_kw;
        for (int x = 0; x < task.lookahead_steps(); ++x) n.scale.push_back(1.0 / cap);
    }
    n.scale.insert(n.scale.end(), task.system.loads.loads.size(), 1.0);
    for (int s : fleet.storage_indices())
        n.scale.push_back(1.0 / fleet.devices[s].soc_max_kwh);
    for (int f : fleet.fuel_indices())
        n.scale.push_back(1.0 / fleet.devices[f].fuel_reserve_kwh);
    n.scale.push_back(1.0 / task.horizon_steps);
    n.offset.assign(n.scale.size(), 0.0);
    return n;
}

void save_checkpoint(const PolicyParams& params, const std::filesystem::path& file) {
    nlohmann::json j;
    j["shape"] = params.shape;
    j["normalizer"] = {{"scale", params.normalizer.scale},
                       {"offset", params.normalizer.offset}};
    j["seed_lineage"] = params.seed_lineage;
    // Little-endian float64 payload.
    std::string raw(params.theta.size() * sizeof(double), '\0');
    std::memcpy(raw.data(), params.theta.data(), raw.size());
    j["theta_b64"] = base64_encode(raw);

    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + file.string());
    out << j.dump(2) << "\n";
}

PolicyParams load_checkpoint(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + file.string());
    nlohmann::json j;
    in >> j;

    PolicyParams p;
    p.shape = j.at("shape").get<std::vector<int>>();
    p.normalizer.scale = j.at("normalizer").at("scale").get<std::vector<double>>();
    p.normalizer.offset = j.at("normalizer").at("offset").get<std::vector<double>>();
    p.seed_lineage = j.at("seed_lineage").get<std::uint64_t>();

    if (p.shape.size() < 2 ||
        p.normalizer.scale.size() != static_cast<std::size_t>(p.shape.front()) ||
        p.normalizer.offset.size() != p.normalizer.scale.size())
        throw std::runtime_error("checkpoint normalizer does not match shape");

    std::string raw = base64_decode(j.at("theta_b64").get<std::string>());
    if (raw.size() != PolicyParams::param_count(p.shape) * sizeof(double))
        throw std::runtime_error("checkpoint payload does not match shape");
    p.theta.resize(raw.size() / sizeof(double));
    std::memcpy(p.theta.data(), raw.data(), raw.size());
    return p;
}

}  // namespace clr
