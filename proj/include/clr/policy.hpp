#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "clr/scenario.hpp"

namespace clr {

// Per-feature affine input map: normalized = scale * x + offset.
struct Normalizer {
    std::vector<double> scale;
    std::vector<double> offset;

    static Normalizer identity(int dim);
};

// Flat parameter vector over a tanh MLP. Packing is layer-major: for each
// layer, weights in output-major row order (w[out][in]), then the bias.
struct PolicyParams {
    std::vector<int> shape;  // [d_in, hidden..., d_out]
    std::vector<double> theta;
    Normalizer normalizer;
    std::uint64_t seed_lineage = 0;

    static std::size_t param_count(const std::vector<int>& shape);
};

// Weights zero-mean gaussian scaled by 1/sqrt(fan_in), biases zero.
PolicyParams init_params(int d_in, int d_out, const std::vector<int>& hidden,
                         std::uint64_t seed);

// tanh hidden activations, tanh-squashed output in (-1, 1)^d_out.
std::vector<double> forward(const PolicyParams& params,
                            std::span<const double> input);

// 0.5 * ||theta_a - theta_b||^2; divergence proxy between parameter vectors.
double param_distance(const PolicyParams& a, const PolicyParams& b);

// Scales forecasts by device capacity, SOC/fuel by their maxima, t by the
// horizon; restoration fractions pass through.
Normalizer make_normalizer(const Task& task);

// Checkpoint: JSON header (shape, normalizer, seed lineage) plus a base64
// little-endian float64 payload of theta.
void save_checkpoint(const PolicyParams& params, const std::filesystem::path& file);
PolicyParams load_checkpoint(const std::filesystem::path& file);

}  // namespace clr
