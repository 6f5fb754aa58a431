#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "a0c/beta_policy.hpp"
#include "a0c/types.hpp"

namespace a0c {

/// Row-major dense matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const {
        return data.data() + static_cast<std::size_t>(r) * cols;
    }
    double& operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
};

struct NetConfig {
    int obs_dim = 3;
    int n_a = 1;
    int hidden = 128;
    int depth = 3;  // hidden layers in the shared trunk

    bool operator==(const NetConfig&) const = default;
};

struct LayerParams {
    Matrix w;                // out x in
    std::vector<double> b;   // out
};

/// Shared ELU trunk with a Beta-parameter policy head (raw 2*n_a outputs,
/// mapped through 1 + softplus) and a linear scalar value head. Doubles as
/// the gradient container: gradients mirror the parameter layout.
struct NetworkParams {
    NetConfig cfg;
    std::vector<LayerParams> trunk;
    LayerParams policy_head;  // 2*n_a x hidden
    LayerParams value_head;   // 1 x hidden
};

/// Applies fn(name, std::vector<double>&) to every parameter array in a
/// fixed order (trunk layers, policy head, value head; weights before
/// biases).
template <typename Params, typename Fn>
void visit_tensors(Params&& p, Fn&& fn) {
    for (std::size_t l = 0; l < p.trunk.size(); ++l) {
        const std::string tag = "trunk" + std::to_string(l);
        fn(tag + ".w", p.trunk[l].w.data);
        fn(tag + ".b", p.trunk[l].b);
    }
    fn("policy.w", p.policy_head.w.data);
    fn("policy.b", p.policy_head.b);
    fn("value.w", p.value_head.w.data);
    fn("value.b", p.value_head.b);
}

/// Glorot-uniform weights, zero biases; deterministic given seed.
NetworkParams init_network(std::uint64_t seed, const NetConfig& cfg);

/// Same shapes as `like`, all entries zero.
NetworkParams zeros_like(const NetworkParams& like);

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
    Matrix x;                     // batch x obs_dim
    std::vector<Matrix> acts;     // post-ELU activations per trunk layer
    Matrix policy_raw;            // batch x 2*n_a
    Matrix alpha;                 // batch x n_a
    Matrix beta;                  // batch x n_a
    std::vector<double> value;    // batch
    int batch = 0;
};

/// Trunk + heads on a row-major batch of observations (batch x obs_dim).
void forward(const NetworkParams& p, const double* obs, int batch,
             ForwardCache& cache);

struct ForwardOutput {
    BetaPolicyParams policy;
    double value = 0.0;
};

/// Single-observation forward pass. Throws std::invalid_argument on a
/// dimension mismatch.
ForwardOutput forward_one(const NetworkParams& p, const Observation& obs);

std::vector<ForwardOutput> forward_batch(const NetworkParams& p,
                                         const std::vector<Observation>& obs);

/// Per-row gradients of the scalar loss with respect to the head outputs.
struct HeadGrads {
    Matrix d_alpha;               // batch x n_a
    Matrix d_beta;                // batch x n_a
    std::vector<double> d_value;  // batch
};

/// Exact reverse-mode gradients of the loss through heads and trunk.
NetworkParams backward(const NetworkParams& p, const ForwardCache& cache,
                       const HeadGrads& head);

/// RMSProp with per-parameter squared-gradient accumulators.
struct RmsPropState {
    double lr = 1e-4;
    double rho = 0.9;
    double eps = 1e-8;
    NetworkParams v;  // accumulators, shaped like the parameters
};

RmsPropState make_rmsprop(const NetworkParams& params, double lr,
                          double rho = 0.9, double eps = 1e-8);

/// One optimizer step. Throws NumericError (before touching any parameter)
/// if a gradient entry is non-finite.
void rmsprop_step(NetworkParams& params, const NetworkParams& grads,
                  RmsPropState& state);

/// Binary checkpoint of named arrays with shapes; versioned header; exact
/// round-trip.
void save_checkpoint(const NetworkParams& params, const std::string& path);
NetworkParams load_checkpoint(const std::string& path);

}  // namespace a0c
