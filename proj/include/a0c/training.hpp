#pragma once

#include <cstddef>
#include <vector>

#include "a0c/mcts.hpp"
#include "a0c/network.hpp"
#include "a0c/rng.hpp"
#include "a0c/types.hpp"

namespace a0c {

/// One root-state training record: observation, the search's support
/// actions with raw visit counts, and the off-policy value target.
/// The temperature exponent is applied at loss time, not here.
struct SupportPoint {
    Action action;
    long count = 0;
};

struct ReplayEntry {
    Observation obs;
    std::vector<SupportPoint> support;
    double value_target = 0.0;
};

/// FIFO ring of replay entries; eviction is strictly oldest-first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(ReplayEntry entry);
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }

    /// i = 0 is the oldest entry still stored.
    const ReplayEntry& at(std::size_t i) const;

    const ReplayEntry& sample(RandomStream& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // slot holding the oldest entry once full
    std::vector<ReplayEntry> entries_;
};

/// Builds a replay entry from a search result. Support actions are clamped
/// inward by `margin` so every stored point is strictly inside the box.
ReplayEntry make_entry(const SearchResult& result, const Observation& obs,
                       double c_b, double margin = 1e-6);

/// Epoch schedule: ceil(n_trace / c_e).
int epochs_for(int n_trace, double c_e);

struct TrainSettings {
    double tau = 0.1;
    double lambda = 0.1;
    double c_b = 2.0;
    double c_e = 20.0;
    int n_trace = 10;
    int batch = 32;
};

/// Scalar terms and exact gradients of the composite loss on one minibatch:
/// detached-coefficient policy surrogate, entropy bonus (-lambda * H), and
/// value MSE, each averaged over entries.
struct BatchEval {
    double policy_surrogate = 0.0;
    double entropy = 0.0;
    double value_mse = 0.0;
    double total = 0.0;
    long skipped_support_points = 0;
    NetworkParams grads;
    /// Per entry, per support point: the frozen REINFORCE coefficient
    /// log pi(a_i|s) - tau * log n(s, a_i); NaN marks a skipped
    /// zero-density point.
    std::vector<std::vector<double>> coefficients;
};

BatchEval evaluate_batch(const NetworkParams& net,
                         const std::vector<const ReplayEntry*>& batch,
                         const TrainSettings& settings);

/// Composite loss with the policy coefficients held fixed (the objective
/// whose exact gradient evaluate_batch returns). Finite-difference oracles
/// probe this function.
double frozen_coefficient_loss(const NetworkParams& net,
                               const std::vector<const ReplayEntry*>& batch,
                               const std::vector<std::vector<double>>& coefficients,
                               const TrainSettings& settings);

struct LossStats {
    double policy_surrogate = 0.0;
    double entropy = 0.0;
    double value_mse = 0.0;
    long skipped_support_points = 0;
    long optimizer_steps = 0;
};

/// Runs epochs_for(n_trace, c_e) epochs over the buffer: each epoch
/// shuffles the entries and applies one RMSProp step per minibatch.
/// Returns per-term means over the optimizer steps taken.
LossStats train_after_episode(NetworkParams& net, RmsPropState& opt,
                              const ReplayBuffer& buffer,
                              const TrainSettings& settings, RandomStream& rng);

}  // namespace a0c
