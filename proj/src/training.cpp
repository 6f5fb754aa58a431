#include "a0c/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "a0c/beta_policy.hpp"
#include "a0c/errors.hpp"

namespace a0c {

namespace {
const double kNegInf = -std::numeric_limits<double>::infinity();
const double kNan = std::numeric_limits<double>::quiet_NaN();
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    }
    entries_.reserve(capacity);
}

void ReplayBuffer::push(ReplayEntry entry) {
    if (entries_.size() < capacity_) {
        entries_.push_back(std::move(entry));
        return;
    }
    entries_[head_] = std::move(entry);
    head_ = (head_ + 1) % capacity_;
}

const ReplayEntry& ReplayBuffer::at(std::size_t i) const {
    if (i >= entries_.size()) {
        throw std::out_of_range("ReplayBuffer::at");
    }
    if (entries_.size() < capacity_) {
        return entries_[i];
    }
    return entries_[(head_ + i) % capacity_];
}

const ReplayEntry& ReplayBuffer::sample(RandomStream& rng) const {
    if (entries_.empty()) {
        throw std::logic_error("ReplayBuffer::sample on empty buffer");
    }
    return at(rng.uniform_index(entries_.size()));
}

ReplayEntry make_entry(const SearchResult& result, const Observation& obs,
                       double c_b, double margin) {
    if (result.root_actions.empty()) {
        throw std::invalid_argument("make_entry: empty search result");
    }
    ReplayEntry entry;
    entry.obs = obs;
    entry.value_target = *std::max_element(result.root_q.begin(), result.root_q.end());
    entry.support.reserve(result.root_actions.size());
    const double lim = c_b - margin;
    for (std::size_t i = 0; i < result.root_actions.size(); ++i) {
        SupportPoint p;
        p.action = result.root_actions[i];
        for (double& v : p.action.values) {
            if (v > lim) v = lim;
            if (v < -lim) v = -lim;
        }
        p.count = result.root_counts[i];
        entry.support.push_back(std::move(p));
    }
    return entry;
}

int epochs_for(int n_trace, double c_e) {
    if (n_trace < 1 || !(c_e > 0.0)) {
        throw std::invalid_argument("epochs_for: arguments must be positive");
    }
    return static_cast<int>(std::ceil(static_cast<double>(n_trace) / c_e));
}

BatchEval evaluate_batch(const NetworkParams& net,
                         const std::vector<const ReplayEntry*>& batch,
                         const TrainSettings& settings) {
    if (batch.empty()) {
        throw std::invalid_argument("evaluate_batch: empty minibatch");
    }
    const int b_size = static_cast<int>(batch.size());
    const int n_a = net.cfg.n_a;
    const double inv_b = 1.0 / static_cast<double>(b_size);

    std::vector<double> obs_rows(static_cast<std::size_t>(b_size) * net.cfg.obs_dim);
    for (int b = 0; b < b_size; ++b) {
        const auto& o = batch[b]->obs.values;
        if (static_cast<int>(o.size()) != net.cfg.obs_dim) {
            throw std::invalid_argument("evaluate_batch: observation dim mismatch");
        }
        std::copy(o.begin(), o.end(),
                  obs_rows.begin() + static_cast<std::size_t>(b) * net.cfg.obs_dim);
    }

    ForwardCache cache;
    forward(net, obs_rows.data(), b_size, cache);

    HeadGrads head;
    head.d_alpha = Matrix(b_size, n_a);
    head.d_beta = Matrix(b_size, n_a);
    head.d_value.assign(b_size, 0.0);

    BatchEval eval;
    eval.coefficients.resize(b_size);

    for (int b = 0; b < b_size; ++b) {
        const ReplayEntry& entry = *batch[b];
        BetaPolicyParams params;
        params.alpha.assign(cache.alpha.row(b), cache.alpha.row(b) + n_a);
        params.beta.assign(cache.beta.row(b), cache.beta.row(b) + n_a);

        // Policy surrogate: mean over support points of coef * log pi,
        // with coef = detach(log pi - tau * log n).
        auto& coefs = eval.coefficients[b];
        coefs.assign(entry.support.size(), kNan);
        double entry_surrogate = 0.0;
        std::vector<double> da(n_a, 0.0), db(n_a, 0.0);
        int valid = 0;
        for (std::size_t j = 0; j < entry.support.size(); ++j) {
            const SupportPoint& point = entry.support[j];
            const double logpi = log_density(params, point.action, settings.c_b);
            if (logpi == kNegInf) {
                ++eval.skipped_support_points;
                continue;
            }
            const double coef =
                logpi - settings.tau * std::log(static_cast<double>(point.count));
            coefs[j] = coef;
            entry_surrogate += coef * logpi;
            const std::vector<double> u =
                beta_inverse_transform(point.action, settings.c_b);
            for (int i = 0; i < n_a; ++i) {
                const LogPdfGrad g =
                    beta_log_pdf_grad(u[i], params.alpha[i], params.beta[i]);
                da[i] += coef * g.d_alpha;
                db[i] += coef * g.d_beta;
            }
            ++valid;
        }
        if (valid > 0) {
            const double inv_valid = 1.0 / static_cast<double>(valid);
            entry_surrogate *= inv_valid;
            for (int i = 0; i < n_a; ++i) {
                head.d_alpha(b, i) += da[i] * inv_valid;
                head.d_beta(b, i) += db[i] * inv_valid;
            }
        }
        eval.policy_surrogate += entry_surrogate;

        // Entropy bonus enters the loss as -lambda * H.
        eval.entropy += entropy(params);
        const EntropyGrad hg = entropy_grad(params);
        for (int i = 0; i < n_a; ++i) {
            head.d_alpha(b, i) -= settings.lambda * hg.d_alpha[i];
            head.d_beta(b, i) -= settings.lambda * hg.d_beta[i];
        }

        // Value MSE.
        const double diff = cache.value[b] - entry.value_target;
        eval.value_mse += diff * diff;
        head.d_value[b] = 2.0 * diff;
    }

    eval.policy_surrogate *= inv_b;
    eval.entropy *= inv_b;
    eval.value_mse *= inv_b;
    eval.total =
        eval.policy_surrogate - settings.lambda * eval.entropy + eval.value_mse;
    if (!std::isfinite(eval.total)) {
        const char* term = !std::isfinite(eval.policy_surrogate) ? "policy surrogate"
                           : !std::isfinite(eval.entropy)        ? "entropy"
                                                                 : "value mse";
        throw NumericError(std::string("non-finite loss term: ") + term);
    }

    for (auto& v : head.d_alpha.data) v *= inv_b;
    for (auto& v : head.d_beta.data) v *= inv_b;
    for (auto& v : head.d_value) v *= inv_b;

    eval.grads = backward(net, cache, head);
    return eval;
}

double frozen_coefficient_loss(const NetworkParams& net,
                               const std::vector<const ReplayEntry*>& batch,
                               const std::vector<std::vector<double>>& coefficients,
                               const TrainSettings& settings) {
    const int b_size = static_cast<int>(batch.size());

    double policy_term = 0.0;
    double entropy_term = 0.0;
    double value_term = 0.0;
    for (int b = 0; b < b_size; ++b) {
        const ReplayEntry& entry = *batch[b];
        const ForwardOutput out = forward_one(net, entry.obs);

        double entry_surrogate = 0.0;
        int valid = 0;
        for (std::size_t j = 0; j < entry.support.size(); ++j) {
            const double coef = coefficients[b][j];
            if (std::isnan(coef)) {
                continue;
            }
            const double logpi =
                log_density(out.policy, entry.support[j].action, settings.c_b);
            entry_surrogate += coef * logpi;
            ++valid;
        }
        if (valid > 0) {
            entry_surrogate /= static_cast<double>(valid);
        }
        policy_term += entry_surrogate;
        entropy_term += entropy(out.policy);
        const double diff = out.value - entry.value_target;
        value_term += diff * diff;
    }
    const double inv_b = 1.0 / static_cast<double>(b_size);
    return inv_b * (policy_term - settings.lambda * entropy_term + value_term);
}

LossStats train_after_episode(NetworkParams& net, RmsPropState& opt,
                              const ReplayBuffer& buffer,
                              const TrainSettings& settings, RandomStream& rng) {
    if (buffer.size() == 0) {
        throw std::invalid_argument("train_after_episode: empty buffer");
    }
    const int epochs = epochs_for(settings.n_trace, settings.c_e);
    LossStats stats;
    std::vector<std::size_t> order(buffer.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int e = 0; e < epochs; ++e) {
        shuffle(order, rng);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(settings.batch)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(settings.batch));
            std::vector<const ReplayEntry*> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(&buffer.at(order[i]));
            }
            BatchEval eval = evaluate_batch(net, batch, settings);
            rmsprop_step(net, eval.grads, opt);
            stats.policy_surrogate += eval.policy_surrogate;
            stats.entropy += eval.entropy;
            stats.value_mse += eval.value_mse;
            stats.skipped_support_points += eval.skipped_support_points;
            stats.optimizer_steps += 1;
        }
    }
    if (stats.optimizer_steps > 0) {
        const double inv = 1.0 / static_cast<double>(stats.optimizer_steps);
        stats.policy_surrogate *= inv;
        stats.entropy *= inv;
        stats.value_mse *= inv;
    }
    return stats;
}

}  // namespace a0c
