#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "a0c/env.hpp"

namespace a0c::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Analytic gradients (policy surrogate, entropy, value, full composite)
/// against central finite differences on a 4-unit network, 100 random
/// parameter/data draws, relative tolerance 1e-4.
CheckResult gradient_suite(std::uint64_t seed);

/// Transformed-Beta density: quadrature normalization within 1e-6 (20
/// parameter settings), analytic entropy vs. Monte Carlo within 3 standard
/// errors over 1e6 samples (5 settings), and sampler-vs-CDF
/// Kolmogorov-Smirnov statistic <= 0.01 (3 settings, 1e5 samples).
CheckResult distribution_suite(std::uint64_t seed);

/// Search accuracy on the deterministic one-step quadratic bandit with
/// uniform proposals: count-argmax within 0.15 of the brute-force grid
/// optimum in >= 95/100 seeded runs at 2000 traces, and strictly smaller
/// median error at 2000 traces than at 50.
CheckResult bandit_suite(std::uint64_t seed);

/// Structural tree invariants (widening bound, count conservation, Q*n = W,
/// root count total >= trace budget, value target dominance) over 1e4
/// randomized traces with randomized hyperparameters.
CheckResult invariant_suite(std::uint64_t seed);

/// The four suites above, in order.
std::vector<CheckResult> run_all(std::uint64_t seed);

/// Deterministic one-step benchmark MDP: reward -(a - optimum)^2, episode
/// ends after a single action. Used by the search self-checks.
class QuadraticBanditEnv {
public:
    struct State {
        int step_count = 0;
        bool operator==(const State&) const = default;
    };

    explicit QuadraticBanditEnv(double optimum = 0.5) : optimum_(optimum) {}

    StepResult<State> step(const State& state, const Action& action) const {
        const double d = action.values.at(0) - optimum_;
        return {State{state.step_count + 1}, -d * d, true};
    }

    Observation observe(const State&) const { return Observation{{0.0}}; }

    double optimum() const { return optimum_; }

private:
    double optimum_;
};

static_assert(Environment<QuadraticBanditEnv>);

}  // namespace a0c::selftest
