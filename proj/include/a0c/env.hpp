#pragma once

#include <concepts>
#include <cstdint>

#include "a0c/types.hpp"

namespace a0c {

template <typename State>
struct StepResult {
    State next_state;
    double reward = 0.0;
    bool terminal = false;
};

/// Deterministic snapshot-based MDP contract used by the tree search:
/// transitions are pure functions of (state, action), so the search can
/// re-simulate from any interior node it has a state copy for.
template <typename E>
concept Environment = requires(const E env, const typename E::State& s,
                               const Action& a) {
    { env.step(s, a) } -> std::same_as<StepResult<typename E::State>>;
    { env.observe(s) } -> std::same_as<Observation>;
};

/// Pendulum swing-up. Angle 0 is upright; reward is the negated quadratic
/// cost, rescaled by 1/1000. Episodes end only at the horizon.
class PendulumEnv {
public:
    struct State {
        double theta = 0.0;      // wrapped to (-pi, pi]
        double theta_dot = 0.0;  // clamped to [-8, 8]
        int step_count = 0;

        bool operator==(const State&) const = default;
    };

    struct Params {
        double dt = 0.05;
        double gravity = 10.0;
        double mass = 1.0;
        double length = 1.0;
        double max_speed = 8.0;
        double max_torque = 2.0;
        double reward_scale = 1e-3;
        int horizon = 300;
    };

    PendulumEnv() = default;
    explicit PendulumEnv(const Params& params) : params_(params) {}

    const Params& params() const { return params_; }

    /// Initial state with theta uniform in (-pi, pi] and theta_dot uniform
    /// in [-1, 1]; deterministic given seed.
    State reset(std::uint64_t seed) const;

    /// Semi-implicit Euler step; velocity is clamped before the angle
    /// update. Throws std::domain_error on an out-of-bounds action.
    StepResult<State> step(const State& state, const Action& action) const;

    Observation observe(const State& state) const;

private:
    Params params_;
};

static_assert(Environment<PendulumEnv>);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace a0c
