#include "a0c/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "a0c/rng.hpp"

namespace a0c {

namespace {
const double kPi = 3.141592653589793238462643383279502884;
}

double wrap_angle(double theta) {
    double w = std::fmod(theta + kPi, 2.0 * kPi);
    if (w <= 0.0) {
        w += 2.0 * kPi;
    }
    return w - kPi;
}

PendulumEnv::State PendulumEnv::reset(std::uint64_t seed) const {
    RandomStream rng(seed);
    State s;
    s.theta = kPi - 2.0 * kPi * rng.uniform();  // (-pi, pi]
    s.theta_dot = rng.uniform(-1.0, 1.0);
    s.step_count = 0;
    return s;
}

StepResult<PendulumEnv::State> PendulumEnv::step(const State& state,
                                                 const Action& action) const {
    if (action.values.size() != 1) {
        throw std::domain_error("pendulum: expected a 1-d torque action");
    }
    const double u = action.values[0];
    if (!(std::abs(u) <= params_.max_torque)) {
        throw std::domain_error("pendulum: torque outside [-max_torque, max_torque]");
    }
    if (state.step_count >= params_.horizon) {
        throw std::domain_error("pendulum: step on a terminal state");
    }

    const double theta = state.theta;
    const double theta_dot = state.theta_dot;

    // Cost is evaluated at the pre-step state, matching the reference task.
    const double cost = wrap_angle(theta) * wrap_angle(theta) +
                        0.1 * theta_dot * theta_dot + 0.001 * u * u;

    const double accel =
        3.0 * params_.gravity / (2.0 * params_.length) * std::sin(theta) +
        3.0 / (params_.mass * params_.length * params_.length) * u;

    State next;
    next.theta_dot = std::clamp(theta_dot + accel * params_.dt,
                                -params_.max_speed, params_.max_speed);
    next.theta = wrap_angle(theta + next.theta_dot * params_.dt);
    next.step_count = state.step_count + 1;

    StepResult<State> result;
    result.next_state = next;
    result.reward = -cost * params_.reward_scale;
    result.terminal = next.step_count >= params_.horizon;
    return result;
}

Observation PendulumEnv::observe(const State& state) const {
    return Observation{{std::cos(state.theta), std::sin(state.theta),
                        state.theta_dot}};
}

}  // namespace a0c
