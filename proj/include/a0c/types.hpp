#pragma once

#include <vector>

namespace a0c {

/// Environment action: one torque/force value per action dimension.
struct Action {
    std::vector<double> values;

    bool operator==(const Action&) const = default;
};

/// Network input encoding of a state.
struct Observation {
    std::vector<double> values;

    bool operator==(const Observation&) const = default;
};

}  // namespace a0c
