#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace a0c {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Every hyperparameter of the algorithm and the experiment driver.
/// Defaults reproduce the Pendulum experiment settings.
struct Config {
    double c_puct = 0.05;
    double c_pw = 1.0;
    double kappa = 0.5;
    double tau = 0.1;
    double lambda = 0.1;
    double c_e = 20.0;
    int n_trace = 10;
    double gamma = 1.0;
    double c_b = 2.0;
    int horizon = 300;
    double lr = 1e-4;
    int batch = 32;
    int buffer_capacity = 25000;
    int repetitions = 10;
    /// Stop starting new episodes once a repetition has consumed this many
    /// accounted steps (real steps x n_trace). 0 disables the cap.
    long budget_accounted_steps = 150000;
    /// Wall-clock cap in seconds per repetition; 0 disables it.
    double budget_wall_s = 0.0;
    std::uint64_t seed = 1;
    /// When false (the default) the CSV wall_s column is written as 0 so
    /// identical runs produce byte-identical output.
    bool record_wall_time = false;

    bool operator==(const Config&) const = default;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Throws ConfigError naming the violated key.
void validate_config(const Config& cfg);

/// Applies "key = value" assignments to a config; unknown keys and
/// malformed values raise ConfigError.
void apply_setting(Config& cfg, const std::string& key, const std::string& value);

/// Flat key = value file ('#' starts a comment; blank lines ignored), then
/// override assignments on top, then validation. An empty path yields the
/// defaults.
Config parse_config(const std::string& path, const ConfigOverrides& overrides);

}  // namespace a0c
