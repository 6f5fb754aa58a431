#include "a0c/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

namespace a0c {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("config: bad numeric value for '" + key + "': " + value);
    }
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        throw ConfigError("config: bad integer value for '" + key + "': " + value);
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + value);
}

}  // namespace

void apply_setting(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "c_puct") cfg.c_puct = parse_double(key, value);
    else if (key == "c_pw") cfg.c_pw = parse_double(key, value);
    else if (key == "kappa") cfg.kappa = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "lambda") cfg.lambda = parse_double(key, value);
    else if (key == "c_e") cfg.c_e = parse_double(key, value);
    else if (key == "n_trace") cfg.n_trace = static_cast<int>(parse_long(key, value));
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "c_b") cfg.c_b = parse_double(key, value);
    else if (key == "horizon") cfg.horizon = static_cast<int>(parse_long(key, value));
    else if (key == "lr") cfg.lr = parse_double(key, value);
    else if (key == "batch") cfg.batch = static_cast<int>(parse_long(key, value));
    else if (key == "buffer_capacity")
        cfg.buffer_capacity = static_cast<int>(parse_long(key, value));
    else if (key == "repetitions")
        cfg.repetitions = static_cast<int>(parse_long(key, value));
    else if (key == "budget_accounted_steps")
        cfg.budget_accounted_steps = parse_long(key, value);
    else if (key == "budget_wall_s") cfg.budget_wall_s = parse_double(key, value);
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "record_wall_time")
        cfg.record_wall_time = parse_bool(key, value);
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

void validate_config(const Config& cfg) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw ConfigError("config: invalid " + key + " (" + why + ")");
    };
    if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) fail("kappa", "must be in (0, 1)");
    if (!(cfg.c_puct > 0.0)) fail("c_puct", "must be positive");
    if (!(cfg.c_pw > 0.0)) fail("c_pw", "must be positive");
    if (!(cfg.tau > 0.0)) fail("tau", "must be positive");
    if (!(cfg.lambda >= 0.0)) fail("lambda", "must be nonnegative");
    if (!(cfg.c_e > 0.0)) fail("c_e", "must be positive");
    if (!(cfg.c_b > 0.0)) fail("c_b", "must be positive");
    if (!(cfg.lr > 0.0)) fail("lr", "must be positive");
    if (cfg.n_trace < 1) fail("n_trace", "must be >= 1");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) fail("gamma", "must be in (0, 1]");
    if (cfg.horizon < 1) fail("horizon", "must be >= 1");
    if (cfg.batch < 1) fail("batch", "must be >= 1");
    if (cfg.buffer_capacity < 1) fail("buffer_capacity", "must be >= 1");
    if (cfg.repetitions < 1) fail("repetitions", "must be >= 1");
    if (cfg.budget_accounted_steps < 0) fail("budget_accounted_steps", "must be >= 0");
    if (!(cfg.budget_wall_s >= 0.0)) fail("budget_wall_s", "must be >= 0");
    if (cfg.budget_accounted_steps == 0 && cfg.budget_wall_s == 0.0) {
        fail("budget_accounted_steps", "step or wall-clock budget required");
    }
}

Config parse_config(const std::string& path, const ConfigOverrides& overrides) {
    Config cfg;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) {
            throw ConfigError("config: cannot open " + path);
        }
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) {
                line = line.substr(0, hash);
            }
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config: malformed line " +
                                  std::to_string(lineno) + " in " + path);
            }
            apply_setting(cfg, trim(stripped.substr(0, eq)),
                          trim(stripped.substr(eq + 1)));
        }
    }
    for (const auto& [key, value] : overrides) {
        apply_setting(cfg, key, value);
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace a0c
