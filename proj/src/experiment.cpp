#include "a0c/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "a0c/env.hpp"
#include "a0c/errors.hpp"
#include "a0c/mcts.hpp"
#include "a0c/training.hpp"

namespace a0c {

namespace {

constexpr const char* kCsvHeader =
    "rep,episode,real_steps,accounted_steps,return,policy_loss,entropy,"
    "value_loss,wall_s";

SearchConfig search_config(const Config& cfg) {
    SearchConfig sc;
    sc.c_puct = cfg.c_puct;
    sc.c_pw = cfg.c_pw;
    sc.kappa = cfg.kappa;
    sc.gamma = cfg.gamma;
    sc.c_b = cfg.c_b;
    return sc;
}

TrainSettings train_settings(const Config& cfg) {
    TrainSettings ts;
    ts.tau = cfg.tau;
    ts.lambda = cfg.lambda;
    ts.c_b = cfg.c_b;
    ts.c_e = cfg.c_e;
    ts.n_trace = cfg.n_trace;
    ts.batch = cfg.batch;
    return ts;
}

int parallel_width(int repetitions) {
#ifdef _OPENMP
    int width = omp_get_max_threads();
    if (const char* env = std::getenv("A0C_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) {
            width = static_cast<int>(cap);
        }
    }
    return std::min(width, repetitions);
#else
    (void)repetitions;
    return 1;
#endif
}

}  // namespace

RepetitionResult run_repetition(const Config& cfg, int repetition) {
    RepetitionResult result;
    result.repetition = repetition;

    const std::uint64_t rep_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(repetition));
    RandomStream rng(rep_seed);

    PendulumEnv::Params env_params;
    env_params.horizon = cfg.horizon;
    env_params.max_torque = cfg.c_b;
    const PendulumEnv env(env_params);

    NetworkParams net = init_network(mix_seed(rep_seed, 0x6e657431), NetConfig{});
    RmsPropState opt = make_rmsprop(net, cfg.lr);
    ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));

    const Evaluator evaluate = [&net](const Observation& obs) {
        const ForwardOutput out = forward_one(net, obs);
        return EvalResult{out.policy, out.value};
    };
    const Search<PendulumEnv> search(env, evaluate, search_config(cfg));
    const TrainSettings settings = train_settings(cfg);

    const auto rep_start = std::chrono::steady_clock::now();
    long accounted_total = 0;
    int episode = 0;
    try {
        for (;;) {
            if (cfg.budget_accounted_steps > 0 &&
                accounted_total >= cfg.budget_accounted_steps) {
                break;
            }
            if (cfg.budget_wall_s > 0.0) {
                const std::chrono::duration<double> elapsed =
                    std::chrono::steady_clock::now() - rep_start;
                if (elapsed.count() >= cfg.budget_wall_s) {
                    break;
                }
            }

            const auto ep_start = std::chrono::steady_clock::now();
            SearchTree<PendulumEnv> tree;
            tree.root = search.make_root(env.reset(rng.next_u64()));

            double ep_return = 0.0;
            long real_steps = 0;
            while (!tree.root->terminal) {
                const SearchResult sr = search.run(*tree.root, cfg.n_trace, rng);
                buffer.push(make_entry(sr, tree.root->obs, cfg.c_b));
                const std::size_t pick = sample_root_index(sr, rng);
                ep_return += tree.root->edges[pick].reward;
                advance_root(tree, pick);
                ++real_steps;
            }
            const LossStats losses =
                train_after_episode(net, opt, buffer, settings, rng);

            RunRecord rec;
            rec.repetition = repetition;
            rec.episode = episode;
            rec.real_steps = real_steps;
            rec.accounted_steps = real_steps * cfg.n_trace;
            rec.episode_return = ep_return;
            rec.policy_loss = losses.policy_surrogate;
            rec.entropy = losses.entropy;
            rec.value_loss = losses.value_mse;
            if (cfg.record_wall_time) {
                const std::chrono::duration<double> ep_elapsed =
                    std::chrono::steady_clock::now() - ep_start;
                rec.wall_s = ep_elapsed.count();
            }
            result.records.push_back(rec);
            accounted_total += rec.accounted_steps;
            ++episode;
        }
    } catch (const NumericError& err) {
        result.aborted = true;
        result.diagnostic = err.what();
    }
    result.final_net = std::move(net);
    return result;
}

ExperimentResult run_experiment(const Config& cfg) {
    validate_config(cfg);
    ExperimentResult result;
    result.repetitions.resize(static_cast<std::size_t>(cfg.repetitions));

    const int width = parallel_width(cfg.repetitions);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(width) if (width > 1)
#endif
    for (int r = 0; r < cfg.repetitions; ++r) {
        result.repetitions[static_cast<std::size_t>(r)] = run_repetition(cfg, r);
    }
    return result;
}

std::vector<RunRecord> flatten(const ExperimentResult& result) {
    std::vector<RunRecord> records;
    for (const RepetitionResult& rep : result.repetitions) {
        records.insert(records.end(), rep.records.begin(), rep.records.end());
    }
    return records;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

std::string csv_string(const std::vector<RunRecord>& records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const RunRecord& r : records) {
        out += std::to_string(r.repetition);
        out += ',';
        out += std::to_string(r.episode);
        out += ',';
        out += std::to_string(r.real_steps);
        out += ',';
        out += std::to_string(r.accounted_steps);
        out += ',';
        append_double(out, r.episode_return);
        out += ',';
        append_double(out, r.policy_loss);
        out += ',';
        append_double(out, r.entropy);
        out += ',';
        append_double(out, r.value_loss);
        out += ',';
        append_double(out, r.wall_s);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
    if (records.empty()) {
        throw std::invalid_argument("emit_csv: no records");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("emit_csv: cannot open " + path);
    }
    const std::string body = csv_string(records);
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!os) {
        throw std::runtime_error("emit_csv: write failed for " + path);
    }
}

std::vector<RunRecord> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("read_csv: cannot open " + path);
    }
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw std::runtime_error("read_csv: unexpected columns in " + path);
    }
    std::vector<RunRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 9) {
            throw std::runtime_error("read_csv: malformed row in " + path);
        }
        RunRecord r;
        r.repetition = std::stoi(fields[0]);
        r.episode = std::stoi(fields[1]);
        r.real_steps = std::stol(fields[2]);
        r.accounted_steps = std::stol(fields[3]);
        r.episode_return = std::stod(fields[4]);
        r.policy_loss = std::stod(fields[5]);
        r.entropy = std::stod(fields[6]);
        r.value_loss = std::stod(fields[7]);
        r.wall_s = std::stod(fields[8]);
        records.push_back(r);
    }
    return records;
}

std::vector<double> trailing_mean(const std::vector<double>& xs, int window) {
    std::vector<double> out(xs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += xs[i];
        if (i >= static_cast<std::size_t>(window)) {
            acc -= xs[i - static_cast<std::size_t>(window)];
        }
        const std::size_t n = std::min(static_cast<std::size_t>(window), i + 1);
        out[i] = acc / static_cast<double>(n);
    }
    return out;
}

namespace {

double quartile_mean(const std::vector<RunRecord>& rep_records, bool final_part) {
    if (rep_records.empty()) {
        throw std::invalid_argument("quartile_mean: no records");
    }
    std::vector<double> returns;
    returns.reserve(rep_records.size());
    for (const RunRecord& r : rep_records) {
        returns.push_back(r.episode_return);
    }
    const std::vector<double> smoothed = trailing_mean(returns, 10);
    const std::size_t quarter = std::max<std::size_t>(1, smoothed.size() / 4);
    double acc = 0.0;
    if (final_part) {
        for (std::size_t i = smoothed.size() - quarter; i < smoothed.size(); ++i) {
            acc += smoothed[i];
        }
    } else {
        for (std::size_t i = 0; i < quarter; ++i) {
            acc += smoothed[i];
        }
    }
    return acc / static_cast<double>(quarter);
}

}  // namespace

double first_quartile_mean(const std::vector<RunRecord>& rep_records) {
    return quartile_mean(rep_records, false);
}

double final_quartile_mean(const std::vector<RunRecord>& rep_records) {
    return quartile_mean(rep_records, true);
}

}  // namespace a0c
