#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "a0c/config.hpp"
#include "a0c/experiment.hpp"
#include "a0c/plot.hpp"
#include "a0c/selftest.hpp"

namespace {

int cmd_train(const std::string& config_path, int n_trace_flag, long seed_flag,
              const std::string& out_dir,
              const std::vector<std::string>& set_flags, bool quiet) {
    a0c::ConfigOverrides overrides;
    for (const std::string& s : set_flags) {
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "--set expects key=value, got '%s'\n", s.c_str());
            return 2;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (n_trace_flag > 0) {
        overrides.emplace_back("n_trace", std::to_string(n_trace_flag));
    }
    if (seed_flag >= 0) {
        overrides.emplace_back("seed", std::to_string(seed_flag));
    }

    a0c::Config cfg;
    try {
        cfg = a0c::parse_config(config_path, overrides);
    } catch (const a0c::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    std::filesystem::create_directories(out_dir);

    const a0c::ExperimentResult result = a0c::run_experiment(cfg);
    for (const a0c::RepetitionResult& rep : result.repetitions) {
        if (rep.aborted) {
            std::fprintf(stderr, "repetition %d aborted: %s\n", rep.repetition,
                         rep.diagnostic.c_str());
            continue;
        }
        if (!quiet && !rep.records.empty()) {
            std::printf("rep %d: %zu episodes, final trailing-10 return %.4f\n",
                        rep.repetition, rep.records.size(),
                        a0c::final_quartile_mean(rep.records));
        }
        const std::string ckpt = out_dir + "/net_rep" +
                                 std::to_string(rep.repetition) + ".bin";
        a0c::save_checkpoint(rep.final_net, ckpt);
    }

    const std::string csv_path = out_dir + "/learning_curves.csv";
    a0c::emit_csv(a0c::flatten(result), csv_path);
    if (!quiet) {
        std::printf("wrote %s\n", csv_path.c_str());
    }

    for (const a0c::RepetitionResult& rep : result.repetitions) {
        if (rep.aborted) return 1;
    }
    return 0;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out) {
    try {
        a0c::emit_plot(inputs, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_selftest(long seed) {
    const auto results =
        a0c::selftest::run_all(static_cast<std::uint64_t>(seed));
    bool all_passed = true;
    for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"A0C: AlphaZero-style search and learning in continuous "
                 "action spaces"};
    app.require_subcommand(1);

    std::string config_path;
    int n_trace_flag = 0;
    long seed_flag = -1;
    std::string out_dir = "out";
    std::vector<std::string> set_flags;
    bool quiet = false;

    CLI::App* train = app.add_subcommand("train", "Run the training experiment");
    train->add_option("--config", config_path, "Flat key=value config file");
    train->add_option("--n-trace", n_trace_flag, "Tree-search trace budget per step");
    train->add_option("--seed", seed_flag, "Base seed");
    train->add_option("--out", out_dir, "Output directory");
    train->add_option("--set", set_flags, "Extra key=value config overrides");
    train->add_flag("--quiet", quiet, "Suppress progress output");

    std::vector<std::string> plot_inputs;
    std::string plot_out = "curves.svg";
    CLI::App* plot = app.add_subcommand("plot", "Render learning curves as SVG");
    plot->add_option("--in", plot_inputs, "Input CSV files")->required();
    plot->add_option("--out", plot_out, "Output SVG path");

    long selftest_seed = 20240527;
    CLI::App* selftest =
        app.add_subcommand("selftest", "Run the oracle/invariant suite");
    selftest->add_option("--seed", selftest_seed, "Suite seed");

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) {
        return cmd_train(config_path, n_trace_flag, seed_flag, out_dir, set_flags,
                         quiet);
    }
    if (plot->parsed()) {
        return cmd_plot(plot_inputs, plot_out);
    }
    return cmd_selftest(selftest_seed);
}
