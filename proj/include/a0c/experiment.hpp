#pragma once

#include <string>
#include <vector>

#include "a0c/config.hpp"
#include "a0c/network.hpp"

namespace a0c {

/// One completed episode of one repetition. Step columns are per episode;
/// accounted steps are real steps times n_trace.
struct RunRecord {
    int repetition = 0;
    int episode = 0;
    long real_steps = 0;
    long accounted_steps = 0;
    double episode_return = 0.0;
    double policy_loss = 0.0;
    double entropy = 0.0;
    double value_loss = 0.0;
    double wall_s = 0.0;
};

struct RepetitionResult {
    int repetition = 0;
    std::vector<RunRecord> records;
    NetworkParams final_net;
    bool aborted = false;
    std::string diagnostic;
};

struct ExperimentResult {
    std::vector<RepetitionResult> repetitions;
};

/// One seeded training repetition: per timestep run the search, sample the
/// played action from normalized root counts, store a replay entry and
/// advance the kept subtree; train after every completed episode.
RepetitionResult run_repetition(const Config& cfg, int repetition);

/// All repetitions; independent seeds derived from cfg.seed. Repetitions
/// run in parallel, capped by the A0C_THREADS environment variable. A
/// numeric failure aborts only its own repetition and is recorded in the
/// diagnostic.
ExperimentResult run_experiment(const Config& cfg);

std::vector<RunRecord> flatten(const ExperimentResult& result);

/// Header: rep,episode,real_steps,accounted_steps,return,policy_loss,
/// entropy,value_loss,wall_s. Numbers are full-precision decimal.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
std::string csv_string(const std::vector<RunRecord>& records);

/// Parses a CSV produced by emit_csv; rejects unexpected columns.
std::vector<RunRecord> read_csv(const std::string& path);

/// Trailing mean over the last `window` values at each position.
std::vector<double> trailing_mean(const std::vector<double>& xs, int window);

/// Mean of the smoothed episode returns over the first or final quarter of
/// one repetition's records (window-10 trailing smoothing).
double first_quartile_mean(const std::vector<RunRecord>& rep_records);
double final_quartile_mean(const std::vector<RunRecord>& rep_records);

}  // namespace a0c
