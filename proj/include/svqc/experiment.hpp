// Copyright 2026 The svqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVQC_EXPERIMENT_HPP
#define SVQC_EXPERIMENT_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svqc/checkpoint.hpp"
#include "svqc/config.hpp"
#include "svqc/env.hpp"
#include "svqc/ppo.hpp"

namespace svqc {

inline constexpr const char *kCurveHeader = "episode,reward,avg20,steps,wall_ms";

/// Append-only learning-curve CSV; each row is flushed as it is written.
class CurveWriter {
  public:
    /// Truncates `path` and writes the header, or, with `append`, keeps
    /// existing rows (the file must already start with the header).
    explicit CurveWriter(const std::string &path, bool append = false);
    void write(const EpisodeResult &row);

  private:
    std::ofstream out_;
};

struct CurveRow {
    std::size_t episode = 0;
    double reward = 0.0;
    double avg20 = 0.0;
    int steps = 0;
    double wall_ms = 0.0;
};

/// ConfigError on a malformed file. A trailing partial line (from a run
/// that was killed mid-write) is ignored.
std::vector<CurveRow> read_curve(const std::string &path);

/// Native environment, or a bridge-backed one for bridge:<id> (using the
/// config's bridge command unless `bridge_command` is given).
std::unique_ptr<Environment> make_environment(const ExperimentConfig &config, const std::string &bridge_command = {});

struct RunOptions {
    std::string bridge_command;
    /// Resume from this checkpoint instead of starting fresh.
    std::optional<Checkpoint> resume;
    /// Called after every episode; may be invoked from worker threads.
    std::function<void(std::uint64_t seed, const EpisodeResult &)> on_episode;
};

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<double> rewards;
    std::optional<std::size_t> episodes_to_threshold;
    std::string curve_path;
    std::string best_checkpoint;
    std::string final_checkpoint;
};

/// Trains one seed into `out_dir`, writing curve_seed<s>.csv,
/// best_seed<s>.ckpt (highest trailing-20 mean so far) and final_seed<s>.ckpt.
SeedRun train_seed(const ExperimentConfig &config, std::uint64_t seed, const std::string &out_dir,
                   const RunOptions &options = {});

/// Writes run.json (config, fingerprint, parameter counts) and trains every
/// seed in config.seeds, one worker thread per seed up to `max_workers`
/// (0: hardware concurrency).
std::vector<SeedRun> run_experiment(const ExperimentConfig &config, const std::string &out_dir,
                                    const RunOptions &options = {}, unsigned max_workers = 0);

struct EvalOptions {
    std::size_t episodes = 20;
    NoiseModel noise;
    bool sample = false; // sample from the policy instead of taking the argmax
    std::uint64_t seed = 12345;
    std::string bridge_command;
};

struct RewardStats {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0; // population
};

RewardStats reward_stats(std::span<const double> rewards);

struct EvalResult {
    std::vector<double> rewards;
    RewardStats first5;
    RewardStats all;
};

EvalResult evaluate(const Network &actor, Environment &env, const EvalOptions &options);
EvalResult evaluate_checkpoint(const Checkpoint &ckpt, const EvalOptions &options);

/// One run directory as seen by the report.
struct RunSummary {
    std::string name;
    std::string env;
    std::string model_kind;
    std::string fingerprint;
    std::size_t actor_params = 0;
    std::size_t critic_params = 0;
    std::size_t max_episodes = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::optional<std::size_t>> episodes_to_threshold;
    std::optional<double> median_episodes; // nullopt when fewer than half the seeds reached it
    std::size_t reached = 0;
    std::vector<double> mean_avg20; // per episode, across seeds that have it
    std::vector<double> std_avg20;
};

/// Reads run.json and the curves in `dir`.
RunSummary summarize_run(const std::string &dir);

struct Speedup {
    std::string env;
    std::string svqc_run;
    std::string fcn_run;
    std::optional<double> ratio; // fcn / svqc medians
    bool lower_bound = false;    // fcn never reached: ratio uses its episode budget
};

struct Report {
    std::vector<RunSummary> runs;
    std::vector<Speedup> speedups;
    std::string text() const;
};

/// Summarizes `dir` (a run directory or a directory of run directories)
/// and writes mean_<run>.csv series next to each run.
Report report(const std::string &dir);

/// Trains `config` once per reuse factor into out_dir/l<ell>/.
std::vector<std::vector<SeedRun>> sweep_reuse(const ExperimentConfig &config, const std::vector<std::size_t> &reuse,
                                              const std::string &out_dir, const RunOptions &options = {});

} // namespace svqc

#endif
