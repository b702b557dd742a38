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

// svqc command-line front end. Talks to the library only through svqc.h.

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svqc/svqc.h"

namespace {

int exit_code(svqc_status s) {
    switch (s) {
    case SVQC_OK:
        return 0;
    case SVQC_ERR_CONFIG:
    case SVQC_ERR_INVALID_INPUT:
    case SVQC_ERR_USAGE:
        return 2;
    case SVQC_ERR_BRIDGE:
        return 3;
    default:
        return 1;
    }
}

int report_failure(svqc_status s) {
    std::fprintf(stderr, "error: %s\n", svqc_last_error());
    return exit_code(s);
}

struct Progress {
    std::size_t every = 50;
    std::mutex mu;
};

void on_episode(void *user, uint64_t seed, size_t episode, double reward, double avg20, int steps, double wall_ms) {
    auto *p = static_cast<Progress *>(user);
    if (p->every == 0 || episode % p->every != 0) {
        return;
    }
    std::lock_guard lock(p->mu);
    std::fprintf(stderr, "seed %llu episode %zu reward %.1f avg20 %.2f steps %d (%.0f ms)\n",
                 static_cast<unsigned long long>(seed), episode, reward, avg20, steps, wall_ms);
}

// Loads --config or --preset (exactly one).
svqc_status open_config(const std::string &path, const std::string &preset, svqc_config **out) {
    if (!path.empty()) {
        return svqc_config_load(path.c_str(), out);
    }
    return svqc_config_preset(preset.c_str(), out);
}

struct ConfigHandle {
    svqc_config *p = nullptr;
    ~ConfigHandle() { svqc_config_free(p); }
};

svqc_status apply_overrides(svqc_config *cfg, const std::vector<uint64_t> &seeds, int episodes,
                            const std::string &bridge) {
    svqc_status s = SVQC_OK;
    if (!seeds.empty() && (s = svqc_config_set_seeds(cfg, seeds.data(), seeds.size())) != SVQC_OK) return s;
    if (episodes > 0 && (s = svqc_config_set_max_episodes(cfg, episodes)) != SVQC_OK) return s;
    if (!bridge.empty() && (s = svqc_config_set_bridge(cfg, bridge.c_str())) != SVQC_OK) return s;
    return s;
}

void print_config_banner(const svqc_config *cfg, const std::string &out) {
    char fp[17] = {0};
    size_t actor = 0, critic = 0;
    svqc_config_fingerprint(cfg, fp);
    svqc_config_param_counts(cfg, &actor, &critic);
    std::fprintf(stderr, "config %s: actor %zu parameters, critic %zu; writing to %s\n", fp, actor, critic,
                 out.c_str());
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Single-qubit variational circuit agents for classic control"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(svqc_version()));

    Progress progress;

    // train
    auto *train = app.add_subcommand("train", "Train one run per seed");
    std::string config_path, preset_name, out_dir, bridge, resume;
    std::vector<uint64_t> seeds;
    int episodes = 0;
    unsigned workers = 0;
    auto *cfg_opt = train->add_option("--config", config_path, "Experiment config file (JSON)")->check(CLI::ExistingFile);
    auto *preset_opt = train->add_option("--preset", preset_name, "Built-in preset name");
    auto *resume_opt = train->add_option("--resume", resume, "Continue from a checkpoint")->check(CLI::ExistingFile);
    cfg_opt->excludes(preset_opt)->excludes(resume_opt);
    preset_opt->excludes(resume_opt);
    train->add_option("--seeds", seeds, "Comma-separated seeds")->delimiter(',');
    train->add_option("--out", out_dir, "Output directory")->required();
    train->add_option("--episodes", episodes, "Override the episode budget")->check(CLI::PositiveNumber);
    train->add_option("--bridge", bridge, "Bridge command for bridge:<id> environments");
    train->add_option("--workers", workers, "Worker threads (0: one per seed)");
    train->add_option("--progress", progress.every, "Print every N episodes (0: quiet)");

    // eval
    auto *eval = app.add_subcommand("eval", "Evaluate a checkpoint");
    std::string checkpoint, shots = "exact";
    std::size_t eval_episodes = 20;
    double readout_p = 0.0, gate_p = 0.0;
    bool sample = false;
    uint64_t eval_seed = 12345;
    std::string eval_bridge;
    eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    eval->add_option("--episodes", eval_episodes, "Episodes")->check(CLI::PositiveNumber);
    eval->add_option("--shots", shots, "Shots per expectation, or 'exact'");
    eval->add_option("--readout-p", readout_p, "Readout bit-flip probability")->check(CLI::Range(0.0, 1.0));
    eval->add_option("--gate-p", gate_p, "Depolarizing probability per gate")->check(CLI::Range(0.0, 1.0));
    eval->add_flag("--sample", sample, "Sample actions instead of taking the argmax");
    eval->add_option("--seed", eval_seed, "Episode and noise seed");
    eval->add_option("--bridge", eval_bridge, "Bridge command for bridge:<id> environments");

    // xcheck
    auto *xcheck = app.add_subcommand("xcheck", "Compare native environments with a reference");
    std::string env_id, xbridge, trace;
    std::size_t steps = 1000;
    uint64_t xseed = 0;
    double tolerance = 1e-6;
    xcheck->add_option("--env", env_id, "Environment id (cartpole-v1, acrobot-v1)");
    auto *xb = xcheck->add_option("--bridge", xbridge, "Reference bridge command");
    auto *xt = xcheck->add_option("--trace", trace, "Recorded reference trace (JSON lines)")->check(CLI::ExistingFile);
    xb->excludes(xt);
    xcheck->add_option("--steps", steps, "Steps to compare");
    xcheck->add_option("--seed", xseed, "Seed for states and actions");
    xcheck->add_option("--tolerance", tolerance, "Largest allowed deviation");

    // report
    auto *rep = app.add_subcommand("report", "Summarize training runs");
    std::string in_dir;
    rep->add_option("--in", in_dir, "Run directory, or a directory of runs")->required()->check(CLI::ExistingDirectory);

    // sweep-reuse
    auto *sweep = app.add_subcommand("sweep-reuse", "Train once per output reuse factor");
    std::vector<std::size_t> ells;
    std::string sweep_config, sweep_preset = "cartpole-table3", sweep_out = "sweep-reuse", sweep_bridge;
    std::vector<uint64_t> sweep_seeds;
    int sweep_episodes = 0;
    sweep->add_option("--l", ells, "Comma-separated reuse factors")->delimiter(',')->required();
    auto *sc = sweep->add_option("--config", sweep_config, "Experiment config file")->check(CLI::ExistingFile);
    sweep->add_option("--preset", sweep_preset, "Built-in preset (default cartpole-table3)")->excludes(sc);
    sweep->add_option("--seeds", sweep_seeds, "Comma-separated seeds")->delimiter(',');
    sweep->add_option("--episodes", sweep_episodes, "Override the episode budget")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep->add_option("--bridge", sweep_bridge, "Bridge command");
    sweep->add_option("--progress", progress.every, "Print every N episodes (0: quiet)");

    // presets
    auto *presets = app.add_subcommand("presets", "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*presets) {
        for (size_t i = 0; i < svqc_preset_count(); ++i) {
            std::printf("%s\n", svqc_preset_name(i));
        }
        return 0;
    }

    if (*train) {
        if (!resume.empty()) {
            if (!seeds.empty()) {
                std::fprintf(stderr, "error: --seeds cannot be combined with --resume\n");
                return 2;
            }
            const auto s = svqc_train_resume(resume.c_str(), episodes, out_dir.c_str(),
                                             bridge.empty() ? nullptr : bridge.c_str(), on_episode, &progress);
            if (s != SVQC_OK) return report_failure(s);
            std::printf("resumed run written to %s\n", out_dir.c_str());
            return 0;
        }
        if (config_path.empty() && preset_name.empty()) {
            std::fprintf(stderr, "error: train needs --config, --preset or --resume\n");
            return 2;
        }
        ConfigHandle cfg;
        svqc_status s = open_config(config_path, preset_name, &cfg.p);
        if (s == SVQC_OK) s = apply_overrides(cfg.p, seeds, episodes, bridge);
        if (s != SVQC_OK) return report_failure(s);
        print_config_banner(cfg.p, out_dir);
        s = svqc_train(cfg.p, out_dir.c_str(), nullptr, workers, on_episode, &progress);
        if (s != SVQC_OK) return report_failure(s);
        char *text = nullptr;
        if ((s = svqc_report(out_dir.c_str(), &text)) != SVQC_OK) return report_failure(s);
        std::fputs(text, stdout);
        svqc_string_free(text);
        return 0;
    }

    if (*eval) {
        svqc_eval_options o;
        svqc_eval_options_init(&o);
        o.episodes = eval_episodes;
        if (shots != "exact") {
            char *end = nullptr;
            const unsigned long long n = std::strtoull(shots.c_str(), &end, 10);
            if (shots.empty() || *end != '\0' || n == 0) {
                std::fprintf(stderr, "error: --shots must be a positive integer or 'exact'\n");
                return 2;
            }
            o.shots = n;
        }
        o.readout_p = readout_p;
        o.gate_p = gate_p;
        o.sample = sample ? 1 : 0;
        o.seed = eval_seed;
        o.bridge_command = eval_bridge.empty() ? nullptr : eval_bridge.c_str();
        svqc_eval_result *r = nullptr;
        const auto s = svqc_eval(checkpoint.c_str(), &o, &r);
        if (s != SVQC_OK) return report_failure(s);
        const double *rewards = svqc_eval_result_rewards(r);
        for (size_t i = 0; i < svqc_eval_result_count(r); ++i) {
            std::printf("episode %zu reward %.1f\n", i + 1, rewards[i]);
        }
        double mean, sd, mean5, sd5;
        svqc_eval_result_stats(r, &mean, &sd, &mean5, &sd5);
        std::printf("first 5: mean %.2f stddev %.2f\n", mean5, sd5);
        std::printf("all %zu: mean %.2f stddev %.2f\n", svqc_eval_result_count(r), mean, sd);
        svqc_eval_result_free(r);
        return 0;
    }

    if (*xcheck) {
        svqc_xcheck_report *r = nullptr;
        svqc_status s;
        if (!trace.empty()) {
            s = svqc_xcheck_trace(trace.c_str(), steps, &r);
        } else if (!xbridge.empty()) {
            if (env_id.empty()) {
                std::fprintf(stderr, "error: --env is required with --bridge\n");
                return 2;
            }
            s = svqc_xcheck_bridge(env_id.c_str(), steps, xbridge.c_str(), xseed, &r);
        } else {
            std::fprintf(stderr, "error: xcheck needs --bridge or --trace\n");
            return 2;
        }
        if (s != SVQC_OK) return report_failure(s);
        std::printf("%s\n", svqc_xcheck_summary(r));
        const bool ok = svqc_xcheck_passed(r, tolerance) != 0;
        std::printf("%s\n", ok ? "PASS" : "FAIL");
        svqc_xcheck_report_free(r);
        return ok ? 0 : 1;
    }

    if (*rep) {
        char *text = nullptr;
        const auto s = svqc_report(in_dir.c_str(), &text);
        if (s != SVQC_OK) return report_failure(s);
        std::fputs(text, stdout);
        svqc_string_free(text);
        return 0;
    }

    if (*sweep) {
        ConfigHandle cfg;
        svqc_status s = open_config(sweep_config, sweep_preset, &cfg.p);
        if (s == SVQC_OK) s = apply_overrides(cfg.p, sweep_seeds, sweep_episodes, sweep_bridge);
        if (s != SVQC_OK) return report_failure(s);
        s = svqc_sweep_reuse(cfg.p, ells.data(), ells.size(), sweep_out.c_str(), nullptr, on_episode, &progress);
        if (s != SVQC_OK) return report_failure(s);
        char *text = nullptr;
        if ((s = svqc_report(sweep_out.c_str(), &text)) != SVQC_OK) return report_failure(s);
        std::fputs(text, stdout);
        svqc_string_free(text);
        return 0;
    }
    return 0;
}
