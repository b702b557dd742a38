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

#include "svqc/svqc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "svqc/checkpoint.hpp"
#include "svqc/config.hpp"
#include "svqc/error.hpp"
#include "svqc/experiment.hpp"
#include "svqc/quantum.hpp"
#include "svqc/xcheck.hpp"

struct svqc_config {
    svqc::ExperimentConfig value;
};

struct svqc_eval_result {
    svqc::EvalResult value;
};

struct svqc_model {
    std::unique_ptr<svqc::Network> actor;
};

struct svqc_circuit {
    svqc::Circuit circuit;
};

struct svqc_xcheck_report {
    svqc::XcheckReport value;
    std::string summary;
};

namespace {

thread_local std::string g_last_error;

svqc_status fail(svqc_status status, const std::string &message) {
    g_last_error = message;
    return status;
}

template <class F> svqc_status guarded(F &&f) {
    try {
        f();
        return SVQC_OK;
    } catch (const svqc::Error &e) {
        return fail(static_cast<svqc_status>(static_cast<int>(e.kind())), e.what());
    } catch (const std::bad_alloc &) {
        return fail(SVQC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(SVQC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SVQC_ERR_INTERNAL, "unknown error");
    }
}

void require(const void *p, const char *what) {
    if (p == nullptr) {
        throw svqc::InvalidInputError(std::string(what) + " must not be NULL");
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string opt_string(const char *s) { return s ? std::string(s) : std::string(); }

svqc::RunOptions run_options(const char *bridge_command, svqc_episode_fn fn, void *user) {
    svqc::RunOptions o;
    o.bridge_command = opt_string(bridge_command);
    if (fn) {
        o.on_episode = [fn, user](std::uint64_t seed, const svqc::EpisodeResult &r) {
            fn(user, seed, r.episode, r.reward, r.avg20, r.steps, r.wall_ms);
        };
    }
    return o;
}

} // namespace

extern "C" {

const char *svqc_last_error(void) { return g_last_error.c_str(); }

const char *svqc_version(void) { return "0.1.0"; }

void svqc_string_free(char *s) { std::free(s); }

size_t svqc_preset_count(void) { return svqc::preset_names().size(); }

const char *svqc_preset_name(size_t i) {
    static const std::vector<std::string> names = svqc::preset_names();
    return i < names.size() ? names[i].c_str() : nullptr;
}

svqc_status svqc_config_preset(const char *name, svqc_config **out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        *out = new svqc_config{svqc::preset(name)};
    });
}

svqc_status svqc_config_parse(const char *text, svqc_config **out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new svqc_config{svqc::config_from_text(text)};
    });
}

svqc_status svqc_config_load(const char *path, svqc_config **out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new svqc_config{svqc::load_config(path)};
    });
}

void svqc_config_free(svqc_config *config) { delete config; }

svqc_status svqc_config_to_text(const svqc_config *config, char **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = dup_string(svqc::config_to_text(config->value));
    });
}

svqc_status svqc_config_fingerprint(const svqc_config *config, char out[17]) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        const auto fp = svqc::fingerprint(config->value);
        std::memcpy(out, fp.c_str(), 17);
    });
}

svqc_status svqc_config_param_counts(const svqc_config *config, size_t *actor, size_t *critic) {
    return guarded([&] {
        require(config, "config");
        svqc::Rng scratch(0);
        const auto models = svqc::build_models(config->value, svqc::EnvSpec::lookup(config->value.env), scratch);
        if (actor) *actor = models.first->parameter_count();
        if (critic) *critic = models.second->parameter_count();
    });
}

svqc_status svqc_config_set_seeds(svqc_config *config, const uint64_t *seeds, size_t n) {
    return guarded([&] {
        require(config, "config");
        if (n == 0) {
            throw svqc::ConfigError("at least one seed is required");
        }
        require(seeds, "seeds");
        config->value.seeds.assign(seeds, seeds + n);
    });
}

svqc_status svqc_config_set_max_episodes(svqc_config *config, int episodes) {
    return guarded([&] {
        require(config, "config");
        auto t = config->value.trainer;
        t.max_episodes = episodes;
        t.validate();
        config->value.trainer = t;
    });
}

svqc_status svqc_config_set_reuse(svqc_config *config, size_t reuse) {
    return guarded([&] {
        require(config, "config");
        if (config->value.model.kind != svqc::ModelKind::Svqc) {
            throw svqc::ConfigError("reuse applies to svqc models only");
        }
        if (reuse == 0) {
            throw svqc::ConfigError("reuse must be >= 1");
        }
        config->value.model.reuse = reuse;
    });
}

svqc_status svqc_config_set_bridge(svqc_config *config, const char *command) {
    return guarded([&] {
        require(config, "config");
        config->value.bridge = opt_string(command);
    });
}

svqc_status svqc_train(const svqc_config *config, const char *out_dir, const char *bridge_command, unsigned workers,
                       svqc_episode_fn on_episode, void *user) {
    return guarded([&] {
        require(config, "config");
        require(out_dir, "out_dir");
        svqc::run_experiment(config->value, out_dir, run_options(bridge_command, on_episode, user), workers);
    });
}

svqc_status svqc_train_resume(const char *checkpoint, int max_episodes, const char *out_dir,
                              const char *bridge_command, svqc_episode_fn on_episode, void *user) {
    return guarded([&] {
        require(checkpoint, "checkpoint");
        require(out_dir, "out_dir");
        auto ckpt = svqc::load_checkpoint(checkpoint);
        auto config = ckpt.config;
        if (max_episodes > 0) {
            config.trainer.max_episodes = max_episodes;
        }
        const auto seed = config.trainer.seed;
        auto options = run_options(bridge_command, on_episode, user);
        options.resume = std::move(ckpt);
        svqc::train_seed(config, seed, out_dir, options);
    });
}

svqc_status svqc_sweep_reuse(const svqc_config *config, const size_t *reuse, size_t n, const char *out_dir,
                             const char *bridge_command, svqc_episode_fn on_episode, void *user) {
    return guarded([&] {
        require(config, "config");
        require(out_dir, "out_dir");
        if (n > 0) {
            require(reuse, "reuse");
        }
        svqc::sweep_reuse(config->value, std::vector<std::size_t>(reuse, reuse + n), out_dir,
                          run_options(bridge_command, on_episode, user));
    });
}

svqc_status svqc_report(const char *dir, char **text) {
    return guarded([&] {
        require(dir, "dir");
        require(text, "text");
        *text = dup_string(svqc::report(dir).text());
    });
}

void svqc_eval_options_init(svqc_eval_options *options) {
    if (options) {
        *options = svqc_eval_options{20, 0, 0.0, 0.0, 0, 12345, nullptr};
    }
}

svqc_status svqc_eval(const char *checkpoint, const svqc_eval_options *options, svqc_eval_result **out) {
    return guarded([&] {
        require(checkpoint, "checkpoint");
        require(options, "options");
        require(out, "out");
        svqc::EvalOptions o;
        o.episodes = options->episodes;
        o.noise.p_readout = options->readout_p;
        o.noise.p_gate = options->gate_p;
        if (options->shots > 0) {
            o.noise.shots = options->shots;
        }
        o.sample = options->sample != 0;
        o.seed = options->seed;
        o.bridge_command = opt_string(options->bridge_command);
        *out = new svqc_eval_result{svqc::evaluate_checkpoint(svqc::load_checkpoint(checkpoint), o)};
    });
}

size_t svqc_eval_result_count(const svqc_eval_result *r) { return r ? r->value.rewards.size() : 0; }

const double *svqc_eval_result_rewards(const svqc_eval_result *r) { return r ? r->value.rewards.data() : nullptr; }

void svqc_eval_result_stats(const svqc_eval_result *r, double *mean, double *stddev, double *mean5, double *stddev5) {
    if (!r) {
        return;
    }
    if (mean) *mean = r->value.all.mean;
    if (stddev) *stddev = r->value.all.stddev;
    if (mean5) *mean5 = r->value.first5.mean;
    if (stddev5) *stddev5 = r->value.first5.stddev;
}

void svqc_eval_result_free(svqc_eval_result *r) { delete r; }

svqc_status svqc_model_load(const char *checkpoint, svqc_model **out) {
    return guarded([&] {
        require(checkpoint, "checkpoint");
        require(out, "out");
        auto models = svqc::restore_models(svqc::load_checkpoint(checkpoint));
        *out = new svqc_model{std::move(models.first)};
    });
}

size_t svqc_model_input_dim(const svqc_model *m) { return m ? m->actor->input_dim() : 0; }
size_t svqc_model_output_dim(const svqc_model *m) { return m ? m->actor->output_dim() : 0; }
size_t svqc_model_param_count(const svqc_model *m) { return m ? m->actor->parameter_count() : 0; }

svqc_status svqc_model_forward(const svqc_model *m, const double *x, size_t n_x, double *out, size_t n_out) {
    return guarded([&] {
        require(m, "model");
        require(x, "x");
        require(out, "out");
        if (n_x != m->actor->input_dim() || n_out < m->actor->output_dim()) {
            throw svqc::ConfigError("buffer sizes do not match the model");
        }
        const auto y = m->actor->forward(std::span<const double>(x, n_x));
        std::copy(y.begin(), y.end(), out);
    });
}

void svqc_model_free(svqc_model *m) { delete m; }

svqc_status svqc_circuit_parse(const char *text, svqc_circuit **out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new svqc_circuit{svqc::Circuit(svqc::circuit_from_text(text))};
    });
}

size_t svqc_circuit_feature_count(const svqc_circuit *c) { return c ? c->circuit.feature_count() : 0; }
size_t svqc_circuit_parameter_count(const svqc_circuit *c) { return c ? c->circuit.parameter_count() : 0; }
size_t svqc_circuit_output_count(const svqc_circuit *c) { return c ? c->circuit.output_count() : 0; }

svqc_status svqc_circuit_run(const svqc_circuit *c, const double *x, size_t n_x, const double *angles,
                             size_t n_angles, double *out, size_t n_out) {
    return guarded([&] {
        require(c, "circuit");
        require(out, "out");
        if (n_x) require(x, "x");
        if (n_angles) require(angles, "angles");
        if (n_out < c->circuit.output_count()) {
            throw svqc::ConfigError("output buffer is too small");
        }
        const auto y = c->circuit.run(std::span<const double>(x, n_x), std::span<const double>(angles, n_angles));
        std::copy(y.begin(), y.end(), out);
    });
}

void svqc_circuit_free(svqc_circuit *c) { delete c; }

svqc_status svqc_xcheck_bridge(const char *env_id, size_t steps, const char *bridge_command, uint64_t seed,
                               svqc_xcheck_report **out) {
    return guarded([&] {
        require(env_id, "env_id");
        require(bridge_command, "bridge_command");
        require(out, "out");
        svqc::BridgeClient client(bridge_command);
        auto report = svqc::xcheck_bridge(env_id, steps, client, seed);
        client.close();
        *out = new svqc_xcheck_report{report, report.summary()};
    });
}

svqc_status svqc_xcheck_trace(const char *trace_path, size_t steps, svqc_xcheck_report **out) {
    return guarded([&] {
        require(trace_path, "trace_path");
        require(out, "out");
        const auto trace = svqc::load_trace(trace_path);
        auto native = svqc::make_native_env(svqc::native_id_for(trace.env));
        auto report = svqc::xcheck_trace(trace, *native, steps ? steps : SIZE_MAX);
        *out = new svqc_xcheck_report{report, report.summary()};
    });
}

double svqc_xcheck_max_deviation(const svqc_xcheck_report *r) { return r ? r->value.max_deviation() : 0.0; }
size_t svqc_xcheck_steps(const svqc_xcheck_report *r) { return r ? r->value.steps : 0; }
size_t svqc_xcheck_reward_mismatches(const svqc_xcheck_report *r) { return r ? r->value.reward_mismatches : 0; }
size_t svqc_xcheck_done_mismatches(const svqc_xcheck_report *r) { return r ? r->value.done_mismatches : 0; }
int svqc_xcheck_passed(const svqc_xcheck_report *r, double tolerance) {
    return r && r->value.passed(tolerance) ? 1 : 0;
}
const char *svqc_xcheck_summary(const svqc_xcheck_report *r) { return r ? r->summary.c_str() : ""; }
void svqc_xcheck_report_free(svqc_xcheck_report *r) { delete r; }

} // extern "C"
