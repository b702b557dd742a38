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

#include "svqc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "svqc/bridge.hpp"
#include "svqc/error.hpp"
#include "svqc/head.hpp"

namespace svqc {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// curves

CurveWriter::CurveWriter(const std::string &path, bool append) {
    if (append && fs::exists(path)) {
        out_.open(path, std::ios::app);
    } else {
        out_.open(path, std::ios::trunc);
        if (out_) {
            out_ << kCurveHeader << '\n' << std::flush;
        }
    }
    if (!out_) {
        throw IoError("cannot write curve " + path);
    }
}

void CurveWriter::write(const EpisodeResult &r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d,%.3f\n", r.episode, r.reward, r.avg20, r.steps, r.wall_ms);
    out_ << buf << std::flush;
    if (!out_) {
        throw IoError("curve write failed");
    }
}

std::vector<CurveRow> read_curve(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read curve " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::vector<CurveRow> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            break; // unterminated tail from an interrupted write
        }
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != kCurveHeader) {
                throw ConfigError(path + ": expected header '" + kCurveHeader + "'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            cells.push_back(cell);
        }
        if (cells.size() != 5) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 5 columns");
        }
        try {
            CurveRow row;
            std::size_t used = 0;
            row.episode = std::stoul(cells[0], &used);
            if (used != cells[0].size()) throw std::invalid_argument("episode");
            row.reward = parse_double(cells[1]);
            row.avg20 = parse_double(cells[2]);
            row.steps = std::stoi(cells[3], &used);
            if (used != cells[3].size()) throw std::invalid_argument("steps");
            row.wall_ms = parse_double(cells[4]);
            if (row.episode != rows.size() + 1) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": episodes must count up from 1");
            }
            rows.push_back(row);
        } catch (const std::logic_error &) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
        }
    }
    if (line_no == 0) {
        throw ConfigError(path + ": empty curve file");
    }
    return rows;
}

// ---------------------------------------------------------------------------
// runs

std::unique_ptr<Environment> make_environment(const ExperimentConfig &config, const std::string &bridge_command) {
    const EnvSpec spec = EnvSpec::lookup(config.env);
    if (!spec.is_bridge()) {
        return make_native_env(spec.id);
    }
    const std::string command = bridge_command.empty() ? config.bridge : bridge_command;
    if (command.empty()) {
        throw ConfigError(spec.id + " needs a bridge command");
    }
    return std::make_unique<BridgeEnv>(std::make_shared<BridgeClient>(command), spec);
}

namespace {

std::string seed_file(const std::string &dir, const char *stem, std::uint64_t seed, const char *ext) {
    return (fs::path(dir) / (std::string(stem) + "_seed" + std::to_string(seed) + ext)).string();
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir);
    }
}

} // namespace

SeedRun train_seed(const ExperimentConfig &config, std::uint64_t seed, const std::string &out_dir,
                   const RunOptions &options) {
    ensure_dir(out_dir);
    ExperimentConfig run_config = config;
    run_config.trainer.seed = seed;

    auto env = make_environment(run_config, options.bridge_command);
    std::unique_ptr<Network> actor, critic;
    if (options.resume) {
        const auto &ckpt = *options.resume;
        if (!(ckpt.config.model == run_config.model) || ckpt.config.env != run_config.env) {
            throw ConfigError("checkpoint was written for a different model or environment");
        }
        std::tie(actor, critic) = restore_models(ckpt);
    } else {
        Rng init(seed);
        std::tie(actor, critic) = build_models(run_config, env->spec(), init);
    }
    Trainer trainer(*env, std::move(actor), std::move(critic), run_config.trainer);
    if (options.resume) {
        trainer.restore(options.resume->state);
    }

    SeedRun run;
    run.seed = seed;
    run.curve_path = seed_file(out_dir, "curve", seed, ".csv");
    run.best_checkpoint = seed_file(out_dir, "best", seed, ".ckpt");
    run.final_checkpoint = seed_file(out_dir, "final", seed, ".ckpt");

    CurveWriter curve(run.curve_path, options.resume.has_value());
    double best = -std::numeric_limits<double>::infinity();
    const auto &history = trainer.state().rewards;
    for (std::size_t e = 1; e <= history.size(); ++e) {
        best = std::max(best, trailing_mean(std::span<const double>(history).first(e), 20));
    }
    trainer.run([&](const EpisodeResult &r, const Trainer &t) {
        curve.write(r);
        if (r.avg20 > best) {
            best = r.avg20;
            save_checkpoint(run.best_checkpoint, capture(run_config, t));
        }
        if (options.on_episode) {
            options.on_episode(seed, r);
        }
    });
    save_checkpoint(run.final_checkpoint, capture(run_config, trainer));
    run.rewards = trainer.state().rewards;
    run.episodes_to_threshold = episodes_to_solve(run.rewards, env->spec());
    return run;
}

std::vector<SeedRun> run_experiment(const ExperimentConfig &config, const std::string &out_dir,
                                    const RunOptions &options, unsigned max_workers) {
    config.validate();
    ensure_dir(out_dir);
    {
        Rng scratch(0);
        const auto [actor, critic] = build_models(config, EnvSpec::lookup(config.env), scratch);
        json meta{{"config", json::parse(config_to_text(config))},
                  {"fingerprint", fingerprint(config)},
                  {"model_kind", to_string(config.model.kind)},
                  {"actor_params", actor->parameter_count()},
                  {"critic_params", critic->parameter_count()}};
        std::ofstream out(fs::path(out_dir) / "run.json", std::ios::trunc);
        if (!out || !(out << meta.dump(2) << '\n')) {
            throw IoError("cannot write " + (fs::path(out_dir) / "run.json").string());
        }
    }

    const std::size_t n = config.seeds.size();
    std::vector<SeedRun> results(n);
    std::vector<std::exception_ptr> errors(n);
    unsigned workers = max_workers ? max_workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next == n) {
                    return;
                }
                i = next++;
            }
            try {
                results[i] = train_seed(config, config.seeds[i], out_dir, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

// ---------------------------------------------------------------------------
// evaluation

RewardStats reward_stats(std::span<const double> rewards) {
    RewardStats s;
    s.n = rewards.size();
    if (s.n == 0) {
        return s;
    }
    s.mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(s.n);
    double ss = 0.0;
    for (double r : rewards) {
        ss += (r - s.mean) * (r - s.mean);
    }
    s.stddev = std::sqrt(ss / static_cast<double>(s.n));
    return s;
}

EvalResult evaluate(const Network &actor, Environment &env, const EvalOptions &options) {
    const auto &spec = env.spec();
    if (actor.input_dim() != spec.obs_dim || actor.output_dim() != spec.n_actions) {
        throw ConfigError("policy shape (" + std::to_string(actor.input_dim()) + " -> " +
                          std::to_string(actor.output_dim()) + ") does not match " + spec.id);
    }
    if (options.episodes == 0) {
        throw ConfigError("evaluation needs at least one episode");
    }
    options.noise.validate();
    Rng rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool noisy = !options.noise.is_identity();

    EvalResult result;
    for (std::size_t e = 0; e < options.episodes; ++e) {
        auto obs = env.reset(episode_seed(options.seed, e));
        double total = 0.0;
        for (bool done = false; !done;) {
            const auto logits = noisy ? actor.forward(obs, options.noise, rng) : actor.forward(obs);
            std::size_t action = 0;
            if (options.sample) {
                const auto p = softmax(logits);
                const double draw = u(rng);
                double acc = 0.0;
                action = p.size() - 1;
                for (std::size_t a = 0; a < p.size(); ++a) {
                    acc += p[a];
                    if (draw < acc) {
                        action = a;
                        break;
                    }
                }
            } else {
                action = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
            }
            auto step = env.step(action);
            total += step.reward;
            done = step.done;
            obs = std::move(step.observation);
        }
        result.rewards.push_back(total);
    }
    result.all = reward_stats(result.rewards);
    result.first5 = reward_stats(std::span<const double>(result.rewards).first(std::min<std::size_t>(5, result.rewards.size())));
    return result;
}

EvalResult evaluate_checkpoint(const Checkpoint &ckpt, const EvalOptions &options) {
    auto [actor, critic] = restore_models(ckpt);
    auto env = make_environment(ckpt.config, options.bridge_command);
    return evaluate(*actor, *env, options);
}

// ---------------------------------------------------------------------------
// report

namespace {

std::optional<double> median_of(std::vector<std::optional<std::size_t>> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> v;
    for (const auto &x : values) {
        v.push_back(x ? static_cast<double>(*x) : inf);
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const double m = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    if (std::isinf(m)) {
        return std::nullopt;
    }
    return m;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

RunSummary summarize_run(const std::string &dir) {
    const auto meta_path = fs::path(dir) / "run.json";
    std::ifstream in(meta_path);
    if (!in) {
        throw IoError("no run.json in " + dir);
    }
    json meta;
    try {
        meta = json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError(meta_path.string() + ": " + e.what());
    }
    const auto config = config_from_text(meta.at("config").dump());
    const EnvSpec spec = EnvSpec::lookup(config.env);

    RunSummary s;
    s.name = fs::path(dir).filename().string();
    if (s.name.empty() || s.name == ".") {
        s.name = fs::absolute(dir).parent_path().filename().string();
    }
    s.env = spec.id;
    s.model_kind = meta.value("model_kind", std::string(to_string(config.model.kind)));
    s.fingerprint = meta.value("fingerprint", std::string());
    s.actor_params = meta.value("actor_params", std::size_t{0});
    s.critic_params = meta.value("critic_params", std::size_t{0});
    s.max_episodes = static_cast<std::size_t>(config.trainer.max_episodes);

    std::vector<std::vector<CurveRow>> curves;
    for (auto seed : config.seeds) {
        const auto path = seed_file(dir, "curve", seed, ".csv");
        if (!fs::exists(path)) {
            continue;
        }
        auto rows = read_curve(path);
        std::vector<double> rewards;
        for (const auto &r : rows) {
            rewards.push_back(r.reward);
        }
        s.seeds.push_back(seed);
        s.episodes_to_threshold.push_back(episodes_to_solve(rewards, spec));
        curves.push_back(std::move(rows));
    }
    if (curves.empty()) {
        throw ConfigError("no curves found in " + dir);
    }
    s.reached = static_cast<std::size_t>(
        std::count_if(s.episodes_to_threshold.begin(), s.episodes_to_threshold.end(), [](auto &e) { return e.has_value(); }));
    s.median_episodes = median_of(s.episodes_to_threshold);

    std::size_t longest = 0;
    for (const auto &c : curves) {
        longest = std::max(longest, c.size());
    }
    for (std::size_t e = 0; e < longest; ++e) {
        std::vector<double> at;
        for (const auto &c : curves) {
            if (e < c.size()) {
                at.push_back(c[e].avg20);
            }
        }
        const auto st = reward_stats(at);
        s.mean_avg20.push_back(st.mean);
        s.std_avg20.push_back(st.stddev);
    }
    return s;
}

std::string Report::text() const {
    std::ostringstream out;
    for (const auto &r : runs) {
        out << "run " << r.name << ": env " << r.env << ", model " << r.model_kind << ", fingerprint "
            << r.fingerprint << "\n";
        out << "  parameters: actor " << r.actor_params << ", critic " << r.critic_params << "\n";
        for (std::size_t i = 0; i < r.seeds.size(); ++i) {
            out << "  seed " << r.seeds[i] << ": episodes to threshold "
                << (r.episodes_to_threshold[i] ? std::to_string(*r.episodes_to_threshold[i]) : "not reached") << "\n";
        }
        out << "  median: " << (r.median_episodes ? format_number(*r.median_episodes) : "not reached") << " ("
            << r.reached << "/" << r.seeds.size() << " seeds reached)\n";
        if (!r.mean_avg20.empty()) {
            out << "  final mean avg20: " << format_number(r.mean_avg20.back()) << "\n";
        }
    }
    for (const auto &s : speedups) {
        out << "speedup " << s.env << " (" << s.fcn_run << " / " << s.svqc_run << "): ";
        if (!s.ratio) {
            out << "undefined (svqc did not reach threshold)\n";
        } else {
            out << (s.lower_bound ? ">= " : "") << format_number(*s.ratio) << "\n";
        }
    }
    return out.str();
}

Report report(const std::string &dir) {
    std::vector<std::string> run_dirs;
    if (fs::exists(fs::path(dir) / "run.json")) {
        run_dirs.push_back(dir);
    } else if (fs::is_directory(dir)) {
        for (const auto &entry : fs::directory_iterator(dir)) {
            if (entry.is_directory() && fs::exists(entry.path() / "run.json")) {
                run_dirs.push_back(entry.path().string());
            }
        }
        std::sort(run_dirs.begin(), run_dirs.end());
    }
    if (run_dirs.empty()) {
        throw ConfigError("no runs found under " + dir);
    }

    Report rep;
    for (const auto &d : run_dirs) {
        auto s = summarize_run(d);
        std::ofstream out(fs::path(d) / ("mean_" + s.name + ".csv"), std::ios::trunc);
        out << "episode,mean_avg20,std_avg20\n";
        for (std::size_t e = 0; e < s.mean_avg20.size(); ++e) {
            out << (e + 1) << ',' << format_number(s.mean_avg20[e]) << ',' << format_number(s.std_avg20[e]) << '\n';
        }
        rep.runs.push_back(std::move(s));
    }
    for (const auto &q : rep.runs) {
        if (q.model_kind != "svqc") {
            continue;
        }
        for (const auto &c : rep.runs) {
            if (c.model_kind != "fcn" || c.env != q.env) {
                continue;
            }
            Speedup sp{q.env, q.name, c.name, std::nullopt, false};
            if (q.median_episodes) {
                if (c.median_episodes) {
                    sp.ratio = *c.median_episodes / *q.median_episodes;
                } else {
                    sp.ratio = static_cast<double>(c.max_episodes) / *q.median_episodes;
                    sp.lower_bound = true;
                }
            }
            rep.speedups.push_back(sp);
        }
    }
    return rep;
}

std::vector<std::vector<SeedRun>> sweep_reuse(const ExperimentConfig &config, const std::vector<std::size_t> &reuse,
                                              const std::string &out_dir, const RunOptions &options) {
    if (config.model.kind != ModelKind::Svqc) {
        throw ConfigError("the reuse sweep needs an svqc model");
    }
    if (reuse.empty()) {
        throw ConfigError("the reuse sweep needs at least one value");
    }
    std::vector<std::vector<SeedRun>> all;
    for (auto ell : reuse) {
        ExperimentConfig c = config;
        c.model.reuse = ell;
        c.validate();
        all.push_back(run_experiment(c, (fs::path(out_dir) / ("l" + std::to_string(ell))).string(), options));
    }
    return all;
}

} // namespace svqc
