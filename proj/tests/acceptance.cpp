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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   svqc_acceptance [--only N[,N...]] [--strict] [--out DIR]
//
// Exit status is 0 once every selected check has run; --strict makes any
// FAIL exit 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "svqc/config.hpp"
#include "svqc/experiment.hpp"
#include "svqc/head.hpp"
#include "svqc/network.hpp"
#include "svqc/ppo.hpp"
#include "svqc/quantum.hpp"
#include "svqc/xcheck.hpp"

using namespace svqc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double central(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x, std::size_t i,
               double h = 1e-5) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double up = f(x);
    x[i] = x0 - h;
    const double down = f(x);
    return (up - down) / (2 * h);
}

std::vector<double> uniform(Rng &rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto &e : v) e = u(rng);
    return v;
}

std::string median_text(const std::optional<double> &m) { return m ? fmt("%.1f", *m) : std::string("not reached"); }

// ---------------------------------------------------------------------------

Outcome gradient_correctness() {
    Rng rng(101);
    std::vector<CircuitSpec> specs;
    for (const auto &name : preset_names()) {
        const auto c = preset(name);
        if (c.model.kind == ModelKind::Svqc) specs.push_back(c.model.circuit);
    }
    std::uniform_int_distribution<std::size_t> dim(1, 8), reps(1, 3), coin(0, 1);
    while (specs.size() < 200) {
        specs.push_back(CircuitSpec::standard(dim(rng), reps(rng), coin(rng) ? Replication::Spatial : Replication::Temporal));
    }
    double worst = 0.0;
    for (const auto &spec : specs) {
        const Circuit circuit(spec);
        const auto x = uniform(rng, spec.n_features, -3, 3);
        const auto t = uniform(rng, circuit.parameter_count(), -M_PI, M_PI);
        const auto a = circuit.jacobian(x, t, GradientMode::Analytic);
        const auto s = circuit.jacobian(x, t, GradientMode::Shift);
        for (std::size_t o = 0; o < circuit.output_count(); ++o) {
            for (std::size_t p = 0; p < circuit.parameter_count(); ++p) {
                const double fd = central([&](const std::vector<double> &tt) { return circuit.run(x, tt)[o]; }, t, p);
                worst = std::max({worst, std::abs(a.at(o, p) - s.at(o, p)), std::abs(a.at(o, p) - fd),
                                  std::abs(s.at(o, p) - fd)});
            }
        }
    }
    const bool circuits_ok = worst < 1e-6;

    // PPO objective on frozen 8-step buffers collected from CartPole.
    double worst_actor = 0.0, worst_critic = 0.0;
    int buffers = 0;
    for (const char *name : {"cartpole-table3", "cartpole-ibm", "acrobot-table3", "cartpole-table3-fcn"}) {
        const auto c = preset(name);
        const auto spec = EnvSpec::lookup(c.env);
        for (int trial = 0; trial < 3; ++trial) {
            auto [actor, critic] = build_models(c, spec, rng);
            auto p = actor->parameters();
            for (auto &v : p) v += std::normal_distribution<double>(0, 0.3)(rng);
            actor->set_parameters(p);
            auto behaviour = actor->clone();
            auto q = behaviour->parameters();
            for (auto &v : q) v += std::normal_distribution<double>(0, 0.02)(rng);
            behaviour->set_parameters(q);

            auto env = make_native_env(spec.id);
            auto obs = env->reset(trial + 1);
            std::vector<Transition> buf;
            std::uniform_real_distribution<double> u(0, 1);
            for (int i = 0; i < 8; ++i) {
                const auto probs = softmax(behaviour->forward(obs));
                std::size_t act = 0;
                for (double acc = probs[0], d = u(rng); act + 1 < probs.size() && d >= acc; acc += probs[++act]) {
                }
                auto step = env->step(act);
                buf.push_back({obs, act, step.reward, probs[act], critic->forward(obs)[0], step.done});
                obs = step.observation;
                if (step.done) obs = env->reset(100 + i);
            }
            const auto batch = make_batch(buf, critic->forward(obs)[0], c.trainer);
            bool near_kink = false;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const double r = softmax(actor->forward(batch.states[i]))[batch.actions[i]] / batch.old_probs[i];
                near_kink = near_kink || std::abs(r - (1 + c.trainer.clip)) < 1e-3 || std::abs(r - (1 - c.trainer.clip)) < 1e-3;
            }
            if (near_kink) continue;
            ++buffers;
            std::vector<double> ga, gc;
            actor_objective(*actor, batch, c.trainer.clip, 0.0, &ga);
            critic_loss(*critic, batch, &gc);
            const auto pa = actor->parameters(), pc = critic->parameters();
            auto fa = [&](const std::vector<double> &v) {
                auto m = actor->clone();
                m->set_parameters(v);
                return actor_objective(*m, batch, c.trainer.clip, 0.0, nullptr);
            };
            auto fc = [&](const std::vector<double> &v) {
                auto m = critic->clone();
                m->set_parameters(v);
                return critic_loss(*m, batch, nullptr);
            };
            const std::size_t stride_a = std::max<std::size_t>(1, pa.size() / 200);
            for (std::size_t i = 0; i < pa.size(); i += stride_a) worst_actor = std::max(worst_actor, std::abs(ga[i] - central(fa, pa, i)));
            const std::size_t stride_c = std::max<std::size_t>(1, pc.size() / 200);
            for (std::size_t i = 0; i < pc.size(); i += stride_c) worst_critic = std::max(worst_critic, std::abs(gc[i] - central(fc, pc, i)));
        }
    }
    const bool ppo_ok = buffers >= 8 && worst_actor < 1e-5 && worst_critic < 1e-5;
    return {circuits_ok && ppo_ok,
            fmt("%zu circuits, max pairwise gap %.2e; %d PPO buffers, actor gap %.2e, critic gap %.2e", specs.size(),
                worst, buffers, worst_actor, worst_critic)};
}

Outcome reuse_identity() {
    Rng rng(202);
    std::uniform_int_distribution<std::size_t> k(1, 4), n(1, 8);
    double worst = 0.0;
    int instances = 0;
    for (std::size_t ell = 1; ell <= 32; ++ell) {
        const int count = ell <= 8 ? 32 : 31; // 1000 instances in total
        for (int i = 0; i < count; ++i, ++instances) {
            HeadParams h(k(rng), n(rng), ell);
            h.weights = uniform(rng, h.weights.size(), -2, 2);
            h.bias = uniform(rng, h.bias.size(), -2, 2);
            const auto y = uniform(rng, h.n_inputs, -1, 1);
            const auto dup = scale_outputs(reuse_expand(y, ell), h);
            // Folded single layer: W_pq = sum_j W_p,(j,q), computed here directly.
            for (std::size_t p = 0; p < h.n_outputs; ++p) {
                double z = h.bias[p];
                for (std::size_t q = 0; q < h.n_inputs; ++q) {
                    double w = 0.0;
                    for (std::size_t j = 0; j < ell; ++j) w += h.weights[p * ell * h.n_inputs + j * h.n_inputs + q];
                    z += w * y[q];
                }
                worst = std::max(worst, std::abs(z - dup[p]));
            }
        }
    }
    return {instances >= 1000 && worst <= 1e-12, fmt("%d instances, l = 1..32, max gap %.2e", instances, worst)};
}

Outcome shot_statistics() {
    Rng rng(303);
    constexpr int reps = 10000;
    constexpr std::uint64_t shots = 1024;
    double worst_bias = 0.0, worst_readout = 0.0;
    for (double angle : {0.4, 1.3, 2.2, 2.9}) {
        const auto s = apply_gate(QubitState::zero(), GateKind::Ry, angle);
        const double z = std::cos(angle);
        double sum = 0.0;
        for (int i = 0; i < reps; ++i) sum += sample_expectation(s, shots, rng);
        const double sigma = std::sqrt((1 - z * z) / shots / reps);
        worst_bias = std::max(worst_bias, std::abs(sum / reps - z) / sigma);

        NoiseModel m;
        m.p_readout = 0.0116;
        m.shots = shots;
        const double zf = (1 - 2 * m.p_readout) * z;
        sum = 0.0;
        for (int i = 0; i < reps; ++i) sum += noisy_expectation(s, 1, m, rng);
        const double sf = std::sqrt((1 - zf * zf) / shots / reps);
        worst_readout = std::max(worst_readout, std::abs(sum / reps - zf) / sf);
    }
    return {worst_bias < 4 && worst_readout < 3,
            fmt("10^4 reps x 4 states: worst bias %.2f sigma (< 4), readout p=0.0116 worst %.2f sigma (< 3)", worst_bias,
                worst_readout)};
}

Outcome environment_equivalence() {
    std::string detail;
    bool ok = true;
    const char *bridge = std::getenv("SVQC_BRIDGE");
    for (const char *env : {"cartpole-v1", "acrobot-v1"}) {
        XcheckReport r;
        if (bridge && *bridge) {
            BridgeClient client(bridge);
            r = xcheck_bridge(env, 1000, client, 17);
        } else {
            const auto trace = load_trace(std::string(SVQC_FIXTURE_DIR) + "/" + env + ".jsonl");
            auto native = make_native_env(native_id_for(trace.env));
            r = xcheck_trace(trace, *native, 1000);
        }
        ok = ok && r.steps >= 1000 && r.passed(1e-6);
        detail += fmt("%s%s %zu steps max dev %.1e, reward/done mismatches %zu/%zu", detail.empty() ? "" : "; ", env,
                      r.steps, r.max_deviation(), r.reward_mismatches, r.done_mismatches);
    }
    return {ok, detail + (bridge && *bridge ? " (live bridge)" : " (recorded traces)")};
}

struct Runs {
    std::optional<RunSummary> cart_q, cart_c, acro_q, acro_c;
    fs::path root;
};

RunSummary train_preset(const char *name, const fs::path &root) {
    const auto c = preset(name);
    const auto dir = root / name;
    run_experiment(c, dir.string());
    return summarize_run(dir.string());
}

std::string seed_list(const RunSummary &s) {
    std::string out;
    for (const auto &e : s.episodes_to_threshold) {
        out += (out.empty() ? "" : ",") + (e ? std::to_string(*e) : std::string("-"));
    }
    return out;
}

Outcome cartpole_learning(Runs &runs) {
    runs.cart_q = train_preset("cartpole-table3", runs.root);
    const auto &s = *runs.cart_q;
    const bool ok = s.reached >= 3 && s.median_episodes && *s.median_episodes <= 300;
    return {ok, fmt("%zu/5 seeds solved within 600 (episodes %s), median %s (<= 300)", s.reached, seed_list(s).c_str(),
                    median_text(s.median_episodes).c_str())};
}

Outcome acrobot_learning(Runs &runs) {
    runs.acro_q = train_preset("acrobot-table3", runs.root);
    const auto &s = *runs.acro_q;
    double best = -1e9;
    for (double v : s.mean_avg20) best = std::max(best, v);
    return {s.reached >= 3, fmt("%zu/5 seeds reached trailing-20 >= -100 within 300 (episodes %s); best seed-mean avg20 %.1f",
                                s.reached, seed_list(s).c_str(), best)};
}

Outcome sample_efficiency(Runs &runs) {
    if (!runs.cart_q) runs.cart_q = train_preset("cartpole-table3", runs.root);
    if (!runs.acro_q) runs.acro_q = train_preset("acrobot-table3", runs.root);
    runs.cart_c = train_preset("cartpole-table3-fcn", runs.root);
    runs.acro_c = train_preset("acrobot-table3-fcn", runs.root);
    bool ok = true;
    std::string detail;
    for (auto [q, c] : {std::pair{&*runs.cart_q, &*runs.cart_c}, std::pair{&*runs.acro_q, &*runs.acro_c}}) {
        std::string ratio = "undefined";
        bool env_ok = false;
        if (q->median_episodes) {
            const double fcn = c->median_episodes ? *c->median_episodes : static_cast<double>(c->max_episodes);
            const double r = fcn / *q->median_episodes;
            ratio = fmt("%s%.2f", c->median_episodes ? "" : ">= ", r);
            env_ok = r >= 1.5;
        }
        ok = ok && env_ok;
        detail += fmt("%s%s svqc %s vs fcn %s, ratio %s", detail.empty() ? "" : "; ", q->env.c_str(),
                      median_text(q->median_episodes).c_str(), median_text(c->median_episodes).c_str(), ratio.c_str());
    }
    return {ok, detail + " (need >= 1.5 on both)"};
}

Outcome parameter_counts() {
    Rng rng(404);
    auto models = [&](const char *name) {
        const auto c = preset(name);
        return build_models(c, EnvSpec::lookup(c.env), rng);
    };
    const auto q = models("cartpole-table3").first->parameter_count();
    const auto f = models("cartpole-table3-fcn").first->parameter_count();
    auto acro = models("acrobot-ibm");
    auto lander = models("lunarlander-ibm");
    const auto acro_head = dynamic_cast<SvqcNetwork &>(*acro.first).scaling_parameter_count();
    const auto lander_head = dynamic_cast<SvqcNetwork &>(*lander.first).scaling_parameter_count();
    const bool ok = q == 134 && f == 4882 && 10 * q <= f && acro_head == 21 && lander_head == 100;
    return {ok, fmt("svqc %zu, fcn %zu (ratio %.1f), acrobot-ibm head %zu, lunarlander-ibm head %zu", q, f,
                    static_cast<double>(f) / static_cast<double>(q), acro_head, lander_head)};
}

Outcome reuse_ablation(const fs::path &root) {
    auto c = preset("cartpole-table3");
    c.seeds = {1, 2};
    const auto dir = root / "sweep-reuse";
    const std::vector<std::size_t> ells{4, 8, 16, 32};
    sweep_reuse(c, ells, dir.string());
    std::string detail;
    std::size_t curves = 0;
    for (auto ell : ells) {
        const auto s = summarize_run((dir / ("l" + std::to_string(ell))).string());
        const bool complete = s.mean_avg20.size() == static_cast<std::size_t>(c.trainer.max_episodes);
        curves += complete && s.seeds.size() == c.seeds.size();
        detail += fmt("%sl=%zu final avg20 %.1f", detail.empty() ? "" : ", ", ell, s.mean_avg20.back());
    }
    return {curves == ells.size(), fmt("%zu/4 curve sets complete (%s)", curves, detail.c_str())};
}

Outcome noisy_evaluation(const fs::path &root) {
    auto c = preset("cartpole-ibm");
    c.seeds = {1};
    const auto runs = run_experiment(c, (root / "cartpole-ibm").string());
    const auto ckpt = load_checkpoint(runs[0].final_checkpoint);
    EvalOptions exact;
    exact.episodes = 20;
    const auto e = evaluate_checkpoint(ckpt, exact);
    EvalOptions noisy = exact;
    noisy.noise = c.noise;
    const auto n = evaluate_checkpoint(ckpt, noisy);
    const bool ok = e.all.mean == 200.0 && e.all.stddev == 0.0 && n.all.mean >= 185.0 && n.all.mean <= 200.0;
    return {ok, fmt("exact %.1f +- %.2f; shots 1024 + readout 0.0116: %.1f +- %.2f over %zu episodes (first 5: %.1f)",
                    e.all.mean, e.all.stddev, n.all.mean, n.all.stddev, n.rewards.size(), n.first5.mean)};
}

} // namespace

int main(int argc, char **argv) {
    std::set<int> only;
    bool strict = false;
    fs::path root = fs::temp_directory_path() / "svqc_acceptance";
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--strict")) {
            strict = true;
        } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string t; std::getline(ss, t, ',');) only.insert(std::stoi(t));
        } else if (!std::strcmp(argv[i], "--out") && i + 1 < argc) {
            root = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--only N,...] [--strict] [--out DIR]\n", argv[0]);
            return 2;
        }
    }
    fs::remove_all(root);
    fs::create_directories(root);

    Runs runs;
    runs.root = root;
    const std::vector<std::pair<const char *, std::function<Outcome()>>> checks{
        {"gradient correctness", gradient_correctness},
        {"reuse identity", reuse_identity},
        {"shot and readout statistics", shot_statistics},
        {"environment oracle equivalence", environment_equivalence},
        {"CartPole-v1 learning", [&] { return cartpole_learning(runs); }},
        {"Acrobot-v1 learning", [&] { return acrobot_learning(runs); }},
        {"sample-efficiency ordering", [&] { return sample_efficiency(runs); }},
        {"parameter counts", parameter_counts},
        {"reuse ablation sweep", [&] { return reuse_ablation(root); }},
        {"noisy evaluation", [&] { return noisy_evaluation(root); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, checks[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return strict && failed ? 1 : 0;
}
