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

#include "svqc/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "svqc/error.hpp"

namespace svqc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// numbers

std::string hex_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string &text) {
    if (text.empty()) {
        throw ConfigError("empty number");
    }
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
        throw ConfigError("not a number: '" + text + "'");
    }
    return v;
}

namespace {

double number(const json &j, const char *what) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return parse_double(j.get<std::string>());
    }
    throw ConfigError(std::string("'") + what + "' must be a number");
}

template <class T> T integer(const json &j, const char *what) {
    if (!j.is_number_integer()) {
        throw ConfigError(std::string("'") + what + "' must be an integer");
    }
    if (j.is_number_unsigned()) {
        return static_cast<T>(j.get<std::uint64_t>());
    }
    const auto v = j.get<std::int64_t>();
    if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) {
            throw ConfigError(std::string("'") + what + "' must be non-negative");
        }
    }
    return static_cast<T>(v);
}

bool boolean(const json &j, const char *what) {
    if (!j.is_boolean()) {
        throw ConfigError(std::string("'") + what + "' must be true or false");
    }
    return j.get<bool>();
}

void reject_unknown(const json &j, std::initializer_list<const char *> known, const char *where) {
    for (const auto &[key, _] : j.items()) {
        bool ok = false;
        for (const char *k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

// ---------------------------------------------------------------------------
// circuits

const char *gate_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "h";
    case GateKind::Rx:
        return "rx";
    case GateKind::Ry:
        return "ry";
    case GateKind::Rz:
        return "rz";
    }
    return "?";
}

std::string gate_to_string(const Gate &g) {
    std::string s = gate_name(g.kind);
    if (g.kind == GateKind::H) {
        return s;
    }
    switch (g.source) {
    case AngleSource::Feature:
        return s + ":x" + std::to_string(g.index);
    case AngleSource::Parameter:
        return s + ":t" + std::to_string(g.index);
    case AngleSource::Constant:
        return s + ":=" + hex_double(g.value);
    }
    return s;
}

Gate gate_from_string(const std::string &text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    GateKind kind;
    if (name == "h") {
        if (colon != std::string::npos) {
            throw ConfigError("H gate takes no angle: '" + text + "'");
        }
        return Gate::h();
    } else if (name == "rx") {
        kind = GateKind::Rx;
    } else if (name == "ry") {
        kind = GateKind::Ry;
    } else if (name == "rz") {
        kind = GateKind::Rz;
    } else {
        throw ConfigError("unknown gate '" + text + "'");
    }
    if (colon == std::string::npos || colon + 2 > text.size()) {
        throw ConfigError("rotation needs an angle source: '" + text + "'");
    }
    const char tag = text[colon + 1];
    const std::string rest = text.substr(colon + 2);
    if (tag == '=') {
        return Gate::constant(kind, parse_double(rest));
    }
    if ((tag != 'x' && tag != 't') || rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("bad angle source in '" + text + "'");
    }
    const std::size_t index = std::stoul(rest);
    return tag == 'x' ? Gate::feature(kind, index) : Gate::parameter(kind, index);
}

json circuit_json(const CircuitSpec &spec) {
    json qubits = json::array();
    for (const auto &q : spec.qubits) {
        json gates = json::array();
        for (const auto &g : q) {
            gates.push_back(gate_to_string(g));
        }
        qubits.push_back(gates);
    }
    json j{{"n_features", spec.n_features},
           {"qubits", qubits},
           {"replication", spec.replication == Replication::Spatial ? "spatial" : "temporal"},
           {"repeats", spec.repeats}};
    if (!spec.feature_map.is_identity()) {
        j["feature_map"] = {{"n_angles", spec.feature_map.n_angles},
                            {"weights", spec.feature_map.weights},
                            {"offsets", spec.feature_map.offsets}};
    }
    return j;
}

CircuitSpec circuit_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("circuit must be an object");
    }
    reject_unknown(j, {"n_features", "qubits", "replication", "repeats", "feature_map", "standard"}, "circuit");
    CircuitSpec spec;
    if (j.contains("standard")) {
        // Shorthand: {"standard": d, "repeats": r, "replication": ...}
        const auto d = integer<std::size_t>(j["standard"], "standard");
        const auto repeats = j.contains("repeats") ? integer<std::size_t>(j["repeats"], "repeats") : 1;
        const auto rep = j.value("replication", std::string("spatial"));
        spec = CircuitSpec::standard(d, repeats, rep == "temporal" ? Replication::Temporal : Replication::Spatial);
        if (rep != "temporal" && rep != "spatial") {
            throw ConfigError("replication must be 'spatial' or 'temporal'");
        }
        spec.validate();
        return spec;
    }
    if (!j.contains("n_features") || !j.contains("qubits")) {
        throw ConfigError("circuit needs 'n_features' and 'qubits' (or 'standard')");
    }
    spec.n_features = integer<std::size_t>(j["n_features"], "n_features");
    if (!j["qubits"].is_array()) {
        throw ConfigError("'qubits' must be a list of gate lists");
    }
    for (const auto &q : j["qubits"]) {
        if (!q.is_array()) {
            throw ConfigError("'qubits' must be a list of gate lists");
        }
        std::vector<Gate> gates;
        for (const auto &g : q) {
            if (!g.is_string()) {
                throw ConfigError("gates are written as strings such as \"ry:x0\"");
            }
            gates.push_back(gate_from_string(g.get<std::string>()));
        }
        spec.qubits.push_back(std::move(gates));
    }
    const auto rep = j.value("replication", std::string("spatial"));
    if (rep != "temporal" && rep != "spatial") {
        throw ConfigError("replication must be 'spatial' or 'temporal'");
    }
    spec.replication = rep == "temporal" ? Replication::Temporal : Replication::Spatial;
    spec.repeats = j.contains("repeats") ? integer<std::size_t>(j["repeats"], "repeats") : 1;
    if (j.contains("feature_map")) {
        const auto &fm = j["feature_map"];
        reject_unknown(fm, {"n_angles", "weights", "offsets"}, "feature_map");
        spec.feature_map.n_features = spec.n_features;
        spec.feature_map.n_angles = integer<std::size_t>(fm.at("n_angles"), "n_angles");
        for (const auto &w : fm.at("weights")) {
            spec.feature_map.weights.push_back(number(w, "feature_map.weights"));
        }
        if (fm.contains("offsets")) {
            for (const auto &o : fm["offsets"]) {
                spec.feature_map.offsets.push_back(number(o, "feature_map.offsets"));
            }
        } else {
            spec.feature_map.offsets.assign(spec.feature_map.n_angles, 0.0);
        }
    } else {
        spec.feature_map = FeatureMap::identity(spec.n_features);
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// experiment documents

const char *activation_name(Activation a) {
    switch (a) {
    case Activation::Tanh:
        return "tanh";
    case Activation::Relu:
        return "relu";
    case Activation::Linear:
        return "linear";
    }
    return "?";
}

json model_json(const ModelSpec &m) {
    if (m.kind == ModelKind::Fcn) {
        return {{"kind", "fcn"}, {"hidden", m.hidden}, {"activation", activation_name(m.activation)}};
    }
    return {{"kind", "svqc"},
            {"circuit", circuit_json(m.circuit)},
            {"reuse", m.reuse},
            {"gradient", m.gradient == GradientMode::Analytic ? "analytic" : "shift"},
            {"angle_init", m.angle_init == AngleInit::Uniform ? "uniform" : "zero"}};
}

ModelSpec model_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("'model' must be an object");
    }
    reject_unknown(j, {"kind", "circuit", "reuse", "gradient", "angle_init", "hidden", "activation"}, "model");
    ModelSpec m;
    const auto kind = j.value("kind", std::string("svqc"));
    if (kind == "fcn") {
        m.kind = ModelKind::Fcn;
        if (j.contains("hidden")) {
            m.hidden.clear();
            for (const auto &h : j["hidden"]) {
                m.hidden.push_back(integer<std::size_t>(h, "hidden"));
            }
        }
        const auto act = j.value("activation", std::string("tanh"));
        if (act == "tanh") {
            m.activation = Activation::Tanh;
        } else if (act == "relu") {
            m.activation = Activation::Relu;
        } else if (act == "linear") {
            m.activation = Activation::Linear;
        } else {
            throw ConfigError("unknown activation '" + act + "'");
        }
        return m;
    }
    if (kind != "svqc") {
        throw ConfigError("model kind must be 'svqc' or 'fcn', got '" + kind + "'");
    }
    if (!j.contains("circuit")) {
        throw ConfigError("svqc model needs a 'circuit'");
    }
    m.circuit = circuit_from_json(j["circuit"]);
    m.reuse = j.contains("reuse") ? integer<std::size_t>(j["reuse"], "reuse") : 1;
    const auto grad = j.value("gradient", std::string("analytic"));
    if (grad != "analytic" && grad != "shift") {
        throw ConfigError("gradient must be 'analytic' or 'shift'");
    }
    m.gradient = grad == "analytic" ? GradientMode::Analytic : GradientMode::Shift;
    const auto init = j.value("angle_init", std::string("uniform"));
    if (init != "uniform" && init != "zero") {
        throw ConfigError("angle_init must be 'uniform' or 'zero'");
    }
    m.angle_init = init == "uniform" ? AngleInit::Uniform : AngleInit::Zero;
    return m;
}

json trainer_json(const TrainerConfig &t) {
    return {{"actor_lr", t.actor_lr},
            {"critic_lr", t.critic_lr},
            {"gamma", t.gamma},
            {"epochs", t.epochs},
            {"clip", t.clip},
            {"update_horizon", t.update_horizon},
            {"max_episodes", t.max_episodes},
            {"normalize_advantages", t.normalize_advantages},
            {"entropy_coef", t.entropy_coef},
            {"use_gae", t.use_gae},
            {"gae_lambda", t.gae_lambda},
            {"reward_scale", t.reward_scale},
            {"freeze", t.freeze},
            {"freeze_threshold", t.freeze_threshold},
            {"freeze_window", t.freeze_window}};
}

TrainerConfig trainer_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("'trainer' must be an object");
    }
    reject_unknown(j,
                   {"actor_lr", "critic_lr", "gamma", "epochs", "clip", "update_horizon", "max_episodes",
                    "normalize_advantages", "entropy_coef", "use_gae", "gae_lambda", "reward_scale", "freeze",
                    "freeze_threshold", "freeze_window"},
                   "trainer");
    TrainerConfig t;
    if (j.contains("actor_lr")) t.actor_lr = number(j["actor_lr"], "actor_lr");
    if (j.contains("critic_lr")) t.critic_lr = number(j["critic_lr"], "critic_lr");
    if (j.contains("gamma")) t.gamma = number(j["gamma"], "gamma");
    if (j.contains("epochs")) t.epochs = integer<int>(j["epochs"], "epochs");
    if (j.contains("clip")) t.clip = number(j["clip"], "clip");
    if (j.contains("update_horizon")) t.update_horizon = integer<int>(j["update_horizon"], "update_horizon");
    if (j.contains("max_episodes")) t.max_episodes = integer<int>(j["max_episodes"], "max_episodes");
    if (j.contains("normalize_advantages"))
        t.normalize_advantages = boolean(j["normalize_advantages"], "normalize_advantages");
    if (j.contains("entropy_coef")) t.entropy_coef = number(j["entropy_coef"], "entropy_coef");
    if (j.contains("use_gae")) t.use_gae = boolean(j["use_gae"], "use_gae");
    if (j.contains("gae_lambda")) t.gae_lambda = number(j["gae_lambda"], "gae_lambda");
    if (j.contains("reward_scale")) t.reward_scale = number(j["reward_scale"], "reward_scale");
    if (j.contains("freeze")) t.freeze = boolean(j["freeze"], "freeze");
    if (j.contains("freeze_threshold")) t.freeze_threshold = number(j["freeze_threshold"], "freeze_threshold");
    if (j.contains("freeze_window")) t.freeze_window = integer<std::size_t>(j["freeze_window"], "freeze_window");
    return t;
}

json noise_json(const NoiseModel &n) {
    json j{{"p_readout", n.p_readout}, {"p_gate", n.p_gate}};
    j["shots"] = n.shots ? json(*n.shots) : json(nullptr);
    return j;
}

NoiseModel noise_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("'noise' must be an object");
    }
    reject_unknown(j, {"p_readout", "p_gate", "shots"}, "noise");
    NoiseModel n;
    if (j.contains("p_readout")) n.p_readout = number(j["p_readout"], "p_readout");
    if (j.contains("p_gate")) n.p_gate = number(j["p_gate"], "p_gate");
    if (j.contains("shots") && !j["shots"].is_null()) {
        if (j["shots"].is_string() && j["shots"].get<std::string>() == "exact") {
            n.shots.reset();
        } else {
            n.shots = integer<std::uint64_t>(j["shots"], "shots");
        }
    }
    n.validate();
    return n;
}

json experiment_json(const ExperimentConfig &c) {
    json j{{"env", c.env},
           {"model", model_json(c.model)},
           {"trainer", trainer_json(c.trainer)},
           {"noise", noise_json(c.noise)},
           {"seeds", c.seeds}};
    if (!c.preset.empty()) {
        j["preset"] = c.preset;
    }
    if (!c.bridge.empty()) {
        j["bridge"] = c.bridge;
    }
    return j;
}

ExperimentConfig experiment_from_json(const json &j) {
    reject_unknown(j, {"preset", "env", "model", "trainer", "noise", "seeds", "bridge"}, "config");
    ExperimentConfig c;
    c.preset = j.value("preset", std::string());
    if (j.contains("env")) c.env = j["env"].get<std::string>();
    if (j.contains("model")) c.model = model_from_json(j["model"]);
    if (j.contains("trainer")) c.trainer = trainer_from_json(j["trainer"]);
    if (j.contains("noise")) c.noise = noise_from_json(j["noise"]);
    if (j.contains("seeds")) {
        c.seeds.clear();
        for (const auto &s : j["seeds"]) {
            c.seeds.push_back(integer<std::uint64_t>(s, "seeds"));
        }
    }
    if (j.contains("bridge")) c.bridge = j["bridge"].get<std::string>();
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// presets

constexpr const char *kPresets[] = {
    "cartpole-table3",   "cartpole-table3-fcn",   "acrobot-table3", "acrobot-table3-fcn",
    "lunarlander-table3", "lunarlander-table3-fcn", "cartpole-ibm",   "acrobot-ibm",
    "lunarlander-ibm",
};

ExperimentConfig svqc_base(std::string env, std::size_t d, std::size_t reuse, double alr, double clr, double gamma) {
    ExperimentConfig c;
    c.env = std::move(env);
    c.model.kind = ModelKind::Svqc;
    c.model.circuit = CircuitSpec::standard(d);
    c.model.reuse = reuse;
    c.model.angle_init = AngleInit::Zero;
    c.trainer.actor_lr = alr;
    c.trainer.critic_lr = clr;
    c.trainer.gamma = gamma;
    c.trainer.epochs = 4;
    c.trainer.clip = 0.1;
    return c;
}

ExperimentConfig fcn_base(std::string env) {
    ExperimentConfig c;
    c.env = std::move(env);
    c.model.kind = ModelKind::Fcn;
    c.model.hidden = {16, 32, 64, 32};
    c.model.activation = Activation::Tanh;
    c.trainer.actor_lr = 0.0003;
    c.trainer.critic_lr = 0.001;
    c.trainer.gamma = 0.98;
    c.trainer.epochs = 4;
    c.trainer.clip = 0.1;
    return c;
}

/// One qubit: H, Rz(a0), Ry(a1), Rz(a2), then a trainable Rx. The three
/// encoding angles mix the four CartPole features through an explicit map:
/// a0 = pole angular velocity, a1 = pole angle, a2 = cart velocity.
CircuitSpec cartpole_ibm_circuit() {
    CircuitSpec spec;
    spec.n_features = 4;
    spec.qubits = {{Gate::h(), Gate::feature(GateKind::Rz, 0), Gate::feature(GateKind::Ry, 1),
                    Gate::feature(GateKind::Rz, 2), Gate::parameter(GateKind::Rx, 0)}};
    spec.feature_map.n_features = 4;
    spec.feature_map.n_angles = 3;
    spec.feature_map.weights = {0, 0, 0, 1, //
                                0, 0, 1, 0, //
                                0, 1, 0, 0};
    spec.feature_map.offsets = {0, 0, 0};
    return spec;
}

} // namespace

std::vector<std::string> preset_names() { return {std::begin(kPresets), std::end(kPresets)}; }

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    if (name == "cartpole-table3") {
        c = svqc_base("cartpole-v1", 4, 16, 0.001, 0.01, 0.99);
        c.trainer.update_horizon = 500;
        c.trainer.max_episodes = 600;
    } else if (name == "cartpole-table3-fcn") {
        c = fcn_base("cartpole-v1");
        c.trainer.update_horizon = 500;
        c.trainer.max_episodes = 600;
    } else if (name == "acrobot-table3") {
        c = svqc_base("acrobot-v1", 6, 8, 0.004, 0.04, 0.98);
        c.trainer.max_episodes = 300;
    } else if (name == "acrobot-table3-fcn") {
        c = fcn_base("acrobot-v1");
        c.trainer.max_episodes = 300;
    } else if (name == "lunarlander-table3") {
        c = svqc_base("bridge:LunarLander-v2", 8, 8, 0.002, 0.02, 0.98);
        c.model.circuit = CircuitSpec::standard(8, 3, Replication::Spatial);
        c.trainer.freeze = true;
        c.trainer.max_episodes = 2000;
        c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else if (name == "lunarlander-table3-fcn") {
        c = fcn_base("bridge:LunarLander-v2");
        c.trainer.max_episodes = 2000;
    } else if (name == "cartpole-ibm") {
        c = svqc_base("cartpole-v0", 4, 1, 0.004, 0.04, 0.99);
        c.model.circuit = cartpole_ibm_circuit();
        c.trainer.max_episodes = 2000;
        c.noise.p_readout = 0.0116; // ibmq_lagos
        c.noise.shots = 1024;
    } else if (name == "acrobot-ibm") {
        c = svqc_base("acrobot-v1", 6, 1, 0.004, 0.04, 0.98);
        c.trainer.max_episodes = 300;
        c.noise.p_readout = 0.0246; // ibmq_belem
        c.noise.shots = 1024;
    } else if (name == "lunarlander-ibm") {
        c = svqc_base("bridge:LunarLander-v2", 8, 1, 0.002, 0.02, 0.98);
        c.model.circuit = CircuitSpec::standard(8, 3, Replication::Spatial);
        c.trainer.freeze = true;
        c.trainer.max_episodes = 2000;
        c.noise.p_readout = 0.0249; // ibmq_lima
        c.noise.shots = 8192;
    } else {
        std::string known;
        for (const char *p : kPresets) {
            known += known.empty() ? p : std::string(", ") + p;
        }
        throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }
    c.preset = std::string(name);
    return c;
}

void ExperimentConfig::validate() const {
    const EnvSpec spec = EnvSpec::lookup(env);
    trainer.validate();
    noise.validate();
    if (seeds.empty()) {
        throw ConfigError("at least one seed is required");
    }
    if (model.kind == ModelKind::Svqc) {
        model.circuit.validate();
        if (model.circuit.n_features != spec.obs_dim) {
            throw ConfigError("circuit reads " + std::to_string(model.circuit.n_features) + " features, " + spec.id +
                              " observes " + std::to_string(spec.obs_dim));
        }
        if (model.reuse == 0) {
            throw ConfigError("reuse must be >= 1");
        }
    } else {
        for (auto h : model.hidden) {
            if (h == 0) {
                throw ConfigError("hidden layer sizes must be positive");
            }
        }
    }
    if (spec.is_bridge() && bridge.empty()) {
        // The command can also be supplied on the command line; checked at launch.
    }
}

std::string config_to_text(const ExperimentConfig &config) { return experiment_json(config).dump(2) + "\n"; }

ExperimentConfig config_from_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (j.contains("preset")) {
        if (!j["preset"].is_string()) {
            throw ConfigError("'preset' must be a string");
        }
        json base = experiment_json(preset(j["preset"].get<std::string>()));
        base.merge_patch(j);
        j = std::move(base);
    }
    return experiment_from_json(j);
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str());
}

std::string fingerprint(const ExperimentConfig &config) {
    const json j{{"env", config.env},
                 {"model", model_json(config.model)},
                 {"trainer", trainer_json(config.trainer)},
                 {"noise", noise_json(config.noise)}};
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string circuit_to_text(const CircuitSpec &spec) { return circuit_json(spec).dump(); }

CircuitSpec circuit_from_text(const std::string &text) {
    try {
        return circuit_from_json(json::parse(text));
    } catch (const json::exception &e) {
        throw ConfigError(std::string("circuit is not valid JSON: ") + e.what());
    }
}

std::pair<std::unique_ptr<Network>, std::unique_ptr<Network>> build_models(const ExperimentConfig &config,
                                                                           const EnvSpec &env_spec, Rng &rng) {
    const auto &m = config.model;
    if (m.kind == ModelKind::Svqc) {
        if (m.circuit.n_features != env_spec.obs_dim) {
            throw ConfigError("circuit reads " + std::to_string(m.circuit.n_features) + " features, " + env_spec.id +
                              " observes " + std::to_string(env_spec.obs_dim));
        }
        auto actor = std::make_unique<SvqcNetwork>(
            SvqcNetwork::create(m.circuit, env_spec.n_actions, m.reuse, rng, m.gradient, m.angle_init));
        auto critic =
            std::make_unique<SvqcNetwork>(SvqcNetwork::create(m.circuit, 1, m.reuse, rng, m.gradient, m.angle_init));
        return {std::move(actor), std::move(critic)};
    }
    std::vector<std::size_t> sizes{env_spec.obs_dim};
    sizes.insert(sizes.end(), m.hidden.begin(), m.hidden.end());
    sizes.push_back(env_spec.n_actions);
    auto actor = std::make_unique<FcnNetwork>(FcnNetwork::create(sizes, m.activation, rng));
    sizes.back() = 1;
    auto critic = std::make_unique<FcnNetwork>(FcnNetwork::create(sizes, m.activation, rng));
    return {std::move(actor), std::move(critic)};
}

} // namespace svqc
