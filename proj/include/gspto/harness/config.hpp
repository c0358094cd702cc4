/********************************************************************************
* Copyright 2026 The gspto Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#pragma once

// Experiment configuration and its JSON form.
//
// Every object in the file is read through a reader that remembers which
// keys it consumed; anything left over is a ConfigError. The schema is
// documented in README.md and mirrored by to_json below.

#include "gspto/core.hpp"
#include "gspto/objectives.hpp"
#include "gspto/optimizers.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace gspto {

using Json = nlohmann::ordered_json;

struct ObjectiveConfig
{
    /// ackley | rosenbrock | two_log | gaussian_quadratic | external
    std::string name = "ackley";
    std::size_t dimension = 2;
    double shift = 0.0;
    std::optional<double> box;               ///< domain half-width M; default depends on the objective
    std::optional<std::vector<double>> m1;   ///< two_log centres
    std::optional<std::vector<double>> m2;
    std::vector<std::string> command;        ///< external scorer argv
    std::size_t timeout_ms = 10000;
    std::optional<std::vector<double>> optimum; ///< x* for external objectives
    std::optional<double> optimum_value;        ///< raw f(x*) for external objectives
};

/// mu_0 as written in the file; a one-element centre is broadcast to d.
struct InitConfig
{
    InitialPoint::Kind kind = InitialPoint::Kind::fixed;
    std::vector<double> center{0.0};
    double cov_scale = 0.0;
    double half_width = 1.0;

    InitialPoint resolve(std::size_t dimension) const
    {
        Vector c(static_cast<Eigen::Index>(dimension));
        if (center.size() == 1) {
            c.setConstant(center[0]);
        } else if (center.size() == dimension) {
            for (std::size_t i = 0; i < dimension; ++i) {
                c[static_cast<Eigen::Index>(i)] = center[i];
            }
        } else {
            throw ConfigError("optimizer.init.center has " + std::to_string(center.size()) +
                              " entries, objective dimension is " + std::to_string(dimension));
        }
        return {kind, c, cov_scale, half_width};
    }
};

struct OptimizerSettings
{
    Algorithm algorithm = Algorithm::epgs;
    double power = 1.0;
    bool stable_weighting = true;
    bool normalize = true;
    double sigma = 1.0;
    std::size_t samples = 100;
    std::size_t iterations = 200;
    LearningRateSchedule schedule = LearningRateSchedule::hyperbolic_decay(0.1);
    InitConfig init;
    std::optional<HomotopyParams> homotopy;

    OptimizerConfig resolve(std::size_t dimension, std::uint64_t seed, std::uint64_t stream) const
    {
        OptimizerConfig c;
        c.algorithm = algorithm;
        c.mode = (algorithm == Algorithm::pgs) ? pgs(power, stable_weighting) : epgs(power, stable_weighting);
        c.sigma = sigma;
        c.samples = samples;
        c.iterations = iterations;
        c.schedule = schedule;
        c.init = init.resolve(dimension);
        c.seed = seed;
        c.stream = stream;
        c.homotopy = homotopy;
        c.normalize = normalize;
        return c;
    }
};

struct SweepConfig
{
    std::vector<double> powers;
    std::vector<std::size_t> dimensions{2};
};

/// Instances are the experiment's trials.
struct AttackConfig
{
    std::size_t input_dim = 10;
    std::size_t classes = 5;
    double kappa = 0.01;
    double lambda = 1.0;
    R2Variant r2 = R2Variant::conventional;
    std::uint64_t classifier_seed = 2024;
    std::vector<std::string> command; ///< external LOGITS scorer; empty means the built-in affine map
    std::size_t timeout_ms = 10000;
};

/// Pass/fail thresholds checked after a run; all optional.
struct Expectations
{
    std::optional<double> mean_fitness_min;
    std::optional<std::vector<double>> solution_target;
    std::optional<double> solution_tolerance;
    std::optional<double> success_rate_min;
    bool mse_decreasing = false;

    bool empty() const
    {
        return !mean_fitness_min && !solution_target && !success_rate_min && !mse_decreasing;
    }
};

struct OutputConfig
{
    std::optional<std::string> directory;
    std::string prefix;
};

inline const std::vector<std::string>& all_metrics()
{
    static const std::vector<std::string> m{"fitness", "mse_to_optimum", "iterations_to_best"};
    return m;
}

struct ExperimentConfig
{
    std::string name = "experiment";
    ObjectiveConfig objective;
    OptimizerSettings optimizer;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 0; ///< 0 = hardware concurrency
    std::vector<std::string> metrics = all_metrics();
    std::optional<SweepConfig> sweep;
    std::optional<AttackConfig> attack;
    Expectations expect;
    OutputConfig output;

    std::string output_prefix() const { return output.prefix.empty() ? name : output.prefix; }

    void validate() const
    {
        if (trials == 0) {
            throw ConfigError("trials must be at least 1");
        }
        for (const auto& m : metrics) {
            if (std::find(all_metrics().begin(), all_metrics().end(), m) == all_metrics().end()) {
                throw ConfigError("unknown metric '" + m + "'");
            }
        }
        if (objective.name == "external" && objective.command.empty()) {
            throw ConfigError("objective.command is required for external objectives");
        }
        if (sweep) {
            if (sweep->powers.empty()) {
                throw ConfigError("sweep.powers must not be empty");
            }
            for (std::size_t i = 1; i < sweep->powers.size(); ++i) {
                if (!(sweep->powers[i] > sweep->powers[i - 1])) {
                    throw ConfigError("sweep.powers must be strictly increasing");
                }
            }
            if (sweep->dimensions.empty()) {
                throw ConfigError("sweep.dimensions must not be empty");
            }
        }
        if (attack) {
            if (attack->input_dim == 0 || attack->classes < 2) {
                throw ConfigError("attack needs input_dim >= 1 and classes >= 2");
            }
            if (attack->command.empty() && (attack->input_dim > 20 || attack->classes > 5)) {
                throw ConfigError("built-in affine classifier is limited to input_dim <= 20 and classes <= 5");
            }
            AttackLossParams{0, attack->kappa, attack->lambda}.validate();
        }
        if (expect.solution_target && !expect.solution_tolerance) {
            throw ConfigError("expect.solution_target needs expect.solution_tolerance");
        }
    }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

/// Reads keys from one JSON object and rejects the ones nobody asked for.
class ObjectReader
{
public:
    ObjectReader(const Json& node, std::string path)
        : node_(node)
        , path_(std::move(path))
    {
        if (!node_.is_object()) {
            throw ConfigError(path_ + " must be an object");
        }
    }

    bool has(const std::string& key)
    {
        seen_.insert(key);
        return node_.contains(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback)
    {
        if (!has(key)) {
            return fallback;
        }
        return convert<T>(node_.at(key), key);
    }

    template <typename T>
    std::optional<T> optional(const std::string& key)
    {
        if (!has(key) || node_.at(key).is_null()) {
            return std::nullopt;
        }
        return convert<T>(node_.at(key), key);
    }

    const Json& child(const std::string& key)
    {
        seen_.insert(key);
        return node_.at(key);
    }

    std::string where(const std::string& key) const { return path_ + "." + key; }

    void finish() const
    {
        for (const auto& item : node_.items()) {
            if (!seen_.count(item.key())) {
                throw ConfigError("unknown key '" + path_ + "." + item.key() + "'");
            }
        }
    }

private:
    template <typename T>
    T convert(const Json& value, const std::string& key) const
    {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!value.is_number()) {
                    throw ConfigError(where(key) + " must be a number");
                }
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                                   value.get<std::int64_t>() < 0)) {
                    throw ConfigError(where(key) + " must be a non-negative integer");
                }
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!value.is_boolean()) {
                    throw ConfigError(where(key) + " must be true or false");
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!value.is_string()) {
                    throw ConfigError(where(key) + " must be a string");
                }
            }
            return value.get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where(key) + ": " + e.what());
        }
    }

    const Json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Algorithm parse_algorithm(const std::string& s)
{
    if (s == "pgs") {
        return Algorithm::pgs;
    }
    if (s == "epgs") {
        return Algorithm::epgs;
    }
    if (s == "std_homotopy") {
        return Algorithm::std_homotopy;
    }
    if (s == "zo_sgd") {
        return Algorithm::zo_sgd;
    }
    throw ConfigError("unknown algorithm '" + s + "' (expected pgs, epgs, std_homotopy or zo_sgd)");
}

inline const char* schedule_name(ScheduleKind k)
{
    switch (k) {
    case ScheduleKind::power:
        return "power";
    case ScheduleKind::hyperbolic:
        return "hyperbolic";
    case ScheduleKind::constant:
        break;
    }
    return "constant";
}

inline ScheduleKind parse_schedule_kind(const std::string& s)
{
    if (s == "power") {
        return ScheduleKind::power;
    }
    if (s == "hyperbolic") {
        return ScheduleKind::hyperbolic;
    }
    if (s == "constant") {
        return ScheduleKind::constant;
    }
    throw ConfigError("unknown schedule kind '" + s + "' (expected power, hyperbolic or constant)");
}

inline const char* init_name(InitialPoint::Kind k)
{
    switch (k) {
    case InitialPoint::Kind::gaussian:
        return "gaussian";
    case InitialPoint::Kind::uniform_box:
        return "uniform";
    case InitialPoint::Kind::fixed:
        break;
    }
    return "fixed";
}

inline InitialPoint::Kind parse_init_kind(const std::string& s)
{
    if (s == "fixed") {
        return InitialPoint::Kind::fixed;
    }
    if (s == "gaussian") {
        return InitialPoint::Kind::gaussian;
    }
    if (s == "uniform") {
        return InitialPoint::Kind::uniform_box;
    }
    throw ConfigError("unknown init kind '" + s + "' (expected fixed, gaussian or uniform)");
}

inline R2Variant parse_r2(const std::string& s)
{
    if (s == "conventional") {
        return R2Variant::conventional;
    }
    if (s == "ratio") {
        return R2Variant::ratio;
    }
    throw ConfigError("unknown r2 variant '" + s + "' (expected conventional or ratio)");
}

inline std::vector<double> number_list(const Json& value, const std::string& where)
{
    if (value.is_number()) {
        return {value.get<double>()};
    }
    if (!value.is_array() || value.empty()) {
        throw ConfigError(where + " must be a number or a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : value) {
        if (!v.is_number()) {
            throw ConfigError(where + " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

inline std::vector<std::string> string_list(const Json& value, const std::string& where)
{
    if (!value.is_array()) {
        throw ConfigError(where + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& v : value) {
        if (!v.is_string()) {
            throw ConfigError(where + " must contain only strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline ObjectiveConfig parse_objective(const Json& node)
{
    ObjectReader r(node, "objective");
    ObjectiveConfig o;
    o.name = r.get<std::string>("name", o.name);
    o.dimension = r.get<std::size_t>("dimension", o.dimension);
    o.shift = r.get<double>("shift", o.shift);
    o.box = r.optional<double>("box");
    if (r.has("m1")) {
        o.m1 = number_list(r.child("m1"), r.where("m1"));
    }
    if (r.has("m2")) {
        o.m2 = number_list(r.child("m2"), r.where("m2"));
    }
    if (r.has("command")) {
        o.command = string_list(r.child("command"), r.where("command"));
    }
    o.timeout_ms = r.get<std::size_t>("timeout_ms", o.timeout_ms);
    if (r.has("optimum")) {
        o.optimum = number_list(r.child("optimum"), r.where("optimum"));
    }
    o.optimum_value = r.optional<double>("optimum_value");
    r.finish();
    static const std::set<std::string> known{"ackley", "rosenbrock", "two_log", "gaussian_quadratic", "external"};
    if (!known.count(o.name)) {
        throw ConfigError("unknown objective '" + o.name + "'");
    }
    if (o.dimension == 0) {
        throw ConfigError("objective.dimension must be positive");
    }
    return o;
}

inline OptimizerSettings parse_optimizer(const Json& node)
{
    ObjectReader r(node, "optimizer");
    OptimizerSettings s;
    s.algorithm = parse_algorithm(r.get<std::string>("algorithm", to_string(s.algorithm)));
    s.power = r.get<double>("power", s.power);
    s.stable_weighting = r.get<bool>("stable_weighting", s.stable_weighting);
    s.normalize = r.get<bool>("normalize", s.normalize);
    s.sigma = r.get<double>("sigma", s.sigma);
    s.samples = r.get<std::size_t>("samples", s.samples);
    s.iterations = r.get<std::size_t>("iterations", s.iterations);
    if (r.has("schedule")) {
        ObjectReader sr(r.child("schedule"), "optimizer.schedule");
        s.schedule.kind = parse_schedule_kind(sr.get<std::string>("kind", schedule_name(s.schedule.kind)));
        s.schedule.alpha0 = sr.get<double>("alpha0", s.schedule.alpha0);
        s.schedule.gamma = sr.get<double>("gamma", s.schedule.gamma);
        sr.finish();
    }
    if (r.has("init")) {
        ObjectReader ir(r.child("init"), "optimizer.init");
        s.init.kind = parse_init_kind(ir.get<std::string>("kind", init_name(s.init.kind)));
        if (ir.has("center")) {
            s.init.center = number_list(ir.child("center"), ir.where("center"));
        }
        s.init.cov_scale = ir.get<double>("cov_scale", s.init.cov_scale);
        s.init.half_width = ir.get<double>("half_width", s.init.half_width);
        ir.finish();
    }
    if (r.has("homotopy")) {
        ObjectReader hr(r.child("homotopy"), "optimizer.homotopy");
        HomotopyParams h;
        h.max_sigma_updates = hr.get<std::size_t>("max_sigma_updates", h.max_sigma_updates);
        h.max_inner_updates = hr.get<std::size_t>("max_inner_updates", h.max_inner_updates);
        h.patience = hr.get<std::size_t>("patience", h.patience);
        h.decay = hr.get<double>("decay", h.decay);
        hr.finish();
        s.homotopy = h;
    }
    r.finish();
    return s;
}

} // namespace detail

inline ExperimentConfig parse_config(const Json& root)
{
    detail::ObjectReader r(root, "config");
    ExperimentConfig c;
    c.name = r.get<std::string>("name", c.name);
    if (r.has("objective")) {
        c.objective = detail::parse_objective(r.child("objective"));
    }
    if (r.has("optimizer")) {
        c.optimizer = detail::parse_optimizer(r.child("optimizer"));
    }
    c.trials = r.get<std::size_t>("trials", c.trials);
    c.seed = r.get<std::uint64_t>("seed", c.seed);
    c.threads = r.get<std::size_t>("threads", c.threads);
    if (r.has("metrics")) {
        c.metrics = detail::string_list(r.child("metrics"), "config.metrics");
    }
    if (r.has("sweep")) {
        detail::ObjectReader sr(r.child("sweep"), "sweep");
        SweepConfig s;
        if (sr.has("powers")) {
            s.powers = detail::number_list(sr.child("powers"), "sweep.powers");
        }
        if (sr.has("dimensions")) {
            s.dimensions.clear();
            for (double d : detail::number_list(sr.child("dimensions"), "sweep.dimensions")) {
                if (!(d >= 1.0) || d != std::floor(d)) {
                    throw ConfigError("sweep.dimensions must be positive integers");
                }
                s.dimensions.push_back(static_cast<std::size_t>(d));
            }
        }
        sr.finish();
        c.sweep = s;
    }
    if (r.has("attack")) {
        detail::ObjectReader ar(r.child("attack"), "attack");
        AttackConfig a;
        a.input_dim = ar.get<std::size_t>("input_dim", a.input_dim);
        a.classes = ar.get<std::size_t>("classes", a.classes);
        a.kappa = ar.get<double>("kappa", a.kappa);
        a.lambda = ar.get<double>("lambda", a.lambda);
        a.r2 = detail::parse_r2(ar.get<std::string>("r2", "conventional"));
        a.classifier_seed = ar.get<std::uint64_t>("classifier_seed", a.classifier_seed);
        if (ar.has("command")) {
            a.command = detail::string_list(ar.child("command"), "attack.command");
        }
        a.timeout_ms = ar.get<std::size_t>("timeout_ms", a.timeout_ms);
        ar.finish();
        c.attack = a;
        if (r.has("objective")) {
            throw ConfigError("attack configs build their own objective; remove the objective section");
        }
    }
    if (r.has("expect")) {
        detail::ObjectReader er(r.child("expect"), "expect");
        c.expect.mean_fitness_min = er.optional<double>("mean_fitness_min");
        if (er.has("solution_target")) {
            c.expect.solution_target = detail::number_list(er.child("solution_target"), "expect.solution_target");
        }
        c.expect.solution_tolerance = er.optional<double>("solution_tolerance");
        c.expect.success_rate_min = er.optional<double>("success_rate_min");
        c.expect.mse_decreasing = er.get<bool>("mse_decreasing", false);
        er.finish();
    }
    if (r.has("output")) {
        detail::ObjectReader orr(r.child("output"), "output");
        c.output.directory = orr.optional<std::string>("directory");
        c.output.prefix = orr.get<std::string>("prefix", "");
        orr.finish();
    }
    r.finish();
    c.validate();
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text)
{
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Serialization (canonical, every field spelled out)
// ---------------------------------------------------------------------------

inline Json to_json(const ExperimentConfig& c)
{
    Json j;
    j["name"] = c.name;

    Json o;
    o["name"] = c.objective.name;
    const bool emit_objective = !c.attack;
    o["dimension"] = c.objective.dimension;
    o["shift"] = c.objective.shift;
    o["box"] = c.objective.box ? Json(*c.objective.box) : Json(nullptr);
    if (c.objective.m1) {
        o["m1"] = *c.objective.m1;
    }
    if (c.objective.m2) {
        o["m2"] = *c.objective.m2;
    }
    if (!c.objective.command.empty()) {
        o["command"] = c.objective.command;
        o["timeout_ms"] = c.objective.timeout_ms;
    }
    if (c.objective.optimum) {
        o["optimum"] = *c.objective.optimum;
    }
    if (c.objective.optimum_value) {
        o["optimum_value"] = *c.objective.optimum_value;
    }
    if (emit_objective) {
        j["objective"] = o;
    }

    const auto& s = c.optimizer;
    Json p;
    p["algorithm"] = to_string(s.algorithm);
    p["power"] = s.power;
    p["stable_weighting"] = s.stable_weighting;
    p["normalize"] = s.normalize;
    p["sigma"] = s.sigma;
    p["samples"] = s.samples;
    p["iterations"] = s.iterations;
    p["schedule"] = {{"kind", detail::schedule_name(s.schedule.kind)},
                     {"alpha0", s.schedule.alpha0},
                     {"gamma", s.schedule.gamma}};
    p["init"] = {{"kind", detail::init_name(s.init.kind)},
                 {"center", s.init.center},
                 {"cov_scale", s.init.cov_scale},
                 {"half_width", s.init.half_width}};
    if (s.homotopy) {
        p["homotopy"] = {{"max_sigma_updates", s.homotopy->max_sigma_updates},
                         {"max_inner_updates", s.homotopy->max_inner_updates},
                         {"patience", s.homotopy->patience},
                         {"decay", s.homotopy->decay}};
    }
    j["optimizer"] = p;

    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["metrics"] = c.metrics;
    if (c.sweep) {
        j["sweep"] = {{"powers", c.sweep->powers}, {"dimensions", c.sweep->dimensions}};
    }
    if (c.attack) {
        Json a;
        a["input_dim"] = c.attack->input_dim;
        a["classes"] = c.attack->classes;
        a["kappa"] = c.attack->kappa;
        a["lambda"] = c.attack->lambda;
        a["r2"] = c.attack->r2 == R2Variant::conventional ? "conventional" : "ratio";
        a["classifier_seed"] = c.attack->classifier_seed;
        if (!c.attack->command.empty()) {
            a["command"] = c.attack->command;
            a["timeout_ms"] = c.attack->timeout_ms;
        }
        j["attack"] = a;
    }
    if (!c.expect.empty()) {
        Json e = Json::object();
        if (c.expect.mean_fitness_min) {
            e["mean_fitness_min"] = *c.expect.mean_fitness_min;
        }
        if (c.expect.solution_target) {
            e["solution_target"] = *c.expect.solution_target;
            e["solution_tolerance"] = *c.expect.solution_tolerance;
        }
        if (c.expect.success_rate_min) {
            e["success_rate_min"] = *c.expect.success_rate_min;
        }
        if (c.expect.mse_decreasing) {
            e["mse_decreasing"] = true;
        }
        j["expect"] = e;
    }
    Json out = Json::object();
    if (c.output.directory) {
        out["directory"] = *c.output.directory;
    }
    if (!c.output.prefix.empty()) {
        out["prefix"] = c.output.prefix;
    }
    j["output"] = out;
    return j;
}

} // namespace gspto
