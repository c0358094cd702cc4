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

// Targeted attack on a desk-scale classifier. Each instance draws a clean
// input a and a classifier, picks the hardest target T = argmin C(a), and
// maximizes f(x) = -L(x) from x = 0. An instance succeeds when any iterate
// puts the target logit more than kappa above every other logit; mu* is the
// successful iterate with the highest R^2.

#include "gspto/external.hpp"
#include "gspto/harness/experiment.hpp"
#include "gspto/harness/report.hpp"
#include "gspto/objectives.hpp"
#include "gspto/optimizers.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gspto {

struct AttackInstance
{
    std::size_t instance = 0;
    std::size_t target = 0;
    bool success = false;
    double r2 = std::numeric_limits<double>::quiet_NaN(); ///< R^2 of mu*, successful instances only
    std::size_t iterations_to_best = 0;                   ///< iteration that produced mu*
    double best_margin = -std::numeric_limits<double>::infinity(); ///< max_t (C_T - max_{i != T} C_i)
    Vector perturbation;                                            ///< mu* (or the last iterate on failure)
};

struct AttackReport
{
    std::string name;
    std::vector<AttackInstance> instances; ///< completed instances
    std::vector<TrialFailure> failures;
    double success_rate = 0.0; ///< successes / instances requested
    std::optional<Aggregate> r2;
    std::optional<Aggregate> iterations;
    Json config;

    bool partial() const { return !failures.empty(); }
};

namespace detail {

inline std::uint64_t instance_seed(std::uint64_t base, std::size_t instance)
{
    return base ^ (0x9e3779b97f4a7c15ull * (std::uint64_t(instance) + 1));
}

inline Vector clean_input(std::uint64_t base, std::size_t instance, std::size_t dimension)
{
    RngStream rng(base, (std::uint64_t(1) << 32) + instance);
    Vector a(static_cast<Eigen::Index>(dimension));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a[i] = rng.normal();
    }
    return a;
}

} // namespace detail

inline AttackInstance run_attack_instance(const ExperimentConfig& config, std::size_t instance)
{
    const AttackConfig& ac = *config.attack;
    const Vector clean = detail::clean_input(ac.classifier_seed, instance, ac.input_dim);

    Classifier classifier;
    if (ac.command.empty()) {
        classifier = AffineClassifier::random(ac.input_dim, ac.classes,
                                              detail::instance_seed(ac.classifier_seed, instance));
    } else {
        classifier = external_classifier(
            std::make_shared<ExternalScorer>(ac.command, std::chrono::milliseconds(ac.timeout_ms)));
    }

    const std::vector<double> clean_logits = classifier(clean);
    AttackLossParams params{argmin_logit(clean_logits), ac.kappa, ac.lambda};
    const Objective objective = attack_objective(classifier, clean, params);

    const OptimizerConfig oc = config.optimizer.resolve(ac.input_dim, config.seed, instance);
    const RunTrace trace = run_optimizer(objective, oc);

    AttackInstance out;
    out.instance = instance;
    out.target = params.target;
    out.perturbation = trace.final_iterate();
    for (const auto& rec : trace.records) {
        if (rec.t >= oc.iterations) {
            continue; // iterates mu_0 .. mu_{T-1}
        }
        const std::vector<double> logits = classifier(clean + rec.mu);
        const double margin = -target_gap(logits, params.target);
        out.best_margin = std::max(out.best_margin, margin);
        if (!attack_succeeds(logits, params)) {
            continue;
        }
        const double r2 = r_squared(clean, rec.mu, ac.r2);
        if (!out.success || r2 > out.r2) {
            out.success = true;
            out.r2 = r2;
            out.iterations_to_best = rec.t;
            out.perturbation = rec.mu;
        }
    }
    return out;
}

inline AttackReport toy_attack_run(const ExperimentConfig& config)
{
    config.validate();
    if (!config.attack) {
        throw ConfigError("toy_attack_run needs an attack section");
    }
    const std::size_t count = config.trials;
    std::vector<std::optional<AttackInstance>> results(count);
    std::vector<std::optional<TrialFailure>> failures(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
        try {
            results[i] = run_attack_instance(config, i);
        } catch (const RunAborted& e) {
            failures[i] = TrialFailure{i, e.iteration(), e.what()};
        } catch (const InvalidParameter& e) {
            throw ConfigError(e.what());
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            failures[i] = TrialFailure{i, std::nullopt, e.what()};
        }
    });

    AttackReport report;
    report.name = config.name;
    report.config = to_json(config);
    std::vector<double> r2;
    std::vector<double> iters;
    std::size_t successes = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (failures[i]) {
            report.failures.push_back(*failures[i]);
            continue;
        }
        const AttackInstance& inst = *results[i];
        if (inst.success) {
            ++successes;
            r2.push_back(inst.r2);
            iters.push_back(double(inst.iterations_to_best));
        }
        report.instances.push_back(inst);
    }
    report.success_rate = double(successes) / double(count);
    if (!r2.empty()) {
        report.r2 = aggregate_stats(r2);
        report.iterations = aggregate_stats(iters);
    }
    return report;
}

inline std::string attack_csv(const AttackReport& report)
{
    std::ostringstream out;
    out << "instance,target,success,r2,iterations_to_best,best_margin\n";
    for (const auto& i : report.instances) {
        out << i.instance << ',' << i.target << ',' << (i.success ? 1 : 0) << ',' << detail::fmt17(i.r2) << ','
            << i.iterations_to_best << ',' << detail::fmt17(i.best_margin) << '\n';
    }
    return out.str();
}

inline Json attack_json(const AttackReport& report)
{
    Json j;
    j["name"] = report.name;
    j["instances_requested"] = report.instances.size() + report.failures.size();
    j["instances_completed"] = report.instances.size();
    j["partial"] = report.partial();
    j["success_rate"] = report.success_rate;
    j["r2"] = report.r2 ? detail::aggregate_json(*report.r2) : Json(nullptr);
    j["iterations_to_best"] = report.iterations ? detail::aggregate_json(*report.iterations) : Json(nullptr);
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        Json fj{{"instance", f.trial}, {"error", f.error}};
        fj["iteration"] = f.iteration ? Json(*f.iteration) : Json(nullptr);
        failures.push_back(fj);
    }
    j["failures"] = failures;
    j["config"] = report.config;
    return j;
}

inline ReportPaths write_attack_report(const AttackReport& report, const std::filesystem::path& directory,
                                       const std::string& prefix)
{
    ReportPaths paths{directory / (prefix + "_instances.csv"), directory / (prefix + "_summary.json")};
    detail::write_text(paths.trials_csv, attack_csv(report));
    detail::write_text(paths.summary_json, attack_json(report).dump(2) + "\n");
    return paths;
}

} // namespace gspto
