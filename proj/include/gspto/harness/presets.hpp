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

// Shipped experiment presets. The benchmark values are the selected
// hyper-parameters of the published reference runs; configs/<name>.json holds
// the same content and a test keeps the two in step.

#include "gspto/harness/config.hpp"

#include <map>
#include <string>
#include <vector>

namespace gspto {

namespace detail {

inline ExperimentConfig benchmark_base(const std::string& name, const std::string& objective, std::size_t iterations,
                                       std::vector<double> center)
{
    ExperimentConfig c;
    c.name = name;
    c.objective.name = objective;
    c.objective.dimension = 2;
    c.optimizer.samples = 100;
    c.optimizer.iterations = iterations;
    c.optimizer.init.kind = InitialPoint::Kind::gaussian;
    c.optimizer.init.center = std::move(center);
    c.optimizer.init.cov_scale = 0.01;
    c.trials = 100;
    c.seed = 1;
    return c;
}

inline ExperimentConfig gspto_preset(ExperimentConfig c, Algorithm a, double power, double sigma, double alpha0)
{
    c.optimizer.algorithm = a;
    c.optimizer.power = power;
    c.optimizer.sigma = sigma;
    c.optimizer.schedule = LearningRateSchedule::hyperbolic_decay(alpha0);
    return c;
}

inline ExperimentConfig homotopy_preset(ExperimentConfig c, double alpha, double decay, double sigma)
{
    c.optimizer.algorithm = Algorithm::std_homotopy;
    c.optimizer.sigma = sigma;
    c.optimizer.schedule = LearningRateSchedule::hyperbolic_decay(alpha);
    c.optimizer.homotopy = HomotopyParams{10, 500, 100, decay};
    return c;
}

inline ExperimentConfig zo_preset(ExperimentConfig c, double alpha, double sigma)
{
    c.optimizer.algorithm = Algorithm::zo_sgd;
    c.optimizer.sigma = sigma;
    c.optimizer.schedule = LearningRateSchedule::hyperbolic_decay(alpha);
    return c;
}

inline ExperimentConfig sweep_preset(const std::string& name, Algorithm a, std::vector<double> powers, double shift)
{
    ExperimentConfig c;
    c.name = name;
    c.objective.name = "two_log";
    c.objective.dimension = 2;
    c.objective.shift = shift;
    c.optimizer.algorithm = a;
    c.optimizer.power = powers.front();
    c.optimizer.sigma = 0.5;
    c.optimizer.samples = 100;
    c.optimizer.iterations = 1000;
    c.optimizer.schedule = LearningRateSchedule::hyperbolic_decay(0.1);
    c.optimizer.init.kind = InitialPoint::Kind::uniform_box;
    c.optimizer.init.center = {0.0};
    c.optimizer.init.half_width = 1.0;
    c.trials = 100;
    c.seed = 1;
    c.sweep = SweepConfig{std::move(powers), {2, 5}};
    c.expect.mse_decreasing = true;
    return c;
}

} // namespace detail

/// Name -> preset. Names match the files under configs/.
inline std::map<std::string, ExperimentConfig> builtin_presets()
{
    using detail::benchmark_base;
    std::map<std::string, ExperimentConfig> p;

    const auto ackley_base = [](const std::string& n) { return benchmark_base(n, "ackley", 200, {5.0, 5.0}); };
    const auto rosen_base = [](const std::string& n) { return benchmark_base(n, "rosenbrock", 1000, {-3.0, 2.0}); };

    auto ackley_epgs = detail::gspto_preset(ackley_base("ackley_epgs"), Algorithm::epgs, 1.0, 1.0, 0.1);
    ackley_epgs.expect.mean_fitness_min = 22.6;
    ackley_epgs.expect.solution_target = std::vector<double>{0.0, 0.0};
    ackley_epgs.expect.solution_tolerance = 0.05;
    p["ackley_epgs"] = ackley_epgs;

    p["ackley_pgs"] = detail::gspto_preset(ackley_base("ackley_pgs"), Algorithm::pgs, 20.0, 1.0, 0.1);

    auto ackley_homotopy = detail::homotopy_preset(ackley_base("ackley_std_homotopy"), 0.1, 0.8, 2.0);
    ackley_homotopy.expect.mean_fitness_min = 17.0;
    p["ackley_std_homotopy"] = ackley_homotopy;

    auto ackley_zo = detail::zo_preset(ackley_base("ackley_zo_sgd"), 0.1, 1.0);
    ackley_zo.expect.mean_fitness_min = 22.5;
    p["ackley_zo_sgd"] = ackley_zo;

    auto rosen_epgs = detail::gspto_preset(rosen_base("rosenbrock_epgs"), Algorithm::epgs, 1.0, 1.0, 0.2);
    rosen_epgs.expect.mean_fitness_min = -1.0;
    rosen_epgs.expect.solution_target = std::vector<double>{1.0, 1.0};
    rosen_epgs.expect.solution_tolerance = 0.1;
    p["rosenbrock_epgs"] = rosen_epgs;

    auto rosen_pgs = detail::gspto_preset(rosen_base("rosenbrock_pgs"), Algorithm::pgs, 1.0, 1.0, 0.1);
    rosen_pgs.objective.shift = 20000.0;
    p["rosenbrock_pgs"] = rosen_pgs;

    p["rosenbrock_std_homotopy"] = detail::homotopy_preset(rosen_base("rosenbrock_std_homotopy"), 0.2, 0.2, 2.0);
    p["rosenbrock_zo_sgd"] = detail::zo_preset(rosen_base("rosenbrock_zo_sgd"), 0.001, 2.0);

    p["sweep_pgs"] = detail::sweep_preset("sweep_pgs", Algorithm::pgs, {10, 20, 30, 40, 50, 60, 65}, 10.0);
    p["sweep_epgs"] = detail::sweep_preset("sweep_epgs", Algorithm::epgs, {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5}, 0.0);

    ExperimentConfig attack;
    attack.name = "attack_toy";
    attack.optimizer.algorithm = Algorithm::epgs;
    attack.optimizer.power = 1.0;
    attack.optimizer.sigma = 0.1;
    attack.optimizer.samples = 100;
    attack.optimizer.iterations = 1500;
    attack.optimizer.schedule = LearningRateSchedule::hyperbolic_decay(0.05);
    attack.optimizer.init.kind = InitialPoint::Kind::fixed;
    attack.optimizer.init.center = {0.0};
    attack.trials = 20;
    attack.seed = 1;
    attack.attack = AttackConfig{};
    attack.expect.success_rate_min = 0.9;
    p["attack_toy"] = attack;

    return p;
}

inline ExperimentConfig builtin_preset(const std::string& name)
{
    auto presets = builtin_presets();
    const auto it = presets.find(name);
    if (it == presets.end()) {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return it->second;
}

} // namespace gspto
