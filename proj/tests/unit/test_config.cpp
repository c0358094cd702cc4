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


#include "gspto/harness/config.hpp"
#include "gspto/harness/presets.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace gspto;

namespace {

const char* minimal = R"({
  "name": "mini",
  "objective": {"name": "ackley", "dimension": 2},
  "optimizer": {"algorithm": "epgs", "power": 1, "sigma": 1.0, "samples": 10, "iterations": 20,
                "init": {"kind": "gaussian", "center": [5, 5], "cov_scale": 0.01}},
  "trials": 3
})";

Json minimal_json() { return Json::parse(minimal); }

} // namespace

TEST(Config, ParsesMinimal)
{
    const auto c = parse_config_text(minimal);
    EXPECT_EQ(c.name, "mini");
    EXPECT_EQ(c.objective.name, "ackley");
    EXPECT_EQ(c.optimizer.samples, 10u);
    EXPECT_EQ(c.trials, 3u);
    EXPECT_EQ(c.seed, 1u);
    EXPECT_EQ(c.optimizer.init.kind, InitialPoint::Kind::gaussian);
    EXPECT_EQ(c.optimizer.schedule.kind, ScheduleKind::hyperbolic);
}

TEST(Config, UnknownKeysRejectedAtEveryLevel)
{
    for (const char* path : {"/sigma_typo", "/objective/dimensoin", "/optimizer/sigmaa", "/optimizer/init/centre"}) {
        Json j = minimal_json();
        j[Json::json_pointer(path)] = 1;
        EXPECT_THROW(parse_config(j), ConfigError) << path;
    }
}

TEST(Config, TypeErrorsRejected)
{
    Json j = minimal_json();
    j["trials"] = "many";
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal_json();
    j["optimizer"]["sigma"] = Json::array({1, 2});
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal_json();
    j["trials"] = -4;
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, InvalidValuesRejected)
{
    Json j = minimal_json();
    j["trials"] = 0;
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal_json();
    j["optimizer"]["algorithm"] = "adam";
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal_json();
    j["metrics"] = Json::array({"fitness", "regret"});
    EXPECT_THROW(parse_config(j), ConfigError);
    j = minimal_json();
    j["sweep"] = {{"powers", {3, 2}}};
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, MalformedTextAndMissingFile)
{
    EXPECT_THROW(parse_config_text("{ not json"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.json"), ConfigError);
}

TEST(Config, AttackSectionExcludesObjective)
{
    Json j = minimal_json();
    j["attack"] = Json::object();
    EXPECT_THROW(parse_config(j), ConfigError);
    j.erase("objective");
    EXPECT_NO_THROW(parse_config(j));
}

TEST(Config, RoundTripIsCanonical)
{
    for (const auto& [name, preset] : builtin_presets()) {
        const Json once = to_json(preset);
        const Json twice = to_json(parse_config(once));
        EXPECT_EQ(once, twice) << name;
    }
}

TEST(Config, ShippedFilesMatchPresets)
{
    std::size_t seen = 0;
    for (const auto& [name, preset] : builtin_presets()) {
        const auto path = std::filesystem::path(GSPTO_CONFIG_DIR) / (name + ".json");
        ASSERT_TRUE(std::filesystem::exists(path)) << path;
        EXPECT_EQ(to_json(load_config(path.string())), to_json(preset)) << name;
        ++seen;
    }
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(GSPTO_CONFIG_DIR)) {
        files += entry.path().extension() == ".json";
    }
    EXPECT_EQ(files, seen);
}

TEST(Presets, SelectedValuesVerbatim)
{
    const auto p = builtin_presets();
    const auto& ae = p.at("ackley_epgs");
    EXPECT_EQ(ae.optimizer.algorithm, Algorithm::epgs);
    EXPECT_EQ(ae.optimizer.power, 1.0);
    EXPECT_EQ(ae.optimizer.sigma, 1.0);
    EXPECT_EQ(ae.optimizer.schedule.alpha0, 0.1);
    EXPECT_EQ(ae.optimizer.iterations, 200u);
    EXPECT_EQ(ae.optimizer.samples, 100u);
    EXPECT_EQ(ae.optimizer.init.center, (std::vector<double>{5.0, 5.0}));
    EXPECT_EQ(ae.optimizer.init.cov_scale, 0.01);
    EXPECT_EQ(ae.trials, 100u);

    EXPECT_EQ(p.at("ackley_pgs").optimizer.power, 20.0);

    const auto& ah = p.at("ackley_std_homotopy");
    EXPECT_EQ(ah.optimizer.schedule.alpha0, 0.1);
    EXPECT_EQ(ah.optimizer.sigma, 2.0);
    ASSERT_TRUE(ah.optimizer.homotopy);
    EXPECT_EQ(ah.optimizer.homotopy->decay, 0.8);
    EXPECT_EQ(ah.optimizer.homotopy->max_sigma_updates, 10u);
    EXPECT_EQ(ah.optimizer.homotopy->max_inner_updates, 500u);
    EXPECT_EQ(ah.optimizer.homotopy->patience, 100u);

    EXPECT_EQ(p.at("ackley_zo_sgd").optimizer.schedule.alpha0, 0.1);
    EXPECT_EQ(p.at("ackley_zo_sgd").optimizer.sigma, 1.0);

    const auto& re = p.at("rosenbrock_epgs");
    EXPECT_EQ(re.optimizer.schedule.alpha0, 0.2);
    EXPECT_EQ(re.optimizer.iterations, 1000u);
    EXPECT_EQ(re.optimizer.init.center, (std::vector<double>{-3.0, 2.0}));

    EXPECT_EQ(p.at("rosenbrock_pgs").objective.shift, 20000.0);
    EXPECT_EQ(p.at("rosenbrock_std_homotopy").optimizer.homotopy->decay, 0.2);
    EXPECT_EQ(p.at("rosenbrock_std_homotopy").optimizer.schedule.alpha0, 0.2);
    EXPECT_EQ(p.at("rosenbrock_zo_sgd").optimizer.schedule.alpha0, 0.001);
    EXPECT_EQ(p.at("rosenbrock_zo_sgd").optimizer.sigma, 2.0);

    EXPECT_EQ(p.at("sweep_pgs").sweep->powers, (std::vector<double>{10, 20, 30, 40, 50, 60, 65}));
    EXPECT_EQ(p.at("sweep_epgs").sweep->powers, (std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5}));
    EXPECT_EQ(p.at("sweep_pgs").objective.shift, 10.0);
    EXPECT_EQ(p.at("sweep_pgs").sweep->dimensions, (std::vector<std::size_t>{2, 5}));

    const auto& at = p.at("attack_toy");
    EXPECT_EQ(at.trials, 20u);
    EXPECT_EQ(at.attack->kappa, 0.01);
    EXPECT_EQ(at.attack->lambda, 1.0);
    EXPECT_EQ(at.optimizer.iterations, 1500u);
    EXPECT_THROW(builtin_preset("nope"), ConfigError);
}
