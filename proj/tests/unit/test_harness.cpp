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


#include "gspto/harness/experiment.hpp"
#include "gspto/harness/report.hpp"
#include "gspto/harness/stats.hpp"
#include "gspto/harness/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gspto;

namespace {

ExperimentConfig small_ackley(std::size_t trials = 6)
{
    ExperimentConfig c;
    c.name = "small";
    c.objective.name = "ackley";
    c.objective.dimension = 2;
    c.optimizer.algorithm = Algorithm::epgs;
    c.optimizer.samples = 20;
    c.optimizer.iterations = 40;
    c.optimizer.init.kind = InitialPoint::Kind::gaussian;
    c.optimizer.init.center = {3.0, 3.0};
    c.optimizer.init.cov_scale = 0.01;
    c.trials = trials;
    c.seed = 17;
    return c;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("gspto_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST(AggregateStats, Examples)
{
    const auto a = aggregate_stats(std::vector<double>{1, 2, 3});
    EXPECT_EQ(a.mean, 2.0);
    EXPECT_EQ(a.stddev, 1.0);
    EXPECT_EQ(a.count, 3u);
    const auto b = aggregate_stats(std::vector<double>{5});
    EXPECT_EQ(b.mean, 5.0);
    EXPECT_EQ(b.stddev, 0.0);
    const auto c = aggregate_stats(std::vector<double>{0, 0, 0, 0});
    EXPECT_EQ(c.mean, 0.0);
    EXPECT_EQ(c.stddev, 0.0);
    EXPECT_THROW(aggregate_stats(std::vector<double>{}), InvalidInput);
}

TEST(Spearman, RanksWithTies)
{
    EXPECT_DOUBLE_EQ(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{10, 20, 30, 40}), 1.0);
    EXPECT_DOUBLE_EQ(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{4, 3, 2, 1}), -1.0);
    // x ranks 1..4, y ranks 1, 2.5, 2.5, 4: Pearson on ranks.
    const double rho = spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 5, 5, 9});
    EXPECT_NEAR(rho, 4.5 / std::sqrt(5.0 * 4.5), 1e-15);
}

TEST(MseTo, AveragesOverCoordinates)
{
    EXPECT_DOUBLE_EQ(mse_to(make_vector({0.5, -0.5}), make_vector({-0.5, -0.5})), 0.5);
}

TEST(RunExperiment, SingleTrialAggregateIsTheTrial)
{
    const auto r = run_experiment(small_ackley(1));
    ASSERT_EQ(r.trials.size(), 1u);
    EXPECT_EQ(r.metric("fitness").mean, r.trials[0].best_fitness);
    EXPECT_EQ(r.metric("fitness").stddev, 0.0);
    EXPECT_EQ(r.metric("mse_to_optimum").mean, r.trials[0].mse);
    EXPECT_EQ(r.metric("iterations_to_best").mean, double(r.trials[0].iterations_to_best));
    EXPECT_EQ(r.mean_solution(), r.trials[0].solution);
}

TEST(RunExperiment, RerunIsByteIdentical)
{
    const auto a = run_experiment(small_ackley());
    const auto b = run_experiment(small_ackley());
    EXPECT_EQ(trials_csv(a), trials_csv(b));
    EXPECT_EQ(summary_json(a).dump(), summary_json(b).dump());
}

TEST(RunExperiment, ThreadCountDoesNotChangeResults)
{
    auto one = small_ackley(8);
    one.threads = 1;
    auto many = small_ackley(8);
    many.threads = 4;
    EXPECT_EQ(trials_csv(run_experiment(one)), trials_csv(run_experiment(many)));
}

TEST(RunExperiment, TrialOrderDoesNotMatter)
{
    const auto config = small_ackley(5);
    const auto report = run_experiment(config);
    const auto factory = objective_factory(config.objective);
    for (std::size_t k = config.trials; k-- > 0;) {
        const auto out = run_trial(factory, config, k);
        ASSERT_TRUE(out.result);
        EXPECT_EQ(out.result->solution, report.trials[k].solution);
        EXPECT_EQ(out.result->best_fitness, report.trials[k].best_fitness);
    }
}

TEST(RunExperiment, SeedChangesResults)
{
    auto other = small_ackley();
    other.seed = 18;
    EXPECT_NE(trials_csv(run_experiment(small_ackley())), trials_csv(run_experiment(other)));
}

TEST(RunExperiment, ShiftIsRemovedFromFitness)
{
    auto shifted = small_ackley(2);
    shifted.optimizer.algorithm = Algorithm::zo_sgd;
    auto plain = shifted;
    shifted.objective.shift = 100.0;
    const auto a = run_experiment(plain);
    const auto b = run_experiment(shifted);
    // ZO-SGD differences are shift-free, so the trajectories coincide up to rounding.
    EXPECT_NEAR(a.trials[0].best_fitness, b.trials[0].best_fitness, 1e-9);
}

TEST(RunExperiment, AbortedTrialsAreRecordedAndExcluded)
{
    const auto config = small_ackley(4);
    const ObjectiveFactory factory = [](std::size_t trial) {
        if (trial != 2) {
            return ackley();
        }
        return Objective("broken", 2, [](const Vector&) -> double { throw InvalidInput("scorer is down"); });
    };
    const auto r = run_experiment(config, factory);
    EXPECT_TRUE(r.partial());
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].trial, 2u);
    ASSERT_TRUE(r.failures[0].iteration);
    EXPECT_EQ(*r.failures[0].iteration, 0u);
    EXPECT_EQ(r.trials.size(), 3u);
    EXPECT_EQ(r.metric("fitness").count, 3u);
    const auto json = summary_json(r);
    EXPECT_TRUE(json["partial"].get<bool>());
    EXPECT_EQ(json["trials_completed"].get<std::size_t>(), 3u);
    EXPECT_EQ(parse_trials_csv(trials_csv(r)).size(), 3u);
}

TEST(RunExperiment, BadOptimizerSettingIsConfigError)
{
    auto c = small_ackley(2);
    c.optimizer.sigma = -1.0;
    EXPECT_THROW(run_experiment(c), ConfigError);
    c = small_ackley(2);
    c.objective.dimension = 3;
    EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Report, AggregatesRecomputeExactlyFromCsv)
{
    const auto report = run_experiment(small_ackley(7));
    const auto dir = scratch_dir("integrity");
    const auto paths = write_report(report, dir, "small");
    const auto rows = parse_trials_csv(slurp(paths.trials_csv));
    const Json summary = Json::parse(slurp(paths.summary_json));
    ASSERT_EQ(rows.size(), 7u);

    std::vector<double> fit;
    std::vector<double> mse;
    std::vector<double> itb;
    for (const auto& r : rows) {
        fit.push_back(r.best_fitness);
        mse.push_back(r.mse);
        itb.push_back(double(r.iterations_to_best));
    }
    const auto check = [&](const char* key, const std::vector<double>& values) {
        const auto a = aggregate_stats(values);
        EXPECT_EQ(summary["aggregates"][key]["mean"].get<double>(), a.mean) << key;
        EXPECT_EQ(summary["aggregates"][key]["std"].get<double>(), a.stddev) << key;
        EXPECT_EQ(summary["aggregates"][key]["count"].get<std::size_t>(), a.count) << key;
    };
    check("fitness", fit);
    check("mse_to_optimum", mse);
    check("iterations_to_best", itb);
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> coord;
        for (const auto& r : rows) {
            coord.push_back(r.solution[static_cast<Eigen::Index>(i)]);
        }
        EXPECT_EQ(summary["mean_solution"][i]["mean"].get<double>(), aggregate_stats(coord).mean);
    }
    std::filesystem::remove_all(dir);
}

TEST(Report, CsvHeaderAndColumns)
{
    const auto report = run_experiment(small_ackley(2));
    const std::string csv = trials_csv(report);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,best_fitness,mse,iterations_to_best,x1,x2");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Report, MetricSubsetFiltersAggregates)
{
    auto c = small_ackley(2);
    c.metrics = {"fitness"};
    const auto json = summary_json(run_experiment(c));
    EXPECT_TRUE(json["aggregates"].contains("fitness"));
    EXPECT_FALSE(json["aggregates"].contains("mse_to_optimum"));
}

TEST(Report, DefaultDirectoryFromEnvironment)
{
    ::setenv("GSPTO_OUT_DIR", "/tmp/somewhere", 1);
    EXPECT_EQ(default_output_directory(), std::filesystem::path("/tmp/somewhere"));
    ::unsetenv("GSPTO_OUT_DIR");
    EXPECT_EQ(default_output_directory(), std::filesystem::path("gspto_out"));
}

TEST(Expectations, PassAndFail)
{
    const auto report = run_experiment(small_ackley(3));
    Expectations loose;
    loose.mean_fitness_min = -1e9;
    loose.solution_target = std::vector<double>{0.0, 0.0};
    loose.solution_tolerance = 100.0;
    EXPECT_TRUE(check_expectations(report, loose).passed);
    Expectations tight;
    tight.mean_fitness_min = 1e9;
    const auto res = check_expectations(report, tight);
    EXPECT_FALSE(res.passed);
    EXPECT_FALSE(res.lines.empty());
}

TEST(Sweep, SingleElementMatchesRunExperiment)
{
    auto c = small_ackley(3);
    c.objective.name = "two_log";
    c.optimizer.init.center = {0.0};
    c.sweep = SweepConfig{{2.0}, {2}};
    const auto s = n_sweep(c);
    ASSERT_EQ(s.series.size(), 1u);
    ASSERT_EQ(s.series[0].points.size(), 1u);
    auto plain = c;
    plain.sweep.reset();
    plain.optimizer.power = 2.0;
    EXPECT_EQ(trials_csv(s.series[0].points[0].report), trials_csv(run_experiment(plain)));
}

TEST(Sweep, TrendCheckAndFiles)
{
    auto c = small_ackley(2);
    c.objective.name = "two_log";
    c.optimizer.init.center = {0.0};
    c.sweep = SweepConfig{{1.0, 2.0, 3.0}, {1, 2}};
    const auto s = n_sweep(c);
    ASSERT_EQ(s.series.size(), 2u);
    EXPECT_EQ(s.series[1].powers(), (std::vector<double>{1.0, 2.0, 3.0}));
    const auto dir = scratch_dir("sweep");
    const auto files = write_sweep(s, dir, "sw");
    EXPECT_EQ(files.size(), 2u * (1 + 3 * 2));
    const std::string trend = slurp(dir / "sw_d2_trend.csv");
    EXPECT_EQ(trend.substr(0, trend.find('\n')), "N,mean_mse,mean_fitness");
    std::filesystem::remove_all(dir);

    SweepSeries fake;
    fake.dimension = 1;
    EXPECT_FALSE(check_mse_trend(fake).passed());
}

TEST(Sweep, RequiresPowerAlgorithm)
{
    auto c = small_ackley(2);
    c.optimizer.algorithm = Algorithm::zo_sgd;
    c.sweep = SweepConfig{{1.0}, {2}};
    EXPECT_THROW(n_sweep(c), ConfigError);
}
