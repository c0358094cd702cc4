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


// gspto command-line driver.
//
//   gspto run    --config <file> [--out <dir>] [--seed <u64>] [--trials <n>]
//   gspto sweep  --config <file> [--out <dir>] [--seed <u64>] [--trials <n>]
//   gspto attack --config <file> [--out <dir>] [--seed <u64>] [--trials <n>]
//   gspto verify
//   gspto presets [--write <dir>]
//
// Exit status: 0 success, 1 an expectation or check failed, 2 bad config or arguments.

#include "gspto/gspto.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;

struct CommonOptions
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "experiment config (JSON)")->required();
    cmd->add_option("--out", o.out, "output directory (default: config, then $GSPTO_OUT_DIR, then ./gspto_out)");
    cmd->add_option("--seed", o.seed, "base seed; trial i uses stream i");
    cmd->add_option("--trials", o.trials, "number of trials / instances")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

gspto::ExperimentConfig load(const CommonOptions& o)
{
    gspto::ExperimentConfig c = gspto::load_config(o.config);
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.trials) {
        c.trials = *o.trials;
    }
    if (o.threads) {
        c.threads = *o.threads;
    }
    c.validate();
    return c;
}

std::filesystem::path output_dir(const CommonOptions& o, const gspto::ExperimentConfig& c)
{
    if (!o.out.empty()) {
        return o.out;
    }
    if (c.output.directory) {
        return *c.output.directory;
    }
    return gspto::default_output_directory();
}

void print_aggregate(const char* label, const gspto::Aggregate& a)
{
    std::printf("  %-20s mean %.6f  std %.6f  (n=%zu)\n", label, a.mean, a.stddev, a.count);
}

void print_report(const gspto::ExperimentReport& r)
{
    std::printf("%s [%s, d=%zu]: %zu/%zu trials completed%s\n", r.name.c_str(), r.algorithm.c_str(), r.dimension,
                r.trials.size(), r.requested_trials, r.partial() ? " (PARTIAL)" : "");
    for (const auto& [key, a] : r.aggregates) {
        print_aggregate(key.c_str(), a);
    }
    if (!r.solution.empty()) {
        std::printf("  %-20s (", "mean solution");
        for (std::size_t i = 0; i < r.solution.size(); ++i) {
            std::printf("%s%.6f", i ? ", " : "", r.solution[i].mean);
        }
        std::printf(")\n");
    }
    if (r.partial()) {
        const auto& f = r.failures.front();
        std::printf("  first failure: trial %zu: %s\n", f.trial, f.error.c_str());
    }
}

int finish(const gspto::CheckResult& check)
{
    for (const auto& line : check.lines) {
        std::printf("  expect: %s\n", line.c_str());
    }
    return check.passed ? exit_ok : exit_failed;
}

int cmd_run(const CommonOptions& o)
{
    const auto config = load(o);
    if (config.attack || config.sweep) {
        throw gspto::ConfigError("this config has an attack or sweep section; use the matching subcommand");
    }
    const auto report = gspto::run_experiment(config);
    const auto paths = gspto::write_report(report, output_dir(o, config), config.output_prefix());
    print_report(report);
    std::printf("  wrote %s and %s\n", paths.trials_csv.string().c_str(), paths.summary_json.string().c_str());
    if (report.trials.empty()) {
        std::printf("  no trial completed\n");
        return exit_failed;
    }
    return finish(gspto::check_expectations(report, config.expect));
}

int cmd_sweep(const CommonOptions& o)
{
    const auto config = load(o);
    if (!config.sweep) {
        throw gspto::ConfigError("sweep needs a sweep section with powers and dimensions");
    }
    const auto report = gspto::n_sweep(config);
    const auto written = gspto::write_sweep(report, output_dir(o, config), config.output_prefix());
    bool ok = true;
    for (const auto& s : report.series) {
        std::printf("%s d=%zu\n  %8s %14s %14s %s\n", report.name.c_str(), s.dimension, "N", "mean MSE",
                    "mean fitness", "completed");
        const auto mse = s.mean_mse();
        const auto fit = s.mean_fitness();
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            std::printf("  %8g %14.6g %14.6f %zu/%zu\n", s.points[i].power, mse[i], fit[i],
                        s.points[i].report.trials.size(), s.points[i].report.requested_trials);
        }
        const auto trend = gspto::check_mse_trend(s);
        std::printf("  MSE(N_max) < MSE(N_min): %s, spearman(N, MSE) = %.4f\n", trend.endpoints_ok ? "yes" : "no",
                    trend.spearman);
        if (config.expect.mse_decreasing) {
            std::printf("  expect: decreasing MSE trend: %s\n", trend.passed() ? "ok" : "FAILED");
            ok = ok && trend.passed();
        }
    }
    std::printf("  wrote %zu files\n", written.size());
    return ok ? exit_ok : exit_failed;
}

int cmd_attack(const CommonOptions& o)
{
    const auto config = load(o);
    if (!config.attack) {
        throw gspto::ConfigError("attack needs an attack section");
    }
    const auto report = gspto::toy_attack_run(config);
    const auto paths = gspto::write_attack_report(report, output_dir(o, config), config.output_prefix());
    std::printf("%s: success rate %.3f over %zu instances%s\n", report.name.c_str(), report.success_rate,
                config.trials, report.partial() ? " (PARTIAL)" : "");
    if (report.r2) {
        print_aggregate("R^2", *report.r2);
        print_aggregate("iterations_to_best", *report.iterations);
    }
    std::printf("  wrote %s and %s\n", paths.trials_csv.string().c_str(), paths.summary_json.string().c_str());
    if (config.expect.success_rate_min) {
        const bool ok = report.success_rate >= *config.expect.success_rate_min;
        std::printf("  expect: success rate %.3f >= %.3f: %s\n", report.success_rate, *config.expect.success_rate_min,
                    ok ? "ok" : "FAILED");
        return ok ? exit_ok : exit_failed;
    }
    return exit_ok;
}

int cmd_verify()
{
    bool ok = true;
    for (const auto& outcome : gspto::verify_all()) {
        std::printf("[%s] %s\n", outcome.passed ? "PASS" : "FAIL", outcome.name.c_str());
        for (const auto& d : outcome.details) {
            std::printf("    %s\n", d.c_str());
        }
        ok = ok && outcome.passed;
    }
    return ok ? exit_ok : exit_failed;
}

int cmd_presets(const std::string& write_dir)
{
    for (const auto& [name, config] : gspto::builtin_presets()) {
        if (write_dir.empty()) {
            std::printf("%s\n", name.c_str());
            continue;
        }
        const auto path = std::filesystem::path(write_dir) / (name + ".json");
        gspto::detail::write_text(path, gspto::to_json(config).dump(2) + "\n");
        std::printf("wrote %s\n", path.string().c_str());
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gaussian smoothing with power-transformed objectives: experiments and checks"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CommonOptions sweep_opts;
    CommonOptions attack_opts;
    std::string presets_dir;

    auto* run = app.add_subcommand("run", "repeated seeded trials of one optimizer on one objective");
    add_common(run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "power sweep: one experiment per (dimension, N)");
    add_common(sweep, sweep_opts);
    auto* attack = app.add_subcommand("attack", "targeted attack on the built-in or an external classifier");
    add_common(attack, attack_opts);
    auto* verify = app.add_subcommand("verify", "numerical checks of the theory against the quadrature oracle");
    auto* presets = app.add_subcommand("presets", "list shipped presets, or write them as JSON");
    presets->add_option("--write", presets_dir, "directory to write <name>.json files into");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*run) {
            return cmd_run(run_opts);
        }
        if (*sweep) {
            return cmd_sweep(sweep_opts);
        }
        if (*attack) {
            return cmd_attack(attack_opts);
        }
        if (*verify) {
            return cmd_verify();
        }
        if (*presets) {
            return cmd_presets(presets_dir);
        }
    } catch (const gspto::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_config;
}
