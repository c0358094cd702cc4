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


#include "gspto/optimizers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gspto;

namespace {

OptimizerConfig gspto_config(Algorithm a, TransformMode mode, Vector start, std::size_t iterations = 60)
{
    OptimizerConfig c;
    c.algorithm = a;
    c.mode = mode;
    c.sigma = 1.0;
    c.samples = 30;
    c.iterations = iterations;
    c.schedule = LearningRateSchedule::hyperbolic_decay(0.1);
    c.init = InitialPoint::gaussian(std::move(start), 0.01);
    c.seed = 42;
    c.stream = 3;
    return c;
}

OptimizerConfig homotopy_config(HomotopyParams hp, std::size_t iterations = 300)
{
    OptimizerConfig c;
    c.algorithm = Algorithm::std_homotopy;
    c.sigma = 2.0;
    c.samples = 20;
    c.iterations = iterations;
    c.schedule = LearningRateSchedule::hyperbolic_decay(0.1);
    c.init = InitialPoint::at(make_vector({3.0, 3.0}));
    c.homotopy = hp;
    c.seed = 5;
    return c;
}

} // namespace

TEST(Schedule, Values)
{
    EXPECT_EQ(schedule_value(LearningRateSchedule::power_law(0.25), 0), 1.0);
    EXPECT_DOUBLE_EQ(schedule_value(LearningRateSchedule::power_law(0.25), 15), std::pow(16.0, -0.75));
    EXPECT_DOUBLE_EQ(schedule_value(LearningRateSchedule::hyperbolic_decay(0.2), 1000), 0.1);
    for (std::size_t t : {0u, 7u, 100000u}) {
        EXPECT_EQ(schedule_value(LearningRateSchedule::fixed(0.1), t), 0.1);
    }
}

TEST(Schedule, InvalidGammaAndAlpha)
{
    EXPECT_THROW(schedule_value(LearningRateSchedule::power_law(0.5), 0), InvalidParameter);
    EXPECT_THROW(schedule_value(LearningRateSchedule::power_law(0.0), 0), InvalidParameter);
    EXPECT_THROW(schedule_value(LearningRateSchedule::fixed(0.0), 0), InvalidParameter);
}

TEST(RunGspto, NormalizedStepHasLengthAlpha)
{
    const auto c = gspto_config(Algorithm::epgs, epgs(1), make_vector({5, 5}));
    const RunTrace tr = run_gspto(ackley(), c);
    ASSERT_EQ(tr.records.size(), c.iterations + 1);
    for (std::size_t t = 0; t + 1 < tr.records.size(); ++t) {
        const auto& r = tr.records[t];
        if (r.degenerate) {
            continue;
        }
        ASSERT_NEAR((tr.records[t + 1].mu - r.mu).norm(), c.schedule.at(t), 1e-12);
    }
}

TEST(RunGspto, BestIsMaximumOfRecordedFitness)
{
    const auto c = gspto_config(Algorithm::epgs, epgs(1), make_vector({5, 5}));
    const RunTrace tr = run_gspto(ackley(), c);
    double best = -INFINITY;
    std::size_t at = 0;
    for (const auto& r : tr.records) {
        if (r.fitness > best) {
            best = r.fitness;
            at = r.t;
        }
    }
    EXPECT_EQ(tr.best_fitness, best);
    EXPECT_EQ(tr.iterations_to_best, at);
    EXPECT_EQ(tr.best_iterate, tr.records[at].mu);
}

TEST(RunGspto, ClimbsAckleyFromCorner)
{
    auto c = gspto_config(Algorithm::epgs, epgs(1), make_vector({5, 5}), 200);
    c.samples = 100;
    const RunTrace tr = run_gspto(ackley(), c);
    EXPECT_GT(tr.best_fitness, 22.0);
}

TEST(RunGspto, DeterministicBitwise)
{
    const auto c = gspto_config(Algorithm::pgs, pgs(5), make_vector({1, 1}));
    const RunTrace a = run_gspto(two_log(2).shifted(10), c);
    const RunTrace b = run_gspto(two_log(2).shifted(10), c);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        ASSERT_EQ(a.records[i].mu, b.records[i].mu);
        ASSERT_EQ(a.records[i].fitness, b.records[i].fitness);
    }
}

TEST(RunGspto, EpgsShiftKeepsIterates)
{
    const auto c = gspto_config(Algorithm::epgs, epgs(2), make_vector({4, -3}));
    const RunTrace a = run_gspto(ackley(), c);
    const RunTrace b = run_gspto(ackley().shifted(37.5), c);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        ASSERT_LT((a.records[i].mu - b.records[i].mu).cwiseAbs().maxCoeff(), 1e-9) << "t=" << i;
    }
}

TEST(RunGspto, PgsScaleKeepsIterates)
{
    const Objective f = two_log(2).shifted(10.0);
    const Objective scaled("scaled", 2, [f](const Vector& x) { return 4.0 * f(x); }, f.box_half_width());
    const auto c = gspto_config(Algorithm::pgs, pgs(20), make_vector({0.5, 0.5}));
    const RunTrace a = run_gspto(f, c);
    const RunTrace b = run_gspto(scaled, c);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        ASSERT_EQ(a.records[i].mu, b.records[i].mu) << "t=" << i;
    }
}

TEST(RunGspto, NegativePgsFitnessAborts)
{
    const auto c = gspto_config(Algorithm::pgs, pgs(1), make_vector({-3, 2}));
    try {
        run_gspto(rosenbrock(), c);
        FAIL() << "expected RunAborted";
    } catch (const RunAborted& e) {
        EXPECT_EQ(e.iteration(), 0u);
    }
}

TEST(RunGspto, ConfigValidation)
{
    auto c = gspto_config(Algorithm::epgs, epgs(1), make_vector({1, 1}));
    c.mode = pgs(1);
    EXPECT_THROW(run_gspto(ackley(), c), InvalidParameter);
    c = gspto_config(Algorithm::epgs, epgs(1), make_vector({1, 1, 1}));
    EXPECT_THROW(run_gspto(ackley(), c), InvalidParameter);
    c = gspto_config(Algorithm::epgs, epgs(0), make_vector({1, 1}));
    EXPECT_THROW(run_gspto(ackley(), c), InvalidParameter);
    c = gspto_config(Algorithm::epgs, epgs(1), make_vector({1, 1}));
    c.homotopy = HomotopyParams{};
    EXPECT_THROW(run_gspto(ackley(), c), InvalidParameter);
}

TEST(RunHomotopy, SigmaShrinksByDecayPerOuterLoop)
{
    const auto c = homotopy_config(HomotopyParams{6, 40, 10, 0.8});
    const RunTrace tr = run_std_homotopy(ackley(), c);
    std::vector<double> sigmas;
    for (std::size_t i = 0; i + 1 < tr.records.size(); ++i) {
        if (sigmas.empty() || tr.records[i].sigma != sigmas.back()) {
            sigmas.push_back(tr.records[i].sigma);
        }
    }
    ASSERT_GE(sigmas.size(), 2u);
    EXPECT_EQ(sigmas.front(), c.sigma);
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        EXPECT_EQ(sigmas[i], sigmas[i - 1] * 0.8);
    }
    EXPECT_LE(sigmas.size(), 6u);
}

TEST(RunHomotopy, ZeroOuterLoopsLeavesOnlyStart)
{
    const auto c = homotopy_config(HomotopyParams{0, 40, 10, 0.8});
    const RunTrace tr = run_std_homotopy(ackley(), c);
    ASSERT_EQ(tr.records.size(), 1u);
    EXPECT_EQ(tr.records[0].mu, c.init.center);
}

TEST(RunHomotopy, RespectsGlobalBudget)
{
    const auto c = homotopy_config(HomotopyParams{10, 500, 100, 0.8}, 120);
    const RunTrace tr = run_std_homotopy(ackley(), c);
    EXPECT_EQ(tr.records.size(), 121u);
}

TEST(RunZoSgd, ConstantObjectiveNeverMoves)
{
    const Objective f("constant", 2, [](const Vector&) { return 1.25; });
    OptimizerConfig c;
    c.algorithm = Algorithm::zo_sgd;
    c.sigma = 0.5;
    c.samples = 10;
    c.iterations = 50;
    c.schedule = LearningRateSchedule::fixed(0.3);
    c.init = InitialPoint::at(make_vector({0.2, -0.7}));
    const RunTrace tr = run_zo_sgd(f, c);
    for (const auto& r : tr.records) {
        ASSERT_EQ(r.mu, c.init.center);
    }
}

TEST(RunZoSgd, StepIsAlphaTimesEstimateNorm)
{
    OptimizerConfig c;
    c.algorithm = Algorithm::zo_sgd;
    c.sigma = 1.0;
    c.samples = 20;
    c.iterations = 40;
    c.schedule = LearningRateSchedule::hyperbolic_decay(0.05);
    c.init = InitialPoint::at(make_vector({2.0, 2.0}));
    const RunTrace tr = run_zo_sgd(ackley(), c);
    for (std::size_t t = 0; t + 1 < tr.records.size(); ++t) {
        const auto& r = tr.records[t];
        ASSERT_NEAR((tr.records[t + 1].mu - r.mu).norm(), r.step_size * r.grad_norm, 1e-12);
    }
}

TEST(InitialPoint, Kinds)
{
    RngStream rng(1, 1);
    const Vector c = make_vector({1.0, -1.0});
    EXPECT_EQ(InitialPoint::at(c).draw(rng), c);
    for (int i = 0; i < 100; ++i) {
        const Vector u = InitialPoint::uniform(c, 0.5).draw(rng);
        ASSERT_LE((u - c).cwiseAbs().maxCoeff(), 0.5);
    }
    EXPECT_NE(InitialPoint::gaussian(c, 0.01).draw(rng), c);
}
