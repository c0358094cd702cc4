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


// Library tour on the 1-D two-log landscape: where the smoothed surrogate
// peaks for increasing N, then one EPGS run from the local peak's side.

#include "gspto/gspto.hpp"

#include <cstdio>

int main()
{
    using namespace gspto;
    const Objective f = two_log(make_vector({-0.5}), make_vector({0.5}), 1.0);
    const double sigma = 0.5;
    const ScanBox box{make_vector({-1.0}), make_vector({1.0})};

    std::printf("f(m1) = %.5f, f(m2) = %.5f\n", f(make_vector({-0.5})), f(make_vector({0.5})));
    std::printf("%6s  %10s\n", "N", "argmax F_N");
    for (double n : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const Vector m = argmax_F_scan(f, sigma, epgs(n), {}, box, 0.005);
        std::printf("%6g  %10.4f\n", n, m[0]);
    }

    const ThresholdReport th = estimate_threshold_N(f, sigma, 0.1, 1.0);
    std::printf("sufficient N for delta = 0.1: %.4f\n", th.threshold);

    OptimizerConfig c;
    c.algorithm = Algorithm::epgs;
    c.mode = epgs(th.threshold);
    c.sigma = sigma;
    c.samples = 100;
    c.iterations = 300;
    c.schedule = LearningRateSchedule::hyperbolic_decay(0.05);
    c.init = InitialPoint::at(make_vector({0.6}));
    c.seed = 1;
    const RunTrace tr = run_optimizer(f, c);
    std::printf("EPGS from 0.6: best %.4f at mu = %.4f (iteration %zu)\n", tr.best_fitness, tr.best_iterate[0],
                tr.iterations_to_best);
    return 0;
}
