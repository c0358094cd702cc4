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

// Everything in one include.

#include "gspto/core.hpp"
#include "gspto/estimators.hpp"
#include "gspto/external.hpp"
#include "gspto/objectives.hpp"
#include "gspto/optimizers.hpp"
#include "gspto/oracle.hpp"
#include "gspto/samplers.hpp"
#include "gspto/transforms.hpp"
#include "gspto/verify.hpp"

#include "gspto/harness/attack.hpp"
#include "gspto/harness/config.hpp"
#include "gspto/harness/experiment.hpp"
#include "gspto/harness/presets.hpp"
#include "gspto/harness/report.hpp"
#include "gspto/harness/stats.hpp"
#include "gspto/harness/sweep.hpp"
