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


// Minimal scorer speaking the line protocol: reads "EVAL <d> <x1> ... <xd>"
// and answers "OK <v>" with the max-form Rosenbrock value (d = 2).
// Pair it with demos/external_rosenbrock.json.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

int main()
{
    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream in(line);
        std::string verb;
        int d = 0;
        double x = 0.0;
        double y = 0.0;
        if (!(in >> verb >> d >> x >> y) || verb != "EVAL" || d != 2) {
            std::printf("ERR expected EVAL 2 x y\n");
            std::fflush(stdout);
            continue;
        }
        const double a = y - x * x;
        const double b = 1.0 - x;
        std::printf("OK %.17g\n", -100.0 * a * a - b * b);
        std::fflush(stdout);
    }
    return 0;
}
