/*
 Copyright 2026 The fohinf Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef FOHINF_CLI_HPP
#define FOHINF_CLI_HPP

#include <ostream>

namespace fohinf {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSynthesisFailure = 1;
inline constexpr int kExitInputError = 2;

/// Name of the environment variable holding the default benchmark suite directory.
inline constexpr const char* kSuiteDirEnv = "FOHINF_SUITE_DIR";

/**
 * @brief Command-line entry point.
 *
 *     fohinf norm FILE [--controller K]
 *     fohinf abscissa FILE [--controller K]
 *     fohinf synth --plant F --order N [--runs 10] [--cpumax 300] [--seed S]
 *                  [--warm-start K] [--out K.json] [--threads T]
 *     fohinf bench [--suite DIR] [--tier quick|large|all] [--cases A,B]
 *                  [--report R.json] [--runs 10] [--cpumax S] [--seed S] [--threads T]
 *
 * FILE is a plant or a plain realization. For a plant, the closed loop with K
 * (default: the zero static gain) is analysed.
 */
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fohinf

#endif  // FOHINF_CLI_HPP
