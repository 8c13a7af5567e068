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
// Static output feedback for a small unstable plant.
#include <iostream>

#include "fohinf/io.hpp"
#include "fohinf/synthesis.hpp"

int main() {
    fohinf::Plant p;
    p.A = (fohinf::Matrix(2, 2) << 0.0, 1.0, 1.0, -0.5).finished();
    p.B1 = fohinf::Matrix::Identity(2, 2);
    p.B2 = (fohinf::Matrix(2, 1) << 0.0, 1.0).finished();
    p.C1 = (fohinf::Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
    p.C2 = (fohinf::Matrix(1, 2) << 1.0, 0.0).finished();
    p.D11 = fohinf::Matrix::Zero(2, 2);
    p.D12 = (fohinf::Matrix(2, 1) << 0.0, 1.0).finished();
    p.D21 = (fohinf::Matrix(1, 2) << 0.0, 0.1).finished();
    p.D22 = fohinf::Matrix::Zero(1, 1);

    fohinf::SynthesisOptions opts;
    opts.order = 1;
    opts.runs = 4;
    opts.cpumax_seconds = 10.0;
    opts.rng_seed = 1;

    const auto result = fohinf::synthesize(p, opts);
    if (result.status != fohinf::SynthesisStatus::Success) {
        std::cerr << "no stabilizing controller\n";
        return 1;
    }
    std::cout << "best norm " << fohinf::format_double(result.best_norm) << " (run "
              << result.best_run << ")\n"
              << fohinf::to_json(result.best).dump(2) << '\n';
    return 0;
}
