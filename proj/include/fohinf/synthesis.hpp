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
#ifndef FOHINF_SYNTHESIS_HPP
#define FOHINF_SYNTHESIS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fohinf/analysis.hpp"
#include "fohinf/gradients.hpp"
#include "fohinf/nonsmooth.hpp"
#include "fohinf/random.hpp"
#include "fohinf/statespace.hpp"

/**
 * @file synthesis.hpp
 * @brief Two-stage fixed-order H-infinity synthesis with randomized restarts.
 *
 * Stage 1 minimizes the closed-loop spectral abscissa until it is negative.
 * Stage 2 minimizes the closed-loop H-infinity norm from that controller,
 * with f = +inf outside the stability region. synthesize() repeats both
 * stages from independent random starts and keeps the best certified result.
 */

namespace fohinf {

struct SynthesisOptions {
    Eigen::Index order = 0;
    int runs = 10;
    /// Per-run budget covering both stages.
    double cpumax_seconds = 300.0;
    double init_scale = 1.0;
    /// Stage 1 stops once the abscissa is below -stabilization_margin.
    double stabilization_margin = 0.0;
    double norm_rel_tol = kDefaultNormRelTol;
    /// Tolerance of the final norm recomputation.
    double certify_rel_tol = 1e-9;
    std::uint64_t rng_seed = 0;
    std::optional<Controller> warm_start;
    /// Runs executed concurrently; results do not depend on it.
    int threads = 1;
    /// Base optimizer settings; budget, seed and target are set per stage.
    OptOptions optimizer;

    void validate() const {
        if (runs < 1) throw Error(Errc::InvalidArgument, "runs must be at least 1");
        if (order < 0) throw Error(Errc::InvalidArgument, "controller order must be nonnegative");
        if (!(cpumax_seconds > 0.0)) throw Error(Errc::InvalidArgument, "cpumax must be positive");
        if (!(init_scale >= 0.0)) throw Error(Errc::InvalidArgument, "init_scale must be >= 0");
        if (!(stabilization_margin >= 0.0)) {
            throw Error(Errc::InvalidArgument, "stabilization_margin must be >= 0");
        }
        if (threads < 1) throw Error(Errc::InvalidArgument, "threads must be at least 1");
    }
};

struct RunRecord {
    std::uint64_t seed = 0;
    double stage1_abscissa = std::numeric_limits<double>::infinity();
    /// +inf when stage 1 failed.
    double stage2_norm = std::numeric_limits<double>::infinity();
    double elapsed_seconds = 0.0;
    Controller controller;
};

enum class SynthesisStatus { Success, NoStabilizingController };

struct SynthesisResult {
    Controller best;
    double best_norm = std::numeric_limits<double>::infinity();
    double best_abscissa = std::numeric_limits<double>::infinity();
    double best_omega_peak = 0.0;
    bool best_peak_at_infinity = false;
    int best_run = -1;
    std::vector<RunRecord> per_run;
    SynthesisStatus status = SynthesisStatus::NoStabilizingController;
    std::vector<std::string> warnings;
};

/// All entries i.i.d. N(0, scale^2), filled in packed-parameter order.
Controller random_controller(const ControllerDims& dims, double scale, Rng& rng);

/// Stage 1 from the warm start if given, otherwise from a random controller.
std::pair<Controller, AbscissaResult> stabilize(const Plant& plant,
                                                       const SynthesisOptions& opts);

/// Stage 2: locally minimize the closed-loop norm from a stabilizing controller.
std::pair<Controller, NormResult> optimize_performance(const Plant& plant,
                                                              const Controller& k0,
                                                              const SynthesisOptions& opts);

/**
 * @brief Best of opts.runs independent two-stage runs.
 *
 * Run r uses the seed derive_seed(opts.rng_seed, r), so the first k runs of a
 * longer sequence reproduce a shorter one exactly.
 */
SynthesisResult synthesize(const Plant& plant, const SynthesisOptions& opts);

}  // namespace fohinf

#endif  // FOHINF_SYNTHESIS_HPP
