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
#ifndef FOHINF_NONSMOOTH_HPP
#define FOHINF_NONSMOOTH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fohinf/error.hpp"
#include "fohinf/random.hpp"

/**
 * @file nonsmooth.hpp
 * @brief Local minimization of nonsmooth, nonconvex functions.
 *
 * Three phases share one oracle contract (x -> f(x), grad f(x)) where f may be
 * +inf to mark infeasible points:
 *
 *  - bfgs_nonsmooth: BFGS with a weak Wolfe bracketing line search. The
 *    inverse Hessian is allowed to become very ill-conditioned near kinks.
 *  - bundle_phase: accumulates gradients near the incumbent and checks
 *    whether a small convex combination of them exists.
 *  - gradient_sampling: descends along the negative min-norm element of the
 *    convex hull of gradients sampled in shrinking balls.
 *
 * hanso() chains them under a single time budget. The optimality measure
 * reported by the last two phases is the norm of that min-norm element.
 */

namespace fohinf {

struct Evaluation {
    double f = std::numeric_limits<double>::infinity();
    Eigen::VectorXd g;
};

using Oracle = std::function<Evaluation(const Eigen::VectorXd&)>;

struct OptOptions {
    int max_iters = 1000;
    double cpu_budget_seconds = 300.0;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.5;
    double grad_norm_tol = 1e-6;
    /// Multiplied by (1 + |x|) at use.
    std::vector<double> sampling_radii = {1e-3, 1e-4, 1e-5};
    /// 0 selects 2 * dim.
    int samples_per_iter = 0;
    /// 0 selects min(2 * dim, 100).
    int bundle_size = 0;
    std::uint64_t rng_seed = 0;
    /// Every phase stops as soon as f < target_value.
    double target_value = -std::numeric_limits<double>::infinity();

    void validate() const {
        if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
            throw Error(Errc::InvalidArgument, "Wolfe parameters must satisfy 0 < c1 < c2 < 1");
        }
        if (!(cpu_budget_seconds > 0.0) || max_iters < 0) {
            throw Error(Errc::InvalidArgument, "budgets must be positive");
        }
        for (double r : sampling_radii) {
            if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "sampling radii must be positive");
        }
    }

    int samples(Eigen::Index dim) const {
        return samples_per_iter > 0 ? samples_per_iter : static_cast<int>(std::max<Eigen::Index>(2 * dim, 1));
    }
    int bundle(Eigen::Index dim) const {
        return bundle_size > 0 ? bundle_size
                               : static_cast<int>(std::clamp<Eigen::Index>(2 * dim, 2, 100));
    }
};

enum class Phase { BFGSOnly = 0, Bundle = 1, GradientSampling = 2 };
enum class BundleOutcome { NotRun, Verified, Improved, Inconclusive };

const char* to_string(Phase p);

struct OptResult {
    Eigen::VectorXd x_best;
    double f_best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd g_best;
    double optimality_measure = std::numeric_limits<double>::infinity();
    Phase phase_reached = Phase::BFGSOnly;
    BundleOutcome bundle_outcome = BundleOutcome::NotRun;
    int iters = 0;
    int evaluations = 0;
    double elapsed_seconds = 0.0;
    bool target_reached = false;
    std::string stop_reason;
};

/// Wall-clock budget shared by the phases of one run.
class Deadline {
public:
    explicit Deadline(double budget_seconds)
        : start_(std::chrono::steady_clock::now()), budget_(budget_seconds) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    bool expired() const { return elapsed() >= budget_; }

private:
    std::chrono::steady_clock::time_point start_;
    double budget_;
};

// ---------------------------------------------------------------------------
// Min-norm element of a convex hull (Wolfe's nearest point algorithm)
// ---------------------------------------------------------------------------

struct MinNormResult {
    Eigen::VectorXd d;
    Eigen::VectorXd weights;
};

/**
 * @brief Nearest point to the origin in conv{g_1, ..., g_m}.
 *
 * Active-set method: the corral S is kept affinely independent; each major
 * step adds the point most negatively aligned with the current iterate, each
 * minor step moves to the affine minimizer of S and drops points whose
 * weights would turn negative.
 */
MinNormResult min_norm_convex_hull(const std::vector<Eigen::VectorXd>& gradients);

/// BFGS with weak Wolfe line search; stops on gradient tolerance, iteration cap, budget,
/// target value, or line-search failure.
OptResult bfgs_nonsmooth(const Oracle& f, const Eigen::VectorXd& x0,
                                const OptOptions& opts = {});

OptResult bundle_phase(const Oracle& f, const Eigen::VectorXd& x0,
                              const OptOptions& opts = {});

OptResult gradient_sampling(const Oracle& f, const Eigen::VectorXd& x0,
                                   const OptOptions& opts = {});

/**
 * @brief BFGS from every feasible start, then bundle verification of the best
 *        point, then gradient sampling unless the bundle phase verified it.
 */
OptResult hanso(const Oracle& f, const std::vector<Eigen::VectorXd>& starts,
                       const OptOptions& opts = {});

}  // namespace fohinf

#endif  // FOHINF_NONSMOOTH_HPP
