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
#ifndef FOHINF_ANALYSIS_HPP
#define FOHINF_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fohinf/statespace.hpp"

/**
 * @file analysis.hpp
 * @brief Stability and performance functionals of a realization.
 *
 * spectral_abscissa() gives max Re(lambda) of a square matrix; hinf_norm()
 * gives sup_w sigma_max(C (jwI - A)^-1 B + D) for a stable realization using
 * a Hamiltonian level-set iteration followed by a local refinement of the
 * peak frequency.
 */

namespace fohinf {

struct AbscissaResult {
    double alpha = -std::numeric_limits<double>::infinity();
    /// Eigenvalues with Re(lambda) >= alpha - tie tolerance, in solver order.
    std::vector<Eigen::Index> active_indices;
    CVector eigenvalues;
};

inline constexpr double kDefaultTieRelTol = 1e-8;

CVector eigenvalues(const Matrix& A);

AbscissaResult spectral_abscissa(const Matrix& A, double tie_rel_tol = kDefaultTieRelTol);

/// Strict: a marginally stable matrix is not stable.
inline bool is_stable(const Matrix& A) { return spectral_abscissa(A).alpha < 0.0; }

double sigma_max(const CMatrix& M);

double sigma_max(const Matrix& M);

struct NormResult {
    double gamma = 0.0;
    /// Frequency (rad/s) of the peak; 0 when the peak is attained at infinity.
    double omega_peak = 0.0;
    bool attained_at_infinity = false;
    /// False when the level-set iteration stalled; gamma is then the best lower bound found.
    bool converged = true;
    /// gamma lies in [gamma, upper_bound] when converged.
    double upper_bound = 0.0;
    /// Largest local peak found away from omega_peak (0 if none was seen).
    double secondary_peak = 0.0;
    bool used_grid_fallback = false;
};

inline constexpr double kDefaultNormRelTol = 1e-7;

/// Test levels stay this far (relative) above sigma_max(D).
inline constexpr double kHamiltonianLevelGap = 1e-8;

/**
 * @brief H-infinity norm of a stable realization.
 *
 * The true norm lies in [gamma, upper_bound], with upper_bound at most
 * (1 + 2 rel_tol) gamma except when the norm is within kHamiltonianLevelGap of
 * sigma_max(D); the bound is then (1 + kHamiltonianLevelGap) sigma_max(D).
 *
 * Throws UnstableSystem when A is not Hurwitz. A stalled level-set iteration is
 * reported through NormResult::converged rather than an exception.
 */
NormResult hinf_norm(const StateSpace& sys, double rel_tol = kDefaultNormRelTol);

}  // namespace fohinf

#endif  // FOHINF_ANALYSIS_HPP
