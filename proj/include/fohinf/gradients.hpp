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
#ifndef FOHINF_GRADIENTS_HPP
#define FOHINF_GRADIENTS_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "fohinf/analysis.hpp"
#include "fohinf/statespace.hpp"

/**
 * @file gradients.hpp
 * @brief Gradients of the closed-loop spectral abscissa and H-infinity norm
 *        with respect to the packed controller parameters.
 *
 * Both functionals are evaluated on the closed loop (A_cl, B_cl, C_cl, D_cl).
 * Their sensitivities to the closed-loop matrices are pulled back to the
 * controller through the augmented static-feedback form
 *
 *     Kt = [DK CK; BK AK],  Q = Kt (I - D22t Kt)^-1,
 *     A_cl = At + B2t Q C2t,  B_cl = B1t + B2t Q D21t,
 *     C_cl = C1t + D12t Q C2t, D_cl = D11 + D12t Q D21t,
 *
 * where dQ = (I - Kt D22t)^-1 dKt (I - D22t Kt)^-1.
 *
 * At nonsmooth points (ties of the active eigenvalue or of the peak singular
 * value) a deterministic element is returned together with a NearTie hint;
 * callers never need to branch on it.
 */

namespace fohinf {

enum class Smoothness { Smooth, NearTie };

struct GradientReport {
    double value = 0.0;
    Vector grad;
    Smoothness hint = Smoothness::Smooth;
    /// Distance from the active branch to the nearest competing one.
    double tie_gap = std::numeric_limits<double>::infinity();
    /// Only meaningful for the H-infinity gradient.
    bool peak_at_infinity = false;
    double omega_peak = 0.0;
};

struct GradientOptions {
    double ill_posed_cap = kDefaultIllPosedCap;
    double norm_rel_tol = kDefaultNormRelTol;
    /// A competing branch closer than near_tie_rel * (1 + |value|) flags NearTie.
    double near_tie_rel = 1e-6;
};

/**
 * @brief Spectral abscissa of A_cl and its gradient.
 *
 * For the first active eigenvalue lambda with right eigenvector x and left
 * eigenvector y (y^H x = 1), d Re(lambda) / d A_cl = Re(conj(y) x^T).
 * A complex-conjugate partner is not a competing branch.
 */
GradientReport abscissa_gradient(const Plant& plant, const Controller& k,
                                        const GradientOptions& opts = {});

/**
 * @brief Closed-loop H-infinity norm and its gradient.
 *
 * With T = C_cl (jw I - A_cl)^-1 B_cl + D_cl at the peak frequency w and
 * top singular vectors (u, v), d sigma = Re(u^H dT v); the frequency is held
 * fixed. A peak at infinity uses the D_cl path only.
 */
GradientReport hinf_gradient(const Plant& plant, const Controller& k,
                                    const GradientOptions& opts = {});

}  // namespace fohinf

#endif  // FOHINF_GRADIENTS_HPP
