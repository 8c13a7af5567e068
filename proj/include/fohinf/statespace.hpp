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
#ifndef FOHINF_STATESPACE_HPP
#define FOHINF_STATESPACE_HPP

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "fohinf/error.hpp"

/**
 * @file statespace.hpp
 * @brief Continuous-time state-space data model.
 *
 * The generalized plant has inputs (w, u) and outputs (z, y):
 *
 *     dx/dt = A x + B1 w + B2 u
 *         z = C1 x + D11 w + D12 u
 *         y = C2 x + D21 w + D22 u
 *
 * and is closed by a fixed-order controller K from y to u. All matrices are
 * dense; order-zero controllers are represented by empty AK/BK/CK blocks.
 */

namespace fohinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

namespace detail {

inline void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols,
                          const std::string& name) {
    if (M.rows() != rows || M.cols() != cols) {
        throw Error(Errc::DimensionMismatch,
                    name + " is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

inline void require_finite(const Matrix& M, const std::string& name) {
    if (!M.allFinite()) throw Error(Errc::NonFinite, name + " has non-finite entries");
}

}  // namespace detail

/// Generic realization (A, B, C, D).
struct StateSpace {
    Matrix A, B, C, D;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index inputs() const { return D.cols(); }
    Eigen::Index outputs() const { return D.rows(); }

    void validate() const {
        const auto n = A.rows(), m = D.cols(), p = D.rows();
        detail::require_shape(A, n, n, "A");
        detail::require_shape(B, n, m, "B");
        detail::require_shape(C, p, n, "C");
        for (auto [M, name] : {std::pair{&A, "A"}, {&B, "B"}, {&C, "C"}, {&D, "D"}}) {
            detail::require_finite(*M, name);
        }
    }
};

/// Nine-block generalized plant.
struct Plant {
    Matrix A;
    Matrix B1, B2;
    Matrix C1, C2;
    Matrix D11, D12, D21, D22;

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m1() const { return B1.cols(); }
    Eigen::Index m2() const { return B2.cols(); }
    Eigen::Index p1() const { return C1.rows(); }
    Eigen::Index p2() const { return C2.rows(); }

    /// Checks every block against (n, m1, m2, p1, p2) taken from A, B1, B2, C1, C2.
    void validate() const {
        const auto n = A.rows();
        if (n < 1) throw Error(Errc::DimensionMismatch, "plant order must be at least 1");
        detail::require_shape(A, n, n, "A");
        detail::require_shape(B1, n, B1.cols(), "B1");
        detail::require_shape(B2, n, B2.cols(), "B2");
        detail::require_shape(C1, C1.rows(), n, "C1");
        detail::require_shape(C2, C2.rows(), n, "C2");
        const auto m1 = B1.cols(), m2 = B2.cols(), p1 = C1.rows(), p2 = C2.rows();
        if (m1 < 1 || m2 < 1 || p1 < 1 || p2 < 1) {
            throw Error(Errc::DimensionMismatch, "plant signal dimensions must be at least 1");
        }
        detail::require_shape(D11, p1, m1, "D11");
        detail::require_shape(D12, p1, m2, "D12");
        detail::require_shape(D21, p2, m1, "D21");
        detail::require_shape(D22, p2, m2, "D22");
        const std::pair<const Matrix*, const char*> blocks[] = {
            {&A, "A"},     {&B1, "B1"},   {&B2, "B2"},   {&C1, "C1"},  {&C2, "C2"},
            {&D11, "D11"}, {&D12, "D12"}, {&D21, "D21"}, {&D22, "D22"}};
        for (auto [M, name] : blocks) detail::require_finite(*M, name);
    }
};

/// Shape of a controller: order nK, m2 outputs (plant inputs u), p2 inputs (plant outputs y).
struct ControllerDims {
    Eigen::Index nK = 0;
    Eigen::Index m2 = 1;
    Eigen::Index p2 = 1;

    Eigen::Index parameter_count() const { return nK * nK + nK * p2 + m2 * nK + m2 * p2; }

    static ControllerDims for_plant(const Plant& plant, Eigen::Index order) {
        return {order, plant.m2(), plant.p2()};
    }

    friend bool operator==(const ControllerDims&, const ControllerDims&) = default;
};

struct Controller {
    Matrix AK, BK, CK, DK;

    Eigen::Index order() const { return AK.rows(); }
    ControllerDims dims() const { return {AK.rows(), DK.rows(), DK.cols()}; }

    static Controller zeros(const ControllerDims& d) {
        return {Matrix::Zero(d.nK, d.nK), Matrix::Zero(d.nK, d.p2), Matrix::Zero(d.m2, d.nK),
                Matrix::Zero(d.m2, d.p2)};
    }

    static Controller static_gain(const Matrix& DK) {
        Controller k = zeros({0, DK.rows(), DK.cols()});
        k.DK = DK;
        return k;
    }

    void validate() const {
        const auto d = dims();
        detail::require_shape(AK, d.nK, d.nK, "AK");
        detail::require_shape(BK, d.nK, d.p2, "BK");
        detail::require_shape(CK, d.m2, d.nK, "CK");
        const std::pair<const Matrix*, const char*> blocks[] = {
            {&AK, "AK"}, {&BK, "BK"}, {&CK, "CK"}, {&DK, "DK"}};
        for (auto [M, name] : blocks) detail::require_finite(*M, name);
    }

    void validate_for(const Plant& plant) const {
        validate();
        if (DK.rows() != plant.m2() || DK.cols() != plant.p2()) {
            throw Error(Errc::DimensionMismatch,
                        "controller DK is " + std::to_string(DK.rows()) + "x" +
                            std::to_string(DK.cols()) + " but the plant has m2=" +
                            std::to_string(plant.m2()) + ", p2=" + std::to_string(plant.p2()));
        }
    }
};

// ---------------------------------------------------------------------------
// Parameter vector: column-major AK, BK, CK, DK concatenated.
// ---------------------------------------------------------------------------

inline Vector pack(const Controller& k) {
    const auto d = k.dims();
    Vector v(d.parameter_count());
    Eigen::Index pos = 0;
    for (const Matrix* M : {&k.AK, &k.BK, &k.CK, &k.DK}) {
        v.segment(pos, M->size()) = M->reshaped();
        pos += M->size();
    }
    return v;
}

inline Controller unpack(const Vector& v, const ControllerDims& d) {
    if (v.size() != d.parameter_count()) {
        throw Error(Errc::LengthMismatch, "parameter vector has length " + std::to_string(v.size()) +
                                              ", expected " +
                                              std::to_string(d.parameter_count()));
    }
    Controller k = Controller::zeros(d);
    Eigen::Index pos = 0;
    for (Matrix* M : {&k.AK, &k.BK, &k.CK, &k.DK}) {
        M->reshaped() = v.segment(pos, M->size());
        pos += M->size();
    }
    return k;
}

// ---------------------------------------------------------------------------
// Subsystems and closed loop
// ---------------------------------------------------------------------------

/// G_ij = (A, Bj, Ci, Dij) for i, j in {1, 2}.
StateSpace plant_subsystem(const Plant& plant, int i, int j);

inline constexpr double kDefaultIllPosedCap = 1e12;

/**
 * @brief Lower linear fractional transformation F_l(G, K) as a realization of order n + nK.
 *
 * With Delta = (I - D22 DK)^-1 and E = I + DK Delta D22 = (I - DK D22)^-1:
 *
 *     A_cl = [A + B2 DK Delta C2,  B2 E CK               ]
 *            [BK Delta C2,         AK + BK Delta D22 CK  ]
 *     B_cl = [B1 + B2 DK Delta D21; BK Delta D21]
 *     C_cl = [C1 + D12 DK Delta C2,  D12 E CK]
 *     D_cl = D11 + D12 DK Delta D21
 *
 * Throws IllPosed when I - D22 DK is singular or its inverse exceeds ill_posed_cap
 * in norm. With D22 = 0 and K = 0 the result is exactly (A, B1, C1, D11).
 */
StateSpace lft_closed_loop(const Plant& plant, const Controller& k,
                           double ill_posed_cap = kDefaultIllPosedCap);

/// C (sI - A)^-1 B + D via one LU solve; SingularResolvent near the spectrum.
CMatrix transfer_eval(const StateSpace& sys, Complex s);

}  // namespace fohinf

#endif  // FOHINF_STATESPACE_HPP
