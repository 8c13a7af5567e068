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
#include "fohinf/statespace.hpp"

namespace fohinf {

StateSpace plant_subsystem(const Plant& plant, int i, int j) {
    if ((i != 1 && i != 2) || (j != 1 && j != 2)) {
        throw Error(Errc::InvalidArgument, "subsystem indices must be 1 or 2");
    }
    const Matrix& B = j == 1 ? plant.B1 : plant.B2;
    const Matrix& C = i == 1 ? plant.C1 : plant.C2;
    const Matrix& D = i == 1 ? (j == 1 ? plant.D11 : plant.D12) : (j == 1 ? plant.D21 : plant.D22);
    return {plant.A, B, C, D};
}

namespace detail {

/// (I - D22 DK)^-1, or an exact identity when D22 vanishes.
Matrix feedthrough_inverse(const Plant& plant, const Controller& k, double cap) {
    const auto p2 = plant.p2();
    if (plant.D22.isZero(0.0)) return Matrix::Identity(p2, p2);
    const Matrix M = Matrix::Identity(p2, p2) - plant.D22 * k.DK;
    Eigen::JacobiSVD<Matrix> svd(M);
    const double smin = svd.singularValues()(p2 - 1);
    if (!(smin > 0.0) || 1.0 / smin > cap) {
        throw Error(Errc::IllPosed, "I - D22*DK is singular or too ill-conditioned");
    }
    return M.inverse();
}

}  // namespace detail

StateSpace lft_closed_loop(const Plant& plant, const Controller& k, double ill_posed_cap) {
    k.validate_for(plant);
    const auto n = plant.n(), nK = k.order();
    const Matrix Delta = detail::feedthrough_inverse(plant, k, ill_posed_cap);
    const Matrix DKDelta = k.DK * Delta;
    const bool has_d22 = !plant.D22.isZero(0.0);

    StateSpace cl;
    cl.A.resize(n + nK, n + nK);
    cl.B.resize(n + nK, plant.m1());
    cl.C.resize(plant.p1(), n + nK);

    cl.A.topLeftCorner(n, n) = plant.A + plant.B2 * DKDelta * plant.C2;
    cl.B.topRows(n) = plant.B1 + plant.B2 * DKDelta * plant.D21;
    cl.C.leftCols(n) = plant.C1 + plant.D12 * DKDelta * plant.C2;
    cl.D = plant.D11 + plant.D12 * DKDelta * plant.D21;
    if (nK > 0) {
        const Matrix ECK = has_d22 ? Matrix(k.CK + DKDelta * plant.D22 * k.CK) : k.CK;
        cl.A.topRightCorner(n, nK) = plant.B2 * ECK;
        cl.A.bottomLeftCorner(nK, n) = k.BK * Delta * plant.C2;
        cl.A.bottomRightCorner(nK, nK) =
            has_d22 ? Matrix(k.AK + k.BK * Delta * plant.D22 * k.CK) : k.AK;
        cl.B.bottomRows(nK) = k.BK * Delta * plant.D21;
        cl.C.rightCols(nK) = plant.D12 * ECK;
    }
    return cl;
}

CMatrix transfer_eval(const StateSpace& sys, Complex s) {
    const auto n = sys.order();
    CMatrix T = sys.D.cast<Complex>();
    if (n == 0) return T;
    CMatrix M = -sys.A.cast<Complex>();
    M.diagonal().array() += s;
    Eigen::PartialPivLU<CMatrix> lu(M);
    const double rc = lu.rcond();
    if (!(rc > 1e-15)) {
        throw Error(Errc::SingularResolvent, "sI - A is numerically singular");
    }
    T.noalias() += sys.C.cast<Complex>() * lu.solve(sys.B.cast<Complex>());
    return T;
}

}  // namespace fohinf
