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
#include "fohinf/gradients.hpp"

namespace fohinf {

namespace detail {

/// Sensitivities of a scalar functional to the closed-loop matrices.
struct ClosedLoopSensitivity {
    Matrix GA, GB, GC, GD;
};

/// Chain rule from closed-loop sensitivities to the packed controller gradient.
Vector pullback(const Plant& plant, const Controller& k, const ClosedLoopSensitivity& s) {
    const auto n = plant.n(), nK = k.order(), m2 = plant.m2(), p2 = plant.p2();
    const auto nu = m2 + nK, ny = p2 + nK;

    // GQ = B2t' GA C2t' + B2t' GB D21t' + D12t' GC C2t' + D12t' GD D21t'
    Matrix GQ = Matrix::Zero(nu, ny);
    const Matrix GA_x = s.GA.topLeftCorner(n, n);
    GQ.topLeftCorner(m2, p2) = plant.B2.transpose() * GA_x * plant.C2.transpose() +
                               plant.B2.transpose() * s.GB.topRows(n) * plant.D21.transpose() +
                               plant.D12.transpose() * s.GC.leftCols(n) * plant.C2.transpose() +
                               plant.D12.transpose() * s.GD * plant.D21.transpose();
    if (nK > 0) {
        GQ.topRightCorner(m2, nK) = plant.B2.transpose() * s.GA.topRightCorner(n, nK) +
                                    plant.D12.transpose() * s.GC.rightCols(nK);
        GQ.bottomLeftCorner(nK, p2) = s.GA.bottomLeftCorner(nK, n) * plant.C2.transpose() +
                                      s.GB.bottomRows(nK) * plant.D21.transpose();
        GQ.bottomRightCorner(nK, nK) = s.GA.bottomRightCorner(nK, nK);
    }

    Matrix GK = GQ;
    if (!plant.D22.isZero(0.0)) {
        // Well-posedness was already checked when the closed loop was formed.
        Matrix Kt(nu, ny);
        Kt << k.DK, k.CK, k.BK, k.AK;
        Matrix D22t = Matrix::Zero(ny, nu);
        D22t.topLeftCorner(p2, m2) = plant.D22;
        const Matrix L = (Matrix::Identity(nu, nu) - Kt * D22t).inverse();
        const Matrix R = (Matrix::Identity(ny, ny) - D22t * Kt).inverse();
        GK = L.transpose() * GQ * R.transpose();
    }

    Controller g = Controller::zeros(k.dims());
    g.DK = GK.topLeftCorner(m2, p2);
    if (nK > 0) {
        g.CK = GK.topRightCorner(m2, nK);
        g.BK = GK.bottomLeftCorner(nK, p2);
        g.AK = GK.bottomRightCorner(nK, nK);
    }
    return pack(g);
}

}  // namespace detail

GradientReport abscissa_gradient(const Plant& plant, const Controller& k,
                                        const GradientOptions& opts) {
    const StateSpace cl = lft_closed_loop(plant, k, opts.ill_posed_cap);
    const auto N = cl.order();
    Eigen::EigenSolver<Matrix> es(cl.A, true);
    if (es.info() != Eigen::Success) throw Error(Errc::EigenFailure, "eigenvalue solver failed");
    const CVector lam = es.eigenvalues();
    const CMatrix V = es.eigenvectors();

    double alpha = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < N; ++i) alpha = std::max(alpha, lam(i).real());
    const double tie = kDefaultTieRelTol * (1.0 + std::abs(alpha));
    Eigen::Index active = 0;
    for (Eigen::Index i = 0; i < N; ++i) {
        if (lam(i).real() >= alpha - tie) {
            active = i;
            break;
        }
    }

    GradientReport rep;
    rep.value = alpha;

    // Competing branches: every other eigenvalue except the conjugate partner.
    const Complex l0 = lam(active);
    const double scale = 1.0 + std::abs(l0);
    bool partner_skipped = false;
    for (Eigen::Index i = 0; i < N; ++i) {
        if (i == active) continue;
        const bool is_partner = std::abs(l0.imag()) > 1e-6 * scale &&
                                std::abs(lam(i) - std::conj(l0)) <= 1e-8 * scale;
        if (is_partner && !partner_skipped) {
            partner_skipped = true;
            continue;
        }
        rep.tie_gap = std::min(rep.tie_gap, alpha - lam(i).real());
    }

    // Left eigenvector from the eigenvector matrix: z = V^-T e_active, so z^T x = 1.
    Eigen::PartialPivLU<CMatrix> lu(V.transpose());
    CVector e = CVector::Zero(N);
    e(active) = 1.0;
    const CVector z = lu.solve(e);
    const CVector x = V.col(active);
    const double cond = z.norm() * x.norm();

    detail::ClosedLoopSensitivity s;
    s.GA = (z * x.transpose()).real();
    s.GB = Matrix::Zero(cl.B.rows(), cl.B.cols());
    s.GC = Matrix::Zero(cl.C.rows(), cl.C.cols());
    s.GD = Matrix::Zero(cl.D.rows(), cl.D.cols());
    rep.grad = detail::pullback(plant, k, s);

    if (!rep.grad.allFinite() || !(lu.rcond() > 1e-14)) {
        rep.grad = rep.grad.unaryExpr([](double v) { return std::isfinite(v) ? v : 0.0; });
        rep.hint = Smoothness::NearTie;
    }
    if (rep.tie_gap < opts.near_tie_rel * (1.0 + std::abs(alpha)) || cond > 1e8) {
        rep.hint = Smoothness::NearTie;
    }
    return rep;
}

GradientReport hinf_gradient(const Plant& plant, const Controller& k,
                                    const GradientOptions& opts) {
    const StateSpace cl = lft_closed_loop(plant, k, opts.ill_posed_cap);
    const NormResult nr = hinf_norm(cl, opts.norm_rel_tol);

    GradientReport rep;
    rep.value = nr.gamma;
    rep.peak_at_infinity = nr.attained_at_infinity;
    rep.omega_peak = nr.omega_peak;

    const auto N = cl.order();
    detail::ClosedLoopSensitivity s;
    s.GA = Matrix::Zero(N, N);
    s.GB = Matrix::Zero(N, cl.B.cols());
    s.GC = Matrix::Zero(cl.C.rows(), N);

    CMatrix T;
    Eigen::PartialPivLU<CMatrix> lu;
    if (nr.attained_at_infinity) {
        T = cl.D.cast<Complex>();
    } else {
        CMatrix M = -cl.A.cast<Complex>();
        M.diagonal().array() += Complex(0.0, nr.omega_peak);
        lu.compute(M);
        T = cl.C.cast<Complex>() * lu.solve(cl.B.cast<Complex>()) + cl.D.cast<Complex>();
    }

    if (T.size() == 0) {
        s.GD = Matrix::Zero(cl.D.rows(), cl.D.cols());
        rep.grad = detail::pullback(plant, k, s);
        return rep;
    }

    Eigen::JacobiSVD<CMatrix> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CVector u = svd.matrixU().col(0);
    const CVector v = svd.matrixV().col(0);
    const auto& sv = svd.singularValues();
    if (sv.size() > 1) rep.tie_gap = sv(0) - sv(1);

    s.GD = (u.conjugate() * v.transpose()).real();
    if (!nr.attained_at_infinity) {
        // p^T = u^H C (jwI - A)^-1,  q = (jwI - A)^-1 B v
        const CVector q = lu.solve(cl.B.cast<Complex>() * v);
        const CVector pt =
            lu.transpose().solve(cl.C.cast<Complex>().transpose() * u.conjugate());
        s.GA = (pt * q.transpose()).real();
        s.GB = (pt * v.transpose()).real();
        s.GC = (u.conjugate() * q.transpose()).real();
        // A finite peak competes with the value at infinity.
        rep.tie_gap = std::min(rep.tie_gap, nr.gamma - sigma_max(cl.D));
    }
    if (nr.secondary_peak > 0.0) {
        rep.tie_gap = std::min(rep.tie_gap, nr.gamma - nr.secondary_peak);
    }
    rep.grad = detail::pullback(plant, k, s);
    if (rep.tie_gap < opts.near_tie_rel * (1.0 + nr.gamma) || !nr.converged) {
        rep.hint = Smoothness::NearTie;
    }
    return rep;
}

}  // namespace fohinf
