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
#include "fohinf/analysis.hpp"

namespace fohinf {

CVector eigenvalues(const Matrix& A) {
    if (A.rows() != A.cols()) throw Error(Errc::DimensionMismatch, "matrix is not square");
    if (A.size() == 0) return CVector(0);
    if (!A.allFinite()) throw Error(Errc::NonFinite, "matrix has non-finite entries");
    Eigen::EigenSolver<Matrix> es(A, false);
    if (es.info() != Eigen::Success) throw Error(Errc::EigenFailure, "eigenvalue solver failed");
    return es.eigenvalues();
}

AbscissaResult spectral_abscissa(const Matrix& A, double tie_rel_tol) {
    AbscissaResult r;
    r.eigenvalues = eigenvalues(A);
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
        r.alpha = std::max(r.alpha, r.eigenvalues(i).real());
    }
    const double tie = tie_rel_tol * (1.0 + std::abs(r.alpha));
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
        if (r.eigenvalues(i).real() >= r.alpha - tie) r.active_indices.push_back(i);
    }
    return r;
}

double sigma_max(const CMatrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
}

double sigma_max(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

namespace detail {

/// sigma_max of the frequency response and its derivative with respect to omega.
class FrequencyResponse {
public:
    explicit FrequencyResponse(const StateSpace& sys)
        : A_(sys.A.cast<Complex>()), B_(sys.B.cast<Complex>()), C_(sys.C.cast<Complex>()),
          D_(sys.D.cast<Complex>()) {}

    double sigma(double omega) const { return sigma_max(transfer(omega)); }

    std::pair<double, double> sigma_and_slope(double omega) const {
        Eigen::PartialPivLU<CMatrix> lu(shifted(omega));
        const CMatrix X = lu.solve(B_);
        const CMatrix T = C_ * X + D_;
        Eigen::JacobiSVD<CMatrix> svd(T, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const CMatrix dT = Complex(0.0, -1.0) * (C_ * lu.solve(X));
        const Complex s = (svd.matrixU().col(0).adjoint() * dT * svd.matrixV().col(0))(0, 0);
        return {svd.singularValues()(0), s.real()};
    }

    CMatrix transfer(double omega) const {
        if (A_.rows() == 0) return D_;
        Eigen::PartialPivLU<CMatrix> lu(shifted(omega));
        return C_ * lu.solve(B_) + D_;
    }

private:
    CMatrix shifted(double omega) const {
        CMatrix M = -A_;
        M.diagonal().array() += Complex(0.0, omega);
        return M;
    }

    CMatrix A_, B_, C_, D_;
};

/// Hamiltonian whose imaginary eigenvalues j*w mark frequencies where gamma is a singular value.
Matrix hinf_hamiltonian(const StateSpace& sys, double gamma) {
    const auto n = sys.order(), m = sys.inputs(), p = sys.outputs();
    const double g2 = gamma * gamma;
    const Matrix R = sys.D.transpose() * sys.D - g2 * Matrix::Identity(m, m);
    const Matrix S = sys.D * sys.D.transpose() - g2 * Matrix::Identity(p, p);
    const Matrix Rinv = R.ldlt().solve(Matrix::Identity(m, m));
    const Matrix Sinv = S.ldlt().solve(Matrix::Identity(p, p));
    const Matrix BRinv = sys.B * Rinv;
    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = sys.A - BRinv * sys.D.transpose() * sys.C;
    H.topRightCorner(n, n) = -gamma * BRinv * sys.B.transpose();
    H.bottomLeftCorner(n, n) = gamma * sys.C.transpose() * Sinv * sys.C;
    H.bottomRightCorner(n, n) =
        -sys.A.transpose() + sys.C.transpose() * sys.D * BRinv.transpose();
    return H;
}

/// Local maximization of sigma(omega) from omega0 by root-finding on the slope.
std::pair<double, double> refine_peak(const FrequencyResponse& fr, double omega0) {
    auto [s0, d0] = fr.sigma_and_slope(omega0);
    if (omega0 <= 0.0 || d0 == 0.0) return {omega0, s0};

    double best_w = omega0, best_s = s0;
    const double dir = d0 > 0.0 ? 1.0 : -1.0;
    double step = 1e-6 * omega0;
    double lo = omega0, dlo = d0, hi = omega0, dhi = d0;
    bool bracketed = false;
    for (int i = 0; i < 80; ++i) {
        double w = omega0 + dir * step;
        if (w <= 0.0) {
            auto s_zero = fr.sigma(0.0);
            if (s_zero > best_s) return {0.0, s_zero};
            return {best_w, best_s};
        }
        auto [s, d] = fr.sigma_and_slope(w);
        if (s > best_s) best_s = s, best_w = w;
        if (d * dir <= 0.0) {
            if (dir > 0) hi = w, dhi = d;
            else lo = w, dlo = d;
            bracketed = true;
            break;
        }
        if (dir > 0) lo = w, dlo = d;
        else hi = w, dhi = d;
        step *= 2.0;
    }
    if (!bracketed) return {best_w, best_s};

    // Illinois-style regula falsi on the slope, slope(lo) > 0 > slope(hi).
    int side = 0;
    for (int i = 0; i < 100 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        double w = (lo * dhi - hi * dlo) / (dhi - dlo);
        if (!(w > lo && w < hi)) w = 0.5 * (lo + hi);
        auto [s, d] = fr.sigma_and_slope(w);
        if (s > best_s) best_s = s, best_w = w;
        if (d == 0.0) break;
        if (d > 0.0) {
            lo = w, dlo = d;
            if (side == 1) dhi *= 0.5;
            side = 1;
        } else {
            hi = w, dhi = d;
            if (side == -1) dlo *= 0.5;
            side = -1;
        }
    }
    return {best_w, best_s};
}

std::vector<double> pole_frequencies(const CVector& poles, std::size_t limit) {
    std::vector<std::pair<double, double>> ranked;  // (damping ratio, frequency)
    for (Eigen::Index i = 0; i < poles.size(); ++i) {
        const double mag = std::abs(poles(i));
        if (mag == 0.0 || poles(i).imag() < 0.0) continue;
        const double zeta = std::abs(poles(i).real()) / mag;
        ranked.emplace_back(zeta, std::abs(poles(i).imag()));
        ranked.emplace_back(zeta, mag);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> out;
    for (const auto& [zeta, w] : ranked) {
        if (out.size() >= limit) break;
        if (w > 0.0) out.push_back(w);
    }
    return out;
}

}  // namespace detail

NormResult hinf_norm(const StateSpace& sys, double rel_tol) {
    sys.validate();
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
        throw Error(Errc::InvalidArgument, "rel_tol must lie in (0, 1e-2]");
    }
    NormResult r;
    const double sD = sigma_max(sys.D);
    if (sys.inputs() == 0 || sys.outputs() == 0) return r;

    const CVector poles = eigenvalues(sys.A);
    for (Eigen::Index i = 0; i < poles.size(); ++i) {
        if (!(poles(i).real() < 0.0)) {
            throw Error(Errc::UnstableSystem, "hinf_norm requires a stable A");
        }
    }

    r.gamma = sD;
    r.attained_at_infinity = true;
    if (sys.order() == 0 || sys.B.isZero(0.0) || sys.C.isZero(0.0)) {
        r.upper_bound = sD;
        return r;
    }

    const detail::FrequencyResponse fr(sys);
    std::vector<std::pair<double, double>> candidates;  // (omega, sigma) seen along the way
    auto consider = [&](double w) {
        const double s = fr.sigma(w);
        candidates.emplace_back(w, s);
        if (s > r.gamma) {
            r.gamma = s;
            r.omega_peak = w;
            r.attained_at_infinity = false;
        }
    };
    consider(0.0);
    for (double w : detail::pole_frequencies(poles, 40)) consider(w);
    {
        // Coarse sweep so the starting bound rarely sits at sigma_max(D).
        const Eigen::ArrayXd mags = poles.cwiseAbs().array();
        const double lo = std::log10(std::max(mags.minCoeff(), 1e-12)) - 2.0;
        const double hi = std::log10(std::max(mags.maxCoeff(), 1e-12)) + 2.0;
        const int points = 32;
        for (int i = 0; i < points; ++i) consider(std::pow(10.0, lo + (hi - lo) * i / (points - 1)));
    }
    if (r.gamma == 0.0) return r;

    // Levels too close to sigma_max(D) make the Hamiltonian ill-conditioned.
    const double floor_level = (1.0 + kHamiltonianLevelGap) * sD;
    double level = 0.0;
    bool converged = false;
    bool fallback = false;
    for (int it = 0; it < 60; ++it) {
        level = std::max((1.0 + 2.0 * rel_tol) * r.gamma, floor_level);
        const Matrix H = detail::hinf_hamiltonian(sys, level);
        Eigen::EigenSolver<Matrix> es(H, false);
        if (es.info() != Eigen::Success || !H.allFinite()) {
            fallback = true;
            break;
        }
        const double hnorm = H.cwiseAbs().rowwise().sum().maxCoeff();
        std::vector<double> crossings;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const Complex lam = es.eigenvalues()(i);
            if (lam.imag() < 0.0) continue;
            if (std::abs(lam.real()) <= 1e-6 * (std::abs(lam) + 1e-2 * hnorm)) {
                crossings.push_back(lam.imag());
            }
        }
        if (crossings.empty()) {
            converged = true;
            break;
        }
        std::sort(crossings.begin(), crossings.end());
        std::vector<double> probes;
        if (crossings.size() == 1) {
            probes.push_back(crossings.front());
        } else {
            for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
                probes.push_back(0.5 * (crossings[i] + crossings[i + 1]));
            }
        }
        for (double w : probes) consider(w);
        if (r.gamma <= level) {
            // Only spurious crossings: nothing exceeds the test level.
            converged = true;
            break;
        }
    }

    if (fallback) {
        r.used_grid_fallback = true;
        const double scale = std::max(1.0, poles.cwiseAbs().maxCoeff());
        const int points = 2000;
        for (int i = 0; i < points; ++i) {
            consider(scale * std::pow(10.0, -8.0 + 14.0 * i / (points - 1)));
        }
        converged = true;
    }

    r.upper_bound = fallback ? (1.0 + 2.0 * rel_tol) * r.gamma
                             : std::max((1.0 + 2.0 * rel_tol) * r.gamma, level);
    if (!r.attained_at_infinity) {
        const auto [w, s] = detail::refine_peak(fr, r.omega_peak);
        if (s > r.gamma) {
            r.gamma = s;
            r.omega_peak = w;
        }
    }
    r.upper_bound = std::max(r.upper_bound, r.gamma);
    r.converged = converged;

    // Competing local peaks: refine the strongest candidates away from the main peak.
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    const double near = 1e-6 * (1.0 + r.omega_peak);
    int refined = 0;
    for (const auto& [w, s] : candidates) {
        if (refined >= 4 || s < 0.9 * r.gamma) break;
        if (!r.attained_at_infinity && std::abs(w - r.omega_peak) <= near) continue;
        const auto [w2, s2] = detail::refine_peak(fr, w);
        ++refined;
        if (!r.attained_at_infinity && std::abs(w2 - r.omega_peak) <= near) continue;
        r.secondary_peak = std::max(r.secondary_peak, std::min(s2, r.gamma));
    }
    return r;
}

}  // namespace fohinf
