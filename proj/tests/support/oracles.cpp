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
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fohinf/gradients.hpp"

namespace fohinf::test {

Matrix Gen::matrix(Eigen::Index r, Eigen::Index c, double scale) {
    Matrix M(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) M(i, j) = scale * normal();
    }
    return M;
}

Matrix Gen::stable_matrix(Eigen::Index n, double margin) {
    Matrix A = matrix(n, n);
    const double alpha = complex_eigenvalues(A).real().maxCoeff();
    A.diagonal().array() -= alpha + margin + uniform(0.0, 1.0);
    return A;
}

StateSpace random_stable_system(Gen& g, Eigen::Index n, Eigen::Index m, Eigen::Index p) {
    return {g.stable_matrix(n), g.matrix(n, m), g.matrix(p, n), g.matrix(p, m)};
}

Plant random_plant(Gen& g, Eigen::Index n, Eigen::Index m1, Eigen::Index m2, Eigen::Index p1,
                   Eigen::Index p2, bool stable_a, bool with_d22) {
    Plant p;
    p.A = stable_a ? g.stable_matrix(n) : g.matrix(n, n);
    p.B1 = g.matrix(n, m1);
    p.B2 = g.matrix(n, m2);
    p.C1 = g.matrix(p1, n);
    p.C2 = g.matrix(p2, n);
    p.D11 = g.matrix(p1, m1);
    p.D12 = g.matrix(p1, m2);
    p.D21 = g.matrix(p2, m1);
    p.D22 = with_d22 ? g.matrix(p2, m2, 0.3) : Matrix::Zero(p2, m2);
    return p;
}

Controller random_controller_dense(Gen& g, Eigen::Index nK, Eigen::Index m2, Eigen::Index p2,
                                   double scale) {
    Controller k;
    k.AK = nK > 0 ? Matrix(g.stable_matrix(nK)) : Matrix(0, 0);
    k.BK = g.matrix(nK, p2, scale);
    k.CK = g.matrix(m2, nK, scale);
    k.DK = g.matrix(m2, p2, scale);
    return k;
}

CVector complex_eigenvalues(const Matrix& A) {
    Eigen::ComplexEigenSolver<CMatrix> ces(A.cast<Complex>(), false);
    return ces.eigenvalues();
}

CMatrix explicit_transfer(const StateSpace& sys, Complex s) {
    const auto n = sys.A.rows();
    const CMatrix R = (s * CMatrix::Identity(n, n) - sys.A.cast<Complex>()).inverse();
    return sys.C.cast<Complex>() * R * sys.B.cast<Complex>() + sys.D.cast<Complex>();
}

CMatrix blockwise_lft(const Plant& p, const Controller& k, Complex s) {
    const auto n = p.A.rows();
    const CMatrix R = (s * CMatrix::Identity(n, n) - p.A.cast<Complex>()).inverse();
    auto G = [&](const Matrix& C, const Matrix& B, const Matrix& D) -> CMatrix {
        return C.cast<Complex>() * R * B.cast<Complex>() + D.cast<Complex>();
    };
    const CMatrix G11 = G(p.C1, p.B1, p.D11), G12 = G(p.C1, p.B2, p.D12);
    const CMatrix G21 = G(p.C2, p.B1, p.D21), G22 = G(p.C2, p.B2, p.D22);
    CMatrix K = k.DK.cast<Complex>();
    const auto nK = k.AK.rows();
    if (nK > 0) {
        const CMatrix RK = (s * CMatrix::Identity(nK, nK) - k.AK.cast<Complex>()).inverse();
        K += k.CK.cast<Complex>() * RK * k.BK.cast<Complex>();
    }
    const CMatrix I = CMatrix::Identity(p.C2.rows(), p.C2.rows());
    return G11 + G12 * K * (I - G22 * K).inverse() * G21;
}

namespace {

/// sigma_max(C V (jw - Lambda)^-1 V^-1 B + D) with V, Lambda fixed.
class ModalResponse {
public:
    explicit ModalResponse(const StateSpace& sys) : D_(sys.D.cast<Complex>()) {
        Eigen::ComplexEigenSolver<CMatrix> ces(sys.A.cast<Complex>(), true);
        lambda_ = ces.eigenvalues();
        const CMatrix V = ces.eigenvectors();
        Ct_ = sys.C.cast<Complex>() * V;
        Bt_ = V.partialPivLu().solve(sys.B.cast<Complex>());
    }

    double operator()(double w) const {
        const CVector r = (Complex(0.0, w) - lambda_.array()).inverse().matrix();
        const CMatrix T = Ct_ * r.asDiagonal() * Bt_ + D_;
        return Eigen::JacobiSVD<CMatrix>(T).singularValues()(0);
    }

private:
    CVector lambda_;
    CMatrix Ct_, Bt_, D_;
};

}  // namespace

GridNorm grid_hinf_norm(const StateSpace& sys, int points, double wmin, double wmax) {
    const ModalResponse sigma(sys);
    const double a = std::log(wmin), b = std::log(wmax);
    std::vector<double> vals(static_cast<std::size_t>(points));
    auto at = [&](int i) { return std::exp(a + (b - a) * i / (points - 1)); };
    for (int i = 0; i < points; ++i) vals[static_cast<std::size_t>(i)] = sigma(at(i));

    GridNorm best;
    best.gamma = Eigen::JacobiSVD<Matrix>(sys.D).singularValues()(0);
    best.omega = std::numeric_limits<double>::infinity();
    const double s0 = sigma(0.0);
    if (s0 >= best.gamma) {
        best.gamma = s0;
        best.omega = 0.0;
    }

    // Local maxima of the grid, largest first.
    std::vector<int> peaks;
    for (int i = 0; i < points; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        const bool left = i == 0 || v >= vals[static_cast<std::size_t>(i - 1)];
        const bool right = i == points - 1 || v >= vals[static_cast<std::size_t>(i + 1)];
        if (left && right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int x, int y) {
        return vals[static_cast<std::size_t>(x)] > vals[static_cast<std::size_t>(y)];
    });
    if (peaks.size() > 8) peaks.resize(8);

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i : peaks) {
        double lo = a + (b - a) * std::max(i - 1, 0) / (points - 1);
        double hi = a + (b - a) * std::min(i + 1, points - 1) / (points - 1);
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = sigma(std::exp(x1)), f2 = sigma(std::exp(x2));
        while (hi - lo > 1e-13) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = sigma(std::exp(x1));
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = sigma(std::exp(x2));
            }
        }
        const double x = 0.5 * (lo + hi);
        const double v = std::max({sigma(std::exp(x)), vals[static_cast<std::size_t>(i)]});
        if (v > best.gamma) {
            best.gamma = v;
            best.omega = std::exp(x);
        }
    }
    return best;
}

double central_difference(const std::function<double(const Vector&)>& f, const Vector& theta,
                          const Vector& dir) {
    const double h = 1e-6 * (1.0 + theta.lpNorm<Eigen::Infinity>());
    return (f(theta + h * dir) - f(theta - h * dir)) / (2.0 * h);
}

DirectionCheck check_direction(Functional f, const Plant& plant, const Controller& k,
                               const Vector& dir, double rel) {
    const ControllerDims dims = k.dims();
    GradientOptions go;
    go.norm_rel_tol = 1e-10;
    const GradientReport rep =
        f == Functional::Abscissa ? abscissa_gradient(plant, k, go) : hinf_gradient(plant, k, go);
    auto value = [&](const Vector& theta) {
        const StateSpace cl = lft_closed_loop(plant, unpack(theta, dims));
        if (f == Functional::Abscissa) return complex_eigenvalues(cl.A).real().maxCoeff();
        return hinf_norm(cl, 1e-12).gamma;
    };
    DirectionCheck c;
    c.smooth = rep.hint == Smoothness::Smooth;
    c.analytic = rep.grad.dot(dir);
    c.numeric = central_difference(value, pack(k), dir);
    c.agree = std::abs(c.analytic - c.numeric) <= rel * (1.0 + std::abs(c.analytic));
    return c;
}

std::pair<Plant, Controller> random_stable_loop(Gen& g, Eigen::Index n, Eigen::Index nK,
                                                bool with_d22) {
    for (;;) {
        const auto m1 = g.integer(1, 3), m2 = g.integer(1, 3), p1 = g.integer(1, 3),
                   p2 = g.integer(1, 3);
        const Plant p = random_plant(g, n, m1, m2, p1, p2, true, with_d22);
        const Controller k = random_controller_dense(g, nK, m2, p2, 0.3);
        try {
            const StateSpace cl = lft_closed_loop(p, k);
            if (complex_eigenvalues(cl.A).real().maxCoeff() < -1e-3) return {p, k};
        } catch (const Error&) {
        }
    }
}

namespace {

/// Enumerate lattice points w = c / res on the simplex inside the box lo <= w <= hi.
void scan(const std::vector<Vector>& pts, int res, const Vector& lo, const Vector& hi,
          std::size_t idx, Vector& w, double remaining, GridHull& best) {
    const auto m = pts.size();
    const double step = 1.0 / res;
    if (idx + 1 == m) {
        w(static_cast<Eigen::Index>(idx)) = remaining;
        if (remaining < lo(static_cast<Eigen::Index>(idx)) - 1e-12 ||
            remaining > hi(static_cast<Eigen::Index>(idx)) + 1e-12) {
            return;
        }
        Vector d = Vector::Zero(pts.front().size());
        for (std::size_t i = 0; i < m; ++i) d += w(static_cast<Eigen::Index>(i)) * pts[i];
        const double nd = d.norm();
        if (nd < best.norm) {
            best.norm = nd;
            best.weights = w;
        }
        return;
    }
    const auto i = static_cast<Eigen::Index>(idx);
    const int kmin = static_cast<int>(std::ceil(lo(i) / step - 1e-9));
    const int kmax = static_cast<int>(std::floor(std::min(hi(i), remaining) / step + 1e-9));
    for (int k = std::max(kmin, 0); k <= kmax; ++k) {
        w(i) = k * step;
        scan(pts, res, lo, hi, idx + 1, w, remaining - w(i), best);
    }
}

}  // namespace

GridHull simplex_grid_min_norm(const std::vector<Vector>& points) {
    const auto m = static_cast<Eigen::Index>(points.size());
    GridHull best;
    best.norm = std::numeric_limits<double>::infinity();
    Vector w(m);
    Vector lo = Vector::Zero(m), hi = Vector::Ones(m);
    scan(points, 20, lo, hi, 0, w, 1.0, best);
    // The objective is convex in w: zoom into a box of +-1.5 coarse cells
    // around the incumbent at ten times finer resolution.
    for (int res = 200; res <= 200000; res *= 10) {
        const double cell = 10.0 / res;
        const Vector c = best.weights;
        lo = (c.array() - 1.5 * cell).cwiseMax(0.0);
        hi = (c.array() + 1.5 * cell).cwiseMin(1.0);
        scan(points, res, lo, hi, 0, w, 1.0, best);
    }
    // Nearly collinear points leave a flat valley that the zoom can miss, so
    // finish with exact pairwise weight exchanges (each a 1-D convex quadratic).
    Matrix G(points.front().size(), m);
    for (Eigen::Index i = 0; i < m; ++i) G.col(i) = points[static_cast<std::size_t>(i)];
    Vector wb = best.weights;
    Vector d = G * wb;
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double gain = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                // Move t from weight j to weight i: d(t) = d + t (g_i - g_j), t in [-w_i, w_j].
                const Vector e = G.col(i) - G.col(j);
                const double ee = e.squaredNorm();
                if (i == j || ee == 0.0) continue;
                const double t = std::clamp(-d.dot(e) / ee, -wb(i), wb(j));
                if (t == 0.0) continue;
                const double before = d.squaredNorm();
                const Vector nd = d + t * e;
                if (!(nd.squaredNorm() < before)) continue;
                gain += before - nd.squaredNorm();
                wb(i) += t;
                wb(j) -= t;
                d = nd;
            }
        }
        if (gain <= 1e-30) break;
    }
    if (d.norm() < best.norm) {
        best.norm = d.norm();
        best.weights = wb;
    }
    return best;
}

}  // namespace fohinf::test
