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
#include "fohinf/nonsmooth.hpp"

namespace fohinf {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::BFGSOnly: return "BFGSOnly";
        case Phase::Bundle: return "Bundle";
        case Phase::GradientSampling: return "GradientSampling";
    }
    return "?";
}

MinNormResult min_norm_convex_hull(const std::vector<Eigen::VectorXd>& gradients) {
    if (gradients.empty()) throw Error(Errc::InvalidArgument, "empty gradient list");
    const auto n = gradients.front().size();
    const auto m = static_cast<Eigen::Index>(gradients.size());
    for (const auto& g : gradients) {
        if (g.size() != n) throw Error(Errc::DimensionMismatch, "gradients differ in length");
    }
    Eigen::MatrixXd P(n, m);
    for (Eigen::Index j = 0; j < m; ++j) P.col(j) = gradients[static_cast<std::size_t>(j)];

    MinNormResult out;
    out.weights = Eigen::VectorXd::Zero(m);
    if (m == 1) {
        out.d = P.col(0);
        out.weights(0) = 1.0;
        return out;
    }

    const Eigen::VectorXd norms2 = P.colwise().squaredNorm().transpose();
    const double scale2 = std::max(norms2.maxCoeff(), std::numeric_limits<double>::min());
    Eigen::Index j0 = 0;
    norms2.minCoeff(&j0);

    std::vector<Eigen::Index> S = {j0};
    Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd x = P.col(j0);

    constexpr double kZ1 = 1e-14, kZ2 = 1e-12;
    for (int major = 0; major < 10 * (m + n) + 50; ++major) {
        const Eigen::VectorXd proj = P.transpose() * x;
        Eigen::Index j = 0;
        proj.minCoeff(&j);
        if (proj(j) >= x.squaredNorm() - kZ1 * scale2) break;
        if (std::find(S.begin(), S.end(), j) != S.end()) break;
        S.push_back(j);
        w.conservativeResize(static_cast<Eigen::Index>(S.size()));
        w(w.size() - 1) = 0.0;

        for (int minor = 0; minor < 10 * (m + n) + 50; ++minor) {
            const auto k = static_cast<Eigen::Index>(S.size());
            Eigen::MatrixXd PS(n, k);
            for (Eigen::Index i = 0; i < k; ++i) PS.col(i) = P.col(S[static_cast<std::size_t>(i)]);
            // Affine minimizer: v proportional to (1 1^T + PS^T PS)^-1 1.
            Eigen::MatrixXd M = PS.transpose() * PS / scale2;
            M.array() += 1.0;
            Eigen::VectorXd v =
                M.completeOrthogonalDecomposition().solve(Eigen::VectorXd::Ones(k));
            v /= v.sum();
            if ((v.array() > kZ2).all()) {
                w = v;
                break;
            }
            double theta = 1.0;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (v(i) <= kZ2 && w(i) - v(i) > 0.0) theta = std::min(theta, w(i) / (w(i) - v(i)));
            }
            w = (1.0 - theta) * w + theta * v;
            std::vector<Eigen::Index> keptS;
            std::vector<double> keptW;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (w(i) > kZ2) {
                    keptS.push_back(S[static_cast<std::size_t>(i)]);
                    keptW.push_back(w(i));
                }
            }
            if (keptS.empty()) {
                Eigen::Index best = 0;
                w.maxCoeff(&best);
                keptS = {S[static_cast<std::size_t>(best)]};
                keptW = {1.0};
            }
            S = keptS;
            w = Eigen::Map<Eigen::VectorXd>(keptW.data(), static_cast<Eigen::Index>(keptW.size()));
            w /= w.sum();
        }
        x.setZero();
        for (std::size_t i = 0; i < S.size(); ++i) x += w(static_cast<Eigen::Index>(i)) * P.col(S[i]);
    }

    for (std::size_t i = 0; i < S.size(); ++i) out.weights(S[i]) = w(static_cast<Eigen::Index>(i));
    out.weights = out.weights.cwiseMax(0.0);
    out.weights /= out.weights.sum();
    out.d = P * out.weights;
    // Never worse than the best vertex.
    if (out.d.squaredNorm() > norms2(j0)) {
        out.weights.setZero();
        out.weights(j0) = 1.0;
        out.d = P.col(j0);
    }
    return out;
}

namespace detail {

/// Counts oracle calls and maps NaN or malformed results to +inf.
class CountingOracle {
public:
    CountingOracle(const Oracle& f, Eigen::Index dim) : f_(f), dim_(dim) {}

    Evaluation operator()(const Eigen::VectorXd& x) {
        ++count_;
        Evaluation e = f_(x);
        if (std::isnan(e.f) || (std::isfinite(e.f) && (e.g.size() != dim_ || !e.g.allFinite()))) {
            e.f = std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(e.f)) e.f = std::numeric_limits<double>::infinity();
        return e;
    }

    int count() const { return count_; }

private:
    const Oracle& f_;
    Eigen::Index dim_;
    int count_ = 0;
};

struct Sample {
    Eigen::VectorXd x;
    Eigen::VectorXd g;
};

struct RunState {
    Eigen::VectorXd x;
    double f;
    Eigen::VectorXd g;
};

void record_best(OptResult& r, const RunState& s) {
    if (s.f < r.f_best || r.x_best.size() == 0) {
        r.x_best = s.x;
        r.f_best = s.f;
        r.g_best = s.g;
    }
}

RunState start_state(CountingOracle& oracle, const Eigen::VectorXd& x0) {
    Evaluation e = oracle(x0);
    if (!std::isfinite(e.f)) throw Error(Errc::InfeasibleStart, "f(x0) is not finite");
    return {x0, e.f, std::move(e.g)};
}

struct LineSearchResult {
    double t = 0.0;
    Evaluation eval;
    bool wolfe = false;
};

/**
 * Weak Wolfe bracketing: expand while the curvature condition fails, bisect
 * once an upper bracket (no sufficient decrease, or f = +inf) is known.
 */
LineSearchResult weak_wolfe(CountingOracle& oracle, const RunState& s,
                                   const Eigen::VectorXd& d, const OptOptions& opts,
                                   const Deadline& deadline) {
    const double gtd = s.g.dot(d);
    const int max_bisect = std::max(30, static_cast<int>(std::round(std::log2(1e5 * d.norm()))));
    const int max_expand = 30;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity(), t = 1.0;
    LineSearchResult best;
    int nbisect = 0, nexpand = 0;
    while (nbisect <= max_bisect && nexpand <= max_expand) {
        Evaluation e = oracle(s.x + t * d);
        if (!(e.f < s.f + opts.wolfe_c1 * t * gtd)) {
            hi = t;
        } else if (e.g.dot(d) < opts.wolfe_c2 * gtd) {
            lo = t;
            best.t = t;
            best.eval = std::move(e);
            if (best.eval.f < opts.target_value) return best;
        } else {
            best.t = t;
            best.eval = std::move(e);
            best.wolfe = true;
            return best;
        }
        if (deadline.expired()) break;
        if (std::isfinite(hi)) {
            t = 0.5 * (lo + hi);
            ++nbisect;
        } else {
            t = 2.0 * lo;
            ++nexpand;
        }
    }
    return best;
}

OptResult bfgs_run(CountingOracle& oracle, const Eigen::VectorXd& x0,
                          const OptOptions& opts, const Deadline& deadline,
                          std::deque<Sample>* history) {
    OptResult r;
    r.phase_reached = Phase::BFGSOnly;
    RunState s = start_state(oracle, x0);
    record_best(r, s);
    const auto n = x0.size();
    const auto keep = static_cast<std::size_t>(opts.bundle(n));
    auto remember = [&](const RunState& st) {
        if (!history) return;
        history->push_back({st.x, st.g});
        while (history->size() > keep) history->pop_front();
    };
    remember(s);

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;
    r.stop_reason = "max_iters";
    for (int it = 0; it < opts.max_iters; ++it) {
        if (s.f < opts.target_value) {
            r.target_reached = true;
            r.stop_reason = "target";
            break;
        }
        if (s.g.norm() <= opts.grad_norm_tol) {
            r.stop_reason = "gradient_tolerance";
            break;
        }
        if (deadline.expired()) {
            r.stop_reason = "budget";
            break;
        }
        Eigen::VectorXd d = -H * s.g;
        if (!d.allFinite() || !(s.g.dot(d) < 0.0)) {
            H.setIdentity();
            scaled = false;
            d = -s.g;
        }
        LineSearchResult ls = weak_wolfe(oracle, s, d, opts, deadline);
        ++r.iters;
        if (ls.t == 0.0) {
            r.stop_reason = "line_search_failed";
            break;
        }
        const Eigen::VectorXd step = ls.t * d;
        const Eigen::VectorXd y = ls.eval.g - s.g;
        s.x = s.x + step;
        s.f = ls.eval.f;
        s.g = std::move(ls.eval.g);
        record_best(r, s);
        remember(s);
        if (s.f < opts.target_value) {
            r.target_reached = true;
            r.stop_reason = "target";
            break;
        }
        if (!ls.wolfe) {
            r.stop_reason = "line_search_failed";
            break;
        }
        const double sty = step.dot(y);
        if (sty > 0.0) {
            if (!scaled) {
                H *= sty / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sty;
            const Eigen::VectorXd Hy = H * y;
            H -= rho * (step * Hy.transpose() + Hy * step.transpose());
            H += (rho * rho * y.dot(Hy) + rho) * (step * step.transpose());
            if (!H.allFinite()) {
                H.setIdentity();
                scaled = false;
            }
        }
    }
    if (r.f_best < opts.target_value) r.target_reached = true;
    r.optimality_measure = r.g_best.norm();
    return r;
}

OptResult bundle_run(CountingOracle& oracle, const Eigen::VectorXd& x0,
                            const OptOptions& opts, const Deadline& deadline,
                            const std::deque<Sample>& seed) {
    OptResult r;
    r.phase_reached = Phase::Bundle;
    RunState s = start_state(oracle, x0);
    record_best(r, s);
    const auto n = x0.size();
    const auto cap = static_cast<std::size_t>(opts.bundle(n));
    Rng rng(derive_seed(opts.rng_seed, 1));

    std::vector<double> radii = opts.sampling_radii;
    if (radii.empty()) radii = {1e-3};
    std::size_t level = 0;
    auto radius = [&] { return radii[level] * (1.0 + s.x.norm()); };

    std::vector<Sample> bundle;
    auto prune = [&] {
        const double rad = radius();
        std::erase_if(bundle, [&](const Sample& b) { return (b.x - s.x).norm() > rad; });
    };
    bundle.push_back({s.x, s.g});
    for (const auto& h : seed) bundle.push_back(h);
    prune();

    bool moved = false;
    r.bundle_outcome = BundleOutcome::Inconclusive;
    r.stop_reason = "max_iters";
    for (int it = 0; it < opts.max_iters; ++it) {
        if (s.f < opts.target_value) {
            r.target_reached = true;
            r.stop_reason = "target";
            break;
        }
        if (deadline.expired()) {
            r.stop_reason = "budget";
            break;
        }
        ++r.iters;
        std::vector<Eigen::VectorXd> grads = {s.g};
        for (const auto& b : bundle) grads.push_back(b.g);
        MinNormResult mn = min_norm_convex_hull(grads);
        double measure = mn.d.norm();
        if (measure <= opts.grad_norm_tol) {
            r.optimality_measure = measure;
            r.bundle_outcome = BundleOutcome::Verified;
            r.stop_reason = "verified";
            break;
        }
        // Enrich with fresh nearby gradients before trying to move.
        while (bundle.size() < cap && !deadline.expired()) {
            const Eigen::VectorXd p = s.x + rng.in_ball(n, radius());
            Evaluation e = oracle(p);
            if (std::isfinite(e.f)) bundle.push_back({p, std::move(e.g)});
            else break;
        }
        grads.assign(1, s.g);
        for (const auto& b : bundle) grads.push_back(b.g);
        mn = min_norm_convex_hull(grads);
        measure = mn.d.norm();
        r.optimality_measure = measure;
        if (measure <= opts.grad_norm_tol) {
            r.bundle_outcome = BundleOutcome::Verified;
            r.stop_reason = "verified";
            break;
        }

        bool accepted = false;
        double t = 1.0;
        for (int k = 0; k < 50 && !deadline.expired(); ++k, t *= 0.5) {
            const Eigen::VectorXd xt = s.x - t * mn.d;
            Evaluation e = oracle(xt);
            if (e.f < s.f - opts.wolfe_c1 * t * measure * measure) {
                s = {xt, e.f, std::move(e.g)};
                accepted = true;
                break;
            }
        }
        if (accepted) {
            moved = true;
            record_best(r, s);
            prune();
            bundle.push_back({s.x, s.g});
            if (bundle.size() > cap) bundle.erase(bundle.begin());
            continue;
        }
        if (++level >= radii.size()) {
            r.stop_reason = "radii_exhausted";
            break;
        }
        prune();
    }
    if (r.bundle_outcome != BundleOutcome::Verified && moved) {
        r.bundle_outcome = BundleOutcome::Improved;
    }
    if (r.f_best < opts.target_value) r.target_reached = true;
    return r;
}

OptResult sampling_run(CountingOracle& oracle, const Eigen::VectorXd& x0,
                              const OptOptions& opts, const Deadline& deadline) {
    OptResult r;
    r.phase_reached = Phase::GradientSampling;
    RunState s = start_state(oracle, x0);
    record_best(r, s);
    const auto n = x0.size();
    const int m = opts.samples(n);
    Rng rng(derive_seed(opts.rng_seed, 2));
    r.optimality_measure = s.g.norm();
    r.stop_reason = "radii_exhausted";

    for (double base : opts.sampling_radii) {
        bool stop = false;
        while (true) {
            if (s.f < opts.target_value) {
                r.target_reached = true;
                r.stop_reason = "target";
                stop = true;
                break;
            }
            if (r.iters >= opts.max_iters) {
                r.stop_reason = "max_iters";
                stop = true;
                break;
            }
            if (deadline.expired()) {
                r.stop_reason = "budget";
                stop = true;
                break;
            }
            ++r.iters;
            const double rad = base * (1.0 + s.x.norm());
            std::vector<Eigen::VectorXd> grads = {s.g};
            for (int j = 0; j < m && !deadline.expired(); ++j) {
                Evaluation e = oracle(s.x + rng.in_ball(n, rad));
                if (std::isfinite(e.f)) grads.push_back(std::move(e.g));
            }
            const MinNormResult mn = min_norm_convex_hull(grads);
            const double measure = mn.d.norm();
            r.optimality_measure = measure;
            if (measure <= opts.grad_norm_tol) break;

            bool accepted = false;
            double t = 1.0;
            for (int k = 0; k < 50 && !deadline.expired(); ++k, t *= 0.5) {
                const Eigen::VectorXd xt = s.x - t * mn.d;
                Evaluation e = oracle(xt);
                if (e.f < s.f - opts.wolfe_c1 * t * measure * measure) {
                    s = {xt, e.f, std::move(e.g)};
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
            record_best(r, s);
        }
        if (stop) break;
    }
    if (r.f_best < opts.target_value) r.target_reached = true;
    return r;
}

void finish(OptResult& r, const CountingOracle& oracle, const Deadline& deadline) {
    r.evaluations = oracle.count();
    r.elapsed_seconds = deadline.elapsed();
}

}  // namespace detail

OptResult bfgs_nonsmooth(const Oracle& f, const Eigen::VectorXd& x0,
                                const OptOptions& opts) {
    opts.validate();
    Deadline deadline(opts.cpu_budget_seconds);
    detail::CountingOracle oracle(f, x0.size());
    OptResult r = detail::bfgs_run(oracle, x0, opts, deadline, nullptr);
    detail::finish(r, oracle, deadline);
    return r;
}

OptResult bundle_phase(const Oracle& f, const Eigen::VectorXd& x0,
                              const OptOptions& opts) {
    opts.validate();
    Deadline deadline(opts.cpu_budget_seconds);
    detail::CountingOracle oracle(f, x0.size());
    OptResult r = detail::bundle_run(oracle, x0, opts, deadline, {});
    detail::finish(r, oracle, deadline);
    return r;
}

OptResult gradient_sampling(const Oracle& f, const Eigen::VectorXd& x0,
                                   const OptOptions& opts) {
    opts.validate();
    Deadline deadline(opts.cpu_budget_seconds);
    detail::CountingOracle oracle(f, x0.size());
    OptResult r = detail::sampling_run(oracle, x0, opts, deadline);
    detail::finish(r, oracle, deadline);
    return r;
}

OptResult hanso(const Oracle& f, const std::vector<Eigen::VectorXd>& starts,
                       const OptOptions& opts) {
    opts.validate();
    if (starts.empty()) throw Error(Errc::AllStartsInfeasible, "no starting points");
    Deadline deadline(opts.cpu_budget_seconds);
    detail::CountingOracle oracle(f, starts.front().size());

    OptResult best;
    std::deque<detail::Sample> best_history;
    bool any = false;
    int iters = 0;
    for (const auto& x0 : starts) {
        if (x0.size() != starts.front().size()) {
            throw Error(Errc::DimensionMismatch, "starting points differ in length");
        }
        std::deque<detail::Sample> history;
        OptResult r;
        try {
            r = detail::bfgs_run(oracle, x0, opts, deadline, &history);
        } catch (const Error& e) {
            if (e.code() == Errc::InfeasibleStart) continue;
            throw;
        }
        iters += r.iters;
        if (!any || r.f_best < best.f_best) {
            best = std::move(r);
            best_history = std::move(history);
            any = true;
        }
        if (best.target_reached || deadline.expired()) break;
    }
    if (!any) throw Error(Errc::AllStartsInfeasible, "every start has f = +inf");

    auto absorb = [&](OptResult& phase) {
        iters += phase.iters;
        best.phase_reached = phase.phase_reached;
        best.optimality_measure = phase.optimality_measure;
        best.stop_reason = phase.stop_reason;
        if (phase.f_best < best.f_best) {
            best.x_best = phase.x_best;
            best.f_best = phase.f_best;
            best.g_best = phase.g_best;
        }
        best.target_reached = best.f_best < opts.target_value;
    };

    if (!best.target_reached && !deadline.expired()) {
        OptResult b = detail::bundle_run(oracle, best.x_best, opts, deadline, best_history);
        best.bundle_outcome = b.bundle_outcome;
        absorb(b);
        if (b.bundle_outcome != BundleOutcome::Verified && !best.target_reached &&
            !deadline.expired()) {
            OptResult g = detail::sampling_run(oracle, best.x_best, opts, deadline);
            absorb(g);
        }
    }
    best.iters = iters;
    detail::finish(best, oracle, deadline);
    return best;
}

}  // namespace fohinf
