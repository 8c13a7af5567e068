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
#include "fohinf/synthesis.hpp"

namespace fohinf {

Controller random_controller(const ControllerDims& dims, double scale, Rng& rng) {
    Vector theta = rng.normal_vector(dims.parameter_count()) * scale;
    return unpack(theta, dims);
}

namespace detail {

Evaluation abscissa_objective(const Plant& plant, const ControllerDims& dims,
                                     const Vector& theta) {
    try {
        GradientReport rep = abscissa_gradient(plant, unpack(theta, dims));
        return {rep.value, std::move(rep.grad)};
    } catch (const Error&) {
        return {};
    }
}

Evaluation hinf_objective(const Plant& plant, const ControllerDims& dims,
                                 const Vector& theta, double norm_rel_tol) {
    try {
        GradientOptions go;
        go.norm_rel_tol = norm_rel_tol;
        GradientReport rep = hinf_gradient(plant, unpack(theta, dims), go);
        return {rep.value, std::move(rep.grad)};
    } catch (const Error&) {
        return {};  // unstable or ill-posed: +inf barrier
    }
}

std::pair<Controller, AbscissaResult> stabilize_from(const Plant& plant,
                                                            const SynthesisOptions& opts,
                                                            const Controller& start,
                                                            double budget_seconds,
                                                            std::uint64_t seed) {
    const ControllerDims dims = start.dims();
    auto closed_loop_abscissa = [&](const Controller& k) {
        return spectral_abscissa(lft_closed_loop(plant, k).A);
    };
    try {
        AbscissaResult a0 = closed_loop_abscissa(start);
        if (a0.alpha < -opts.stabilization_margin) return {start, a0};
    } catch (const Error&) {
    }

    OptOptions o = opts.optimizer;
    o.cpu_budget_seconds = std::max(budget_seconds, 1e-3);
    o.rng_seed = seed;
    o.target_value = -opts.stabilization_margin;
    Oracle oracle = [&](const Vector& theta) { return abscissa_objective(plant, dims, theta); };
    OptResult r;
    try {
        r = hanso(oracle, {pack(start)}, o);
    } catch (const Error& e) {
        throw Error(Errc::NoStabilizingController, e.what());
    }
    Controller k = unpack(r.x_best, dims);
    AbscissaResult a = closed_loop_abscissa(k);
    if (!(a.alpha < -opts.stabilization_margin) || !(a.alpha < 0.0)) {
        throw Error(Errc::NoStabilizingController,
                    "closed-loop spectral abscissa stayed at " + std::to_string(a.alpha));
    }
    return {k, a};
}

std::pair<Controller, NormResult> optimize_from(const Plant& plant,
                                                       const SynthesisOptions& opts,
                                                       const Controller& k0,
                                                       double budget_seconds,
                                                       std::uint64_t seed) {
    const ControllerDims dims = k0.dims();
    try {
        if (!is_stable(lft_closed_loop(plant, k0).A)) {
            throw Error(Errc::NotStabilizing, "initial controller does not stabilize the plant");
        }
    } catch (const Error& e) {
        if (e.code() == Errc::NotStabilizing) throw;
        throw Error(Errc::NotStabilizing, e.what());
    }

    Controller best = k0;
    if (budget_seconds > 0.0) {
        OptOptions o = opts.optimizer;
        o.cpu_budget_seconds = budget_seconds;
        o.rng_seed = seed;
        o.target_value = -std::numeric_limits<double>::infinity();
        const double tol = opts.norm_rel_tol;
        Oracle oracle = [&](const Vector& theta) {
            return hinf_objective(plant, dims, theta, tol);
        };
        OptResult r = hanso(oracle, {pack(k0)}, o);
        best = unpack(r.x_best, dims);
    }
    NormResult nr = hinf_norm(lft_closed_loop(plant, best), opts.certify_rel_tol);
    return {best, nr};
}

}  // namespace detail

std::pair<Controller, AbscissaResult> stabilize(const Plant& plant,
                                                       const SynthesisOptions& opts) {
    plant.validate();
    opts.validate();
    const auto dims = ControllerDims::for_plant(plant, opts.order);
    Controller start;
    if (opts.warm_start) {
        start = *opts.warm_start;
        start.validate_for(plant);
    } else {
        Rng rng(derive_seed(opts.rng_seed, 0));
        start = random_controller(dims, opts.init_scale, rng);
    }
    return detail::stabilize_from(plant, opts, start, opts.cpumax_seconds,
                                  derive_seed(opts.rng_seed, 0x5354));
}

std::pair<Controller, NormResult> optimize_performance(const Plant& plant,
                                                              const Controller& k0,
                                                              const SynthesisOptions& opts) {
    plant.validate();
    opts.validate();
    k0.validate_for(plant);
    return detail::optimize_from(plant, opts, k0, opts.cpumax_seconds,
                                 derive_seed(opts.rng_seed, 0x4846));
}

namespace detail {

RunRecord synthesis_run(const Plant& plant, const SynthesisOptions& opts, int run) {
    RunRecord rec;
    rec.seed = derive_seed(opts.rng_seed, static_cast<std::uint64_t>(run));
    const Deadline deadline(opts.cpumax_seconds);
    const auto dims = ControllerDims::for_plant(plant, opts.order);

    Controller start;
    if (run == 0 && opts.warm_start) {
        start = *opts.warm_start;
    } else {
        Rng rng(rec.seed);
        start = random_controller(dims, opts.init_scale, rng);
    }
    try {
        auto [k1, a1] = stabilize_from(plant, opts, start, opts.cpumax_seconds,
                                       derive_seed(rec.seed, 1));
        rec.stage1_abscissa = a1.alpha;
        const double remaining = opts.cpumax_seconds - deadline.elapsed();
        auto [k2, nr] = optimize_from(plant, opts, k1, remaining, derive_seed(rec.seed, 2));
        rec.controller = std::move(k2);
        rec.stage2_norm = nr.gamma;
    } catch (const Error& e) {
        if (e.code() != Errc::NoStabilizingController) throw;
        rec.controller = start;
    }
    rec.elapsed_seconds = deadline.elapsed();
    return rec;
}

}  // namespace detail

SynthesisResult synthesize(const Plant& plant, const SynthesisOptions& opts) {
    plant.validate();
    opts.validate();
    SynthesisResult result;
    if (opts.order > plant.n()) {
        result.warnings.push_back("controller order " + std::to_string(opts.order) +
                                  " exceeds plant order " + std::to_string(plant.n()));
    }
    if (opts.warm_start) {
        opts.warm_start->validate_for(plant);
        if (opts.warm_start->order() != opts.order) {
            throw Error(Errc::DimensionMismatch, "warm start order differs from requested order");
        }
    }

    result.per_run.resize(static_cast<std::size_t>(opts.runs));
    const int workers = std::min(opts.threads, opts.runs);
    if (workers <= 1) {
        for (int r = 0; r < opts.runs; ++r) {
            result.per_run[static_cast<std::size_t>(r)] = detail::synthesis_run(plant, opts, r);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int r = next++; r < opts.runs; r = next++) {
                        result.per_run[static_cast<std::size_t>(r)] =
                            detail::synthesis_run(plant, opts, r);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    for (std::size_t r = 0; r < result.per_run.size(); ++r) {
        const RunRecord& rec = result.per_run[r];
        if (rec.stage2_norm < result.best_norm) {
            result.best_norm = rec.stage2_norm;
            result.best = rec.controller;
            result.best_run = static_cast<int>(r);
        }
    }
    if (result.best_run >= 0) {
        const StateSpace cl = lft_closed_loop(plant, result.best);
        result.best_abscissa = spectral_abscissa(cl.A).alpha;
        const NormResult nr = hinf_norm(cl, opts.certify_rel_tol);
        result.best_omega_peak = nr.omega_peak;
        result.best_peak_at_infinity = nr.attained_at_infinity;
        result.status = SynthesisStatus::Success;
    } else {
        result.best = result.per_run.front().controller;
    }
    return result;
}

}  // namespace fohinf
