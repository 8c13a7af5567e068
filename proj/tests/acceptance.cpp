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
// Acceptance run: one PASS/FAIL/SKIP line per criterion and a summary line.
// Criteria that need third-party plant data print SKIP when the data file is
// absent. The exit status is nonzero only when some criterion FAILs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fohinf/bench.hpp"
#include "fohinf/gradients.hpp"
#include "fohinf/nonsmooth.hpp"
#include "fohinf/synthesis.hpp"
#include "support/oracles.hpp"

using namespace fohinf;
namespace fs = std::filesystem;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Line {
    std::string id;
    Verdict verdict;
    std::string label;
    std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& id, Verdict v, const std::string& label, const std::string& detail) {
    static const char* names[] = {"PASS", "FAIL", "SKIP"};
    std::cout << "criterion " << id << " " << names[static_cast<int>(v)] << " " << label << ": "
              << detail << std::endl;
    g_lines.push_back({id, v, label, detail});
}

Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Norm against the grid oracle
// ---------------------------------------------------------------------------

void criterion_norm_oracle() {
    test::Gen g(1001);
    double worst = 0.0, spent = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = g.integer(1, 10), m = g.integer(1, 3), p = g.integer(1, 3);
        const StateSpace s = test::random_stable_system(g, n, m, p);
        const auto t0 = std::chrono::steady_clock::now();
        const double gamma = hinf_norm(s).gamma;
        spent += seconds_since(t0);
        const double ref = test::grid_hinf_norm(s).gamma;
        worst = std::max(worst, std::abs(gamma - ref) / ref);
    }
    report("1", verdict_of(worst <= 1e-6 && spent <= 30.0), "norm oracle equivalence",
           "100 systems, max rel err " + fmt("%.3g", worst) + " (tol 1e-6), norm time " +
               fmt("%.3f", spent) + " s (limit 30 s)");
}

// ---------------------------------------------------------------------------
// 2. Gradients against central differences
// ---------------------------------------------------------------------------

struct TrialStats {
    int smooth = 0;
    int smooth_agree = 0;
    int unflagged = 0;
};

TrialStats gradient_trials(test::Functional f, std::uint64_t seed) {
    test::Gen g(seed);
    TrialStats st;
    for (int t = 0; t < 1000; ++t) {
        const int n = g.integer(1, 6), nK = g.integer(0, 2);
        const auto [p, k] = test::random_stable_loop(g, n, nK, t % 3 == 2);
        const Vector dir = g.vector(k.dims().parameter_count()).normalized();
        const auto c = test::check_direction(f, p, k, dir);
        if (!c.smooth) continue;
        ++st.smooth;
        if (c.agree) ++st.smooth_agree;
        else ++st.unflagged;
    }
    return st;
}

void criterion_gradients() {
    const TrialStats a = gradient_trials(test::Functional::Abscissa, 2001);
    const TrialStats h = gradient_trials(test::Functional::Hinf, 2002);
    auto ok = [](const TrialStats& s) {
        return s.smooth > 0 && s.smooth_agree >= 0.95 * s.smooth && s.unflagged == 0;
    };
    std::ostringstream d;
    d << "abscissa " << a.smooth_agree << "/" << a.smooth << " smooth agree, " << a.unflagged
      << " unflagged failures; hinf " << h.smooth_agree << "/" << h.smooth << " smooth agree, "
      << h.unflagged << " unflagged failures (1000 trials each, rel 1e-5)";
    report("2", verdict_of(ok(a) && ok(h)), "gradient correctness", d.str());
}

// ---------------------------------------------------------------------------
// 3. Optimizer sanity
// ---------------------------------------------------------------------------

Evaluation rosenbrock(const Vector& x) {
    const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
    Vector g(2);
    g << -2.0 * a - 400.0 * x(0) * b, 200.0 * b;
    return {a * a + 100.0 * b * b, g};
}

Evaluation inf_norm(const Vector& x) {
    Eigen::Index i = 0;
    const double v = x.cwiseAbs().maxCoeff(&i);
    Vector g = Vector::Zero(x.size());
    g(i) = x(i) >= 0.0 ? 1.0 : -1.0;
    return {v, g};
}

void criterion_optimizer() {
    OptOptions o;
    o.grad_norm_tol = 1e-12;
    const OptResult rb = bfgs_nonsmooth(rosenbrock, (Vector(2) << -1.2, 1.0).finished(), o);
    const double rerr = (rb.x_best - Vector::Ones(2)).lpNorm<Eigen::Infinity>();

    const OptResult ra = hanso(inf_norm, {Vector::Constant(1, 1.0)}, {});
    const OptResult ri = hanso(inf_norm, {(Vector(3) << 1.0, -0.5, 0.25).finished()}, {});

    test::Gen g(3001);
    double hull_err = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int m = g.integer(2, 5), n = g.integer(2, 4);
        std::vector<Vector> pts;
        const Vector shift = g.vector(n, g.uniform(0.0, 1.5));
        for (int i = 0; i < m; ++i) pts.push_back(g.vector(n) + shift);
        const double ours = min_norm_convex_hull(pts).d.norm();
        hull_err = std::max(hull_err, std::abs(ours - test::simplex_grid_min_norm(pts).norm));
    }
    const bool ok = rerr <= 1e-8 && ra.optimality_measure <= 1e-4 &&
                    ri.optimality_measure <= 1e-4 && hull_err <= 1e-3;
    report("3", verdict_of(ok), "optimizer sanity",
           "rosenbrock err " + fmt("%.3g", rerr) + " (tol 1e-8), |x| measure " +
               fmt("%.3g", ra.optimality_measure) + ", inf-norm measure " +
               fmt("%.3g", ri.optimality_measure) + " (tol 1e-4), hull max err " +
               fmt("%.3g", hull_err) + " over 50 (tol 1e-3)");
}

// ---------------------------------------------------------------------------
// Benchmark-backed criteria
// ---------------------------------------------------------------------------

struct Certified {
    Plant plant;
    BenchEntry entry;
};

std::vector<Certified> g_passes;

BenchOptions bench_options(int runs) {
    BenchOptions o;
    o.runs = runs;
    o.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return o;
}

/// Runs the named cases at the listed orders; reports SKIP when any data file is missing.
void benchmark_criterion(const std::string& id, const std::string& label, const fs::path& suite,
                         const std::vector<std::pair<std::string, Eigen::Index>>& targets,
                         bool gated = false) {
    std::vector<std::string> missing;
    for (const auto& [name, order] : targets) {
        const auto c = select_cases(suite, "all", {name}).front();
        if (!fs::exists(suite / c.plant_file)) missing.push_back(name);
        for (const auto& [o, file] : c.warm_start_files) {
            if (o == order && !fs::exists(suite / file)) missing.push_back(name + " warm start");
        }
    }
    if (!missing.empty()) {
        std::string d = "data-unavailable:";
        for (const auto& m : missing) d += " " + m;
        report(id, Verdict::Skip, label, d);
        return;
    }
    if (gated && !std::getenv("FOHINF_ACCEPTANCE_LARGE")) {
        report(id, Verdict::Skip, label, "large tier; set FOHINF_ACCEPTANCE_LARGE=1 to run");
        return;
    }
    bool ok = true;
    std::ostringstream d;
    for (const auto& [name, order] : targets) {
        BenchmarkCase c = select_cases(suite, "all", {name}).front();
        c.orders = {order};
        const auto entries = run_benchmark(c, suite, bench_options(10));
        const BenchEntry& e = entries.front();
        ok = ok && e.status == EntryStatus::Pass;
        d << name << " nK=" << order << " " << to_string(e.status) << " norm "
          << format_double(e.achieved_norm) << " threshold " << format_double(e.threshold) << "; ";
        if (e.status == EntryStatus::Pass) {
            g_passes.push_back({load_plant(suite / c.plant_file), e});
        }
    }
    report(id, verdict_of(ok), label, d.str());
}

// ---------------------------------------------------------------------------
// 8. Properties that need no external data
// ---------------------------------------------------------------------------

Plant scalar_unstable() {
    Plant p;
    p.A = Matrix::Constant(1, 1, 1.0);
    p.B1 = p.B2 = p.C1 = p.C2 = Matrix::Ones(1, 1);
    p.D11 = Matrix::Zero(1, 1);
    p.D12 = p.D21 = Matrix::Ones(1, 1);
    p.D22 = Matrix::Zero(1, 1);
    return p;
}

Plant two_state_unstable() {
    Plant p;
    p.A = (Matrix(2, 2) << 0, 1, 2, -1).finished();
    p.B1 = (Matrix(2, 1) << 0.5, 1).finished();
    p.B2 = (Matrix(2, 1) << 0, 1).finished();
    p.C1 = (Matrix(2, 2) << 1, 0, 0, 0).finished();
    p.C2 = (Matrix(1, 2) << 1, 0).finished();
    p.D11 = Matrix::Zero(2, 1);
    p.D12 = (Matrix(2, 1) << 0, 1).finished();
    p.D21 = Matrix::Constant(1, 1, 0.1);
    p.D22 = Matrix::Zero(1, 1);
    return p;
}

void criterion_properties() {
    std::vector<std::string> failed;
    auto check = [&](bool ok, const std::string& name) {
        if (!ok) failed.push_back(name);
    };
    test::Gen g(8001);

    bool roundtrip = true;
    for (int t = 0; t < 50; ++t) {
        const ControllerDims dims{g.integer(0, 4), g.integer(1, 3), g.integer(1, 3)};
        const Vector v = g.vector(dims.parameter_count());
        roundtrip = roundtrip && pack(unpack(v, dims)) == v;
    }
    check(roundtrip, "pack/unpack");

    bool lft = true;
    for (int t = 0; t < 60; ++t) {
        const auto [p, k] = test::random_stable_loop(g, g.integer(1, 5), g.integer(0, 2), t % 2 == 0);
        const StateSpace cl = lft_closed_loop(p, k);
        for (int i = 0; i < 10; ++i) {
            const Complex s(g.uniform(-0.5, 0.5), std::pow(10.0, g.uniform(-2.0, 2.0)));
            const CMatrix ref = test::blockwise_lft(p, k, s);
            lft = lft && (test::explicit_transfer(cl, s) - ref).norm() <= 1e-9 * (1.0 + ref.norm());
        }
    }
    check(lft, "lft vs blockwise");

    bool abscissa = true;
    for (int t = 0; t < 30; ++t) {
        const Matrix A = g.matrix(6, 6);
        const double ref = test::complex_eigenvalues(A).real().maxCoeff();
        abscissa = abscissa && std::abs(spectral_abscissa(A).alpha - ref) <= 1e-10 * (1.0 + std::abs(ref));
    }
    check(abscissa, "abscissa vs eigenvalues");

    bool norm = true;
    for (int t = 0; t < 20; ++t) {
        StateSpace s = test::random_stable_system(g, 4, 2, 2);
        const NormResult r = hinf_norm(s, 1e-9);
        for (int i = 0; i < 50; ++i) {
            const double w = std::pow(10.0, g.uniform(-3.0, 3.0));
            norm = norm && sigma_max(transfer_eval(s, Complex(0.0, w))) <= r.gamma * (1.0 + 1e-9);
        }
        const double c = g.uniform(0.1, 5.0);
        s.C *= c;
        s.D *= c;
        norm = norm && std::abs(hinf_norm(s, 1e-9).gamma - c * r.gamma) <= 1e-8 * c * r.gamma;
    }
    check(norm, "norm bounds and scaling");

    bool hull = true;
    for (int t = 0; t < 100; ++t) {
        const int m = g.integer(1, 10), n = g.integer(1, 6);
        std::vector<Vector> pts;
        for (int i = 0; i < m; ++i) pts.push_back(g.vector(n));
        const MinNormResult r = min_norm_convex_hull(pts);
        hull = hull && std::abs(r.weights.sum() - 1.0) <= 1e-10 && r.weights.minCoeff() >= -1e-10;
        for (const auto& p : pts) hull = hull && r.d.norm() <= p.norm() + 1e-12;
    }
    check(hull, "hull simplex and dominance");

    int stabilized_scalar = 0, stabilized_two = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SynthesisOptions o;
        o.rng_seed = seed;
        o.cpumax_seconds = 30.0;
        try {
            if (stabilize(scalar_unstable(), o).second.alpha < 0.0) ++stabilized_scalar;
        } catch (const Error&) {
        }
        o.order = 1;
        try {
            if (stabilize(two_state_unstable(), o).second.alpha < 0.0) ++stabilized_two;
        } catch (const Error&) {
        }
    }
    check(stabilized_scalar >= 9 && stabilized_two >= 9, "stabilization rate");

    SynthesisOptions so;
    so.order = 1;
    so.runs = 4;
    so.rng_seed = 42;
    so.optimizer.max_iters = 60;
    const SynthesisResult a = synthesize(two_state_unstable(), so);
    so.threads = 2;
    const SynthesisResult b = synthesize(two_state_unstable(), so);
    bool determinism = a.best_norm == b.best_norm && pack(a.best) == pack(b.best);
    for (std::size_t i = 0; i < a.per_run.size(); ++i) {
        determinism = determinism && a.per_run[i].stage2_norm == b.per_run[i].stage2_norm;
    }
    check(determinism, "bitwise determinism");

    std::string d = "pack/unpack, lft, abscissa, norm, hull, determinism; stabilized " +
                    std::to_string(stabilized_scalar) + "/10 scalar, " +
                    std::to_string(stabilized_two) + "/10 two-state";
    for (const auto& f : failed) d += "; failed: " + f;
    report("8", verdict_of(failed.empty()), "property suite", d);
}

// ---------------------------------------------------------------------------
// 9. Independent certificate of every benchmark pass
// ---------------------------------------------------------------------------

/// Closed-loop realization assembled here from the plant and controller blocks.
StateSpace fresh_closed_loop(const Plant& p, const Controller& k) {
    const Eigen::Index n = p.A.rows(), nK = k.AK.rows(), m1 = p.B1.cols(), p2 = p.C2.rows();
    const Matrix delta = (Matrix::Identity(p2, p2) - p.D22 * k.DK).inverse();
    // Signals are expressed in v = [x; xK; w].
    Matrix Y(p2, n + nK + m1);
    Y << p.C2, p.D22 * k.CK, p.D21;
    Y = delta * Y;
    Matrix U = k.DK * Y;
    U.middleCols(n, nK) += k.CK;

    Matrix F = Matrix::Zero(n + nK, n + nK + m1);
    F.block(0, 0, n, n) = p.A;
    F.block(0, n + nK, n, m1) = p.B1;
    F.block(n, n, nK, nK) = k.AK;
    F.topRows(n) += p.B2 * U;
    F.bottomRows(nK) += k.BK * Y;
    Matrix H(p.C1.rows(), n + nK + m1);
    H << p.C1, Matrix::Zero(p.C1.rows(), nK), p.D11;
    H += p.D12 * U;
    return {F.leftCols(n + nK), F.rightCols(m1), H.leftCols(n + nK), H.rightCols(m1)};
}

void criterion_certificates(const fs::path& synthetic) {
    BenchOptions o = bench_options(4);
    std::vector<std::string> problems;
    for (const auto& c : select_cases(synthetic, "all", {})) {
        for (const auto& e : run_benchmark(c, synthetic, o)) {
            if (e.status == EntryStatus::Pass) {
                g_passes.push_back({load_plant(synthetic / c.plant_file), e});
            } else if (e.status == EntryStatus::Fail ||
                       e.status == EntryStatus::NoStabilizingController) {
                problems.push_back(c.name + " " + to_string(e.status));
            }
        }
    }
    int checked = 0;
    for (const auto& [plant, e] : g_passes) {
        const StateSpace cl = fresh_closed_loop(plant, *e.controller);
        const double alpha = test::complex_eigenvalues(cl.A).real().maxCoeff();
        const double norm = hinf_norm(cl, 1e-9).gamma;
        const double grid = test::grid_hinf_norm(cl).gamma;
        const double claimed = e.achieved_norm;
        const bool ok = alpha < 0.0 && e.certificate && e.certificate->ok &&
                        std::abs(norm - claimed) <= 2e-9 * claimed &&
                        std::abs(grid - claimed) <= 1e-6 * claimed;
        if (!ok) {
            problems.push_back(e.case_name + " nK=" + std::to_string(e.order) + " recheck: abscissa " +
                               format_double(alpha) + " norm " + format_double(norm) + " grid " +
                               format_double(grid) + " claimed " + format_double(claimed));
        }
        ++checked;
    }
    std::string d = std::to_string(checked) + " passing entries re-certified (fresh realization, "
                    "complex eigenvalues, norm at 1e-9, grid oracle at 1e-6)";
    for (const auto& p : problems) d += "; " + p;
    report("9", verdict_of(checked > 0 && problems.empty()), "end-to-end certificate", d);
}

}  // namespace

int main() {
    const fs::path suite = FOHINF_BENCH_SUITE_DIR;
    const fs::path synthetic = FOHINF_TEST_SUITE_DIR;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        criterion_norm_oracle();
        criterion_gradients();
        criterion_optimizer();
        benchmark_criterion("4", "HE1 static", suite, {{"HE1", 0}});
        benchmark_criterion("5", "REA2 static", suite, {{"REA2", 0}});
        benchmark_criterion("6", "VTOL/CR/PA static", suite, {{"VTOL", 0}, {"CR", 0}, {"PA", 0}});
        benchmark_criterion("7", "large tier static", suite, {{"HF1", 0}, {"CM4", 0}}, true);
        benchmark_criterion("C-ENNS", "ENNS nK=1", suite, {{"ENNS", 1}});
        benchmark_criterion("C-WANG", "WANG static", suite, {{"WANG", 0}});
        benchmark_criterion("C-VSC", "VSC static", suite, {{"VSC", 0}});
        benchmark_criterion("C-AUV", "AUV autopilots", suite,
                            {{"AUV-SPEED", 1}, {"AUV-HEADING", 0}, {"AUV-DEPTH", 1}});
        benchmark_criterion("C-HIMAT", "HIMAT nK=6", suite, {{"HIMAT", 6}});
        criterion_properties();
        criterion_certificates(synthetic);
    } catch (const std::exception& e) {
        report("-", Verdict::Fail, "acceptance run aborted", e.what());
    }
    int pass = 0, fail = 0, skip = 0;
    for (const auto& l : g_lines) {
        if (l.verdict == Verdict::Pass) ++pass;
        else if (l.verdict == Verdict::Fail) ++fail;
        else ++skip;
    }
    std::cout << "summary: " << pass << " pass, " << fail << " fail, " << skip
              << " skip (data-unavailable or gated); " << fmt("%.1f", seconds_since(t0)) << " s"
              << std::endl;
    return fail == 0 ? 0 : 1;
}
