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
#include "fohinf/cli.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fohinf/bench.hpp"

namespace fohinf {

namespace {

struct AnalyzeArgs {
    std::string file;
    std::string controller;
};

struct SynthArgs {
    std::string plant;
    long long order = -1;
    int runs = 10;
    double cpumax = 300.0;
    std::uint64_t seed = 0;
    std::string warm_start;
    std::string out;
    int threads = 1;
};

struct BenchArgs {
    std::string suite;
    std::string tier = "quick";
    std::vector<std::string> cases;
    std::string report;
    int runs = 10;
    std::optional<double> cpumax;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Closed loop of a plant file with an optional controller, or a plain realization.
StateSpace system_of(const AnalyzeArgs& a) {
    const json doc = load_json(a.file);
    if (!is_plant_json(doc)) {
        if (!a.controller.empty()) {
            throw Error(Errc::InvalidArgument, "--controller needs a plant file");
        }
        return statespace_from_json(doc);
    }
    const Plant plant = plant_from_json(doc);
    const Controller k = a.controller.empty() ? Controller::zeros(ControllerDims::for_plant(plant, 0))
                                              : load_controller(a.controller);
    return lft_closed_loop(plant, k);
}

int run_norm(const AnalyzeArgs& a, std::ostream& out) {
    const NormResult nr = hinf_norm(system_of(a), 1e-9);
    out << "norm " << format_double(nr.gamma) << '\n';
    out << "omega_peak " << (nr.attained_at_infinity ? "inf" : format_double(nr.omega_peak))
        << '\n';
    return kExitOk;
}

int run_abscissa(const AnalyzeArgs& a, std::ostream& out) {
    out << "abscissa " << format_double(spectral_abscissa(system_of(a).A).alpha) << '\n';
    return kExitOk;
}

int run_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
    const Plant plant = load_plant(a.plant);
    SynthesisOptions so;
    so.order = static_cast<Eigen::Index>(a.order);
    so.runs = a.runs;
    so.cpumax_seconds = a.cpumax;
    so.rng_seed = a.seed;
    so.threads = a.threads;
    if (!a.warm_start.empty()) so.warm_start = load_controller(a.warm_start);

    const SynthesisResult res = synthesize(plant, so);
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';
    for (std::size_t r = 0; r < res.per_run.size(); ++r) {
        const RunRecord& rec = res.per_run[r];
        out << "run " << r << " seed " << rec.seed << " abscissa "
            << format_double(rec.stage1_abscissa) << " norm " << format_double(rec.stage2_norm)
            << '\n';
    }
    if (res.status != SynthesisStatus::Success) {
        err << "no stabilizing controller found\n";
        return kExitSynthesisFailure;
    }
    out << "best_run " << res.best_run << '\n';
    out << "norm " << format_double(res.best_norm) << '\n';
    out << "omega_peak "
        << (res.best_peak_at_infinity ? "inf" : format_double(res.best_omega_peak)) << '\n';
    out << "abscissa " << format_double(res.best_abscissa) << '\n';
    if (!a.out.empty()) save_controller(a.out, res.best);
    return kExitOk;
}

int run_bench(BenchArgs a, std::ostream& out) {
    if (a.suite.empty()) {
        const char* env = std::getenv(kSuiteDirEnv);
        a.suite = env ? env : "bench/suite";
    }
    const auto cases = select_cases(a.suite, a.tier, a.cases);
    BenchOptions bo;
    bo.runs = a.runs;
    bo.cpumax_seconds = a.cpumax;
    bo.rng_seed = a.seed;
    bo.threads = a.threads;

    std::vector<BenchEntry> entries;
    for (const auto& c : cases) {
        auto e = run_benchmark(c, a.suite, bo);
        entries.insert(entries.end(), e.begin(), e.end());
    }
    write_report_table(out, entries);
    if (!a.report.empty()) save_json(a.report, report_to_json(entries));
    for (const auto& e : entries) {
        if (e.status == EntryStatus::Fail || e.status == EntryStatus::NoStabilizingController) {
            return kExitSynthesisFailure;
        }
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fixed-order H-infinity controller synthesis", "fohinf"};
    app.require_subcommand(1);

    AnalyzeArgs norm_args, abs_args;
    auto* norm = app.add_subcommand("norm", "H-infinity norm and peak frequency");
    norm->add_option("file", norm_args.file, "plant or realization JSON")->required();
    norm->add_option("--controller", norm_args.controller, "controller JSON for a plant file");

    auto* abscissa = app.add_subcommand("abscissa", "spectral abscissa");
    abscissa->add_option("file", abs_args.file, "plant or realization JSON")->required();
    abscissa->add_option("--controller", abs_args.controller, "controller JSON for a plant file");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "fixed-order synthesis");
    synth->add_option("--plant", sa.plant, "plant JSON")->required();
    synth->add_option("--order", sa.order, "controller order")->required()->check(CLI::NonNegativeNumber);
    synth->add_option("--runs", sa.runs, "independent runs")->check(CLI::PositiveNumber);
    synth->add_option("--cpumax", sa.cpumax, "per-run budget in seconds")->check(CLI::PositiveNumber);
    synth->add_option("--seed", sa.seed, "base seed");
    synth->add_option("--warm-start", sa.warm_start, "controller JSON used by run 0");
    synth->add_option("--out", sa.out, "write the best controller here");
    synth->add_option("--threads", sa.threads, "concurrent runs")->check(CLI::PositiveNumber);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "benchmark suite");
    bench->add_option("--suite", ba.suite, std::string("suite directory (default $") + kSuiteDirEnv + ")");
    bench->add_option("--tier", ba.tier, "case tier")->check(CLI::IsMember({"quick", "large", "all"}));
    bench->add_option("--cases", ba.cases, "comma-separated case names")->delimiter(',');
    bench->add_option("--report", ba.report, "JSON report path");
    bench->add_option("--runs", ba.runs, "runs per order")->check(CLI::PositiveNumber);
    bench->add_option("--cpumax", ba.cpumax, "per-run budget override")->check(CLI::PositiveNumber);
    bench->add_option("--seed", ba.seed, "base seed");
    bench->add_option("--threads", ba.threads, "concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "fohinf: " << e.what() << '\n' << app.help();
        return kExitInputError;
    }

    try {
        if (*norm) return run_norm(norm_args, out);
        if (*abscissa) return run_abscissa(abs_args, out);
        if (*synth) return run_synth(sa, out, err);
        return run_bench(ba, out);
    } catch (const Error& e) {
        err << "fohinf: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "fohinf: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace fohinf
