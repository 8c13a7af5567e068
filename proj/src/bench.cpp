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
#include "fohinf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fohinf {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Eigen::Index order_key(const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(key, &used);
        if (used != key.size() || v < 0) throw std::invalid_argument(key);
        return static_cast<Eigen::Index>(v);
    } catch (const std::exception&) {
        throw Error(Errc::ParseError, "order key \"" + key + "\" is not a nonnegative integer");
    }
}

BenchmarkCase case_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::ParseError, "case entry must be an object");
    BenchmarkCase c;
    try {
        c.name = j.at("name").get<std::string>();
        c.plant_file = j.at("plant_file").get<std::string>();
        c.orders = j.at("orders").get<std::vector<Eigen::Index>>();
        c.tolerance = j.value("tolerance", 0.05);
        c.tier = j.value("tier", std::string("quick"));
        c.cpumax_seconds = j.value("cpumax_seconds", 300.0);
        const json refs = j.value("references", json::array());
        for (const json& r : refs) {
            c.references.push_back({r.at("source").get<std::string>(),
                                    r.at("order").get<Eigen::Index>(), r.at("norm").get<double>()});
        }
        const json thresholds = j.value("thresholds", json::object());
        for (const auto& [key, v] : thresholds.items()) {
            c.thresholds.emplace_back(order_key(key), v.get<double>());
        }
        const json warm = j.value("warm_start_files", json::object());
        for (const auto& [key, v] : warm.items()) {
            c.warm_start_files.emplace_back(order_key(key), v.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, "case \"" + j.value("name", std::string("?")) + "\": " +
                                          e.what());
    }
    c.validate();
    return c;
}

/// Logarithmic grid around the closed-loop pole magnitudes.
double grid_sigma_max(const StateSpace& cl) {
    const CVector poles = eigenvalues(cl.A);
    double lo = 1.0, hi = 1.0;
    for (Eigen::Index i = 0; i < poles.size(); ++i) {
        const double m = std::abs(poles(i));
        if (m > 0.0) {
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    const double a = std::log10(lo) - 3.0, b = std::log10(hi) + 3.0;
    const int points = 2000;
    double best = std::max(sigma_max(cl.D), sigma_max(transfer_eval(cl, Complex(0.0, 0.0))));
    for (int i = 0; i < points; ++i) {
        const double w = std::pow(10.0, a + (b - a) * i / (points - 1));
        best = std::max(best, sigma_max(transfer_eval(cl, Complex(0.0, w))));
    }
    return best;
}

}  // namespace

std::optional<ReferenceValue> BenchmarkCase::reference_for(Eigen::Index order) const {
    for (const auto& r : references) {
        if (r.order == order) return r;
    }
    return std::nullopt;
}

double BenchmarkCase::pass_threshold(Eigen::Index order) const {
    for (const auto& [o, t] : thresholds) {
        if (o == order) return t;
    }
    if (auto r = reference_for(order)) return r->norm * (1.0 + tolerance);
    return std::numeric_limits<double>::infinity();
}

void BenchmarkCase::validate() const {
    if (name.empty()) throw Error(Errc::ParseError, "case name is empty");
    if (orders.empty()) throw Error(Errc::ParseError, "case " + name + " lists no orders");
    for (auto o : orders) {
        if (o < 0) throw Error(Errc::InvalidArgument, "case " + name + " has a negative order");
    }
    for (const auto& r : references) {
        if (!(r.norm >= 0.0) || r.order < 0) {
            throw Error(Errc::InvalidArgument, "case " + name + " has an invalid reference value");
        }
    }
    if (!(tolerance >= 0.0)) throw Error(Errc::InvalidArgument, "case " + name + " tolerance < 0");
    if (!(cpumax_seconds > 0.0)) {
        throw Error(Errc::InvalidArgument, "case " + name + " budget must be positive");
    }
}

const char* to_string(EntryStatus s) {
    switch (s) {
        case EntryStatus::Pass: return "pass";
        case EntryStatus::Fail: return "fail";
        case EntryStatus::NoReference: return "no-reference";
        case EntryStatus::NoStabilizingController: return "no-stabilizing-controller";
        case EntryStatus::DataUnavailable: return "data-unavailable";
    }
    return "unknown";
}

Certificate certify(const Plant& plant, const Controller& k, double claimed_norm,
                    std::optional<double> claimed_omega, double rel_tol) {
    Certificate c;
    try {
        const StateSpace cl = lft_closed_loop(plant, k);
        c.abscissa = spectral_abscissa(cl.A).alpha;
        if (!(c.abscissa < 0.0)) {
            c.detail = "closed loop is not stable";
            return c;
        }
        const NormResult nr = hinf_norm(cl, rel_tol);
        c.norm = nr.gamma;
        c.peak_sigma = claimed_omega ? sigma_max(transfer_eval(cl, Complex(0.0, *claimed_omega)))
                                     : sigma_max(cl.D);
        c.grid_sigma = grid_sigma_max(cl);
        const double slack = 1e-6 * (1.0 + claimed_norm);
        if (std::abs(c.norm - claimed_norm) > rel_tol * claimed_norm) {
            c.detail = "recomputed norm " + format_double(c.norm) + " differs from " + format_double(claimed_norm);
        } else if (c.peak_sigma < claimed_norm - slack) {
            c.detail = "response at the reported peak is below the claimed norm";
        } else if (c.grid_sigma > claimed_norm + slack) {
            c.detail = "frequency grid exceeds the claimed norm";
        } else {
            c.ok = true;
        }
    } catch (const Error& e) {
        c.detail = e.what();
    }
    return c;
}

std::vector<BenchmarkCase> load_cases(const std::filesystem::path& cases_file) {
    const json doc = load_json(cases_file);
    if (!doc.is_object() || !doc.contains("cases") || !doc.at("cases").is_array()) {
        throw Error(Errc::ParseError, cases_file.string() + ": expected {\"cases\": [...]}");
    }
    std::vector<BenchmarkCase> cases;
    for (const json& j : doc.at("cases")) cases.push_back(case_from_json(j));
    return cases;
}

std::vector<BenchmarkCase> select_cases(const std::filesystem::path& suite_dir,
                                        const std::string& tier,
                                        const std::vector<std::string>& names) {
    std::vector<BenchmarkCase> all = load_cases(suite_dir / "cases.json");
    std::vector<BenchmarkCase> out;
    if (!names.empty()) {
        for (const auto& n : names) {
            auto it = std::find_if(all.begin(), all.end(),
                                   [&](const BenchmarkCase& c) { return c.name == n; });
            if (it == all.end()) throw Error(Errc::InvalidArgument, "unknown case " + n);
            out.push_back(*it);
        }
        return out;
    }
    for (const auto& c : all) {
        if (tier == "all" || c.tier == tier) out.push_back(c);
    }
    return out;
}

std::vector<BenchEntry> run_benchmark(const BenchmarkCase& c,
                                      const std::filesystem::path& suite_dir,
                                      const BenchOptions& opts) {
    std::vector<BenchEntry> entries;
    const std::filesystem::path plant_path = suite_dir / c.plant_file;
    std::optional<Plant> plant;
    std::string load_error;
    if (!std::filesystem::exists(plant_path)) {
        load_error = "plant file " + plant_path.string() + " not found";
    } else {
        plant = load_plant(plant_path);
    }

    for (const Eigen::Index order : c.orders) {
        BenchEntry e;
        e.case_name = c.name;
        e.order = order;
        e.reference = c.reference_for(order);
        e.threshold = c.pass_threshold(order);
        e.base_seed = derive_seed(derive_seed(opts.rng_seed, fnv1a(c.name)),
                                  static_cast<std::uint64_t>(order));
        if (!plant) {
            e.status = EntryStatus::DataUnavailable;
            e.message = load_error;
            entries.push_back(std::move(e));
            continue;
        }
        if (order > plant->n()) {
            throw Error(Errc::InvalidArgument, "case " + c.name + " order exceeds plant order");
        }

        SynthesisOptions so;
        so.order = order;
        so.runs = opts.runs;
        so.cpumax_seconds = opts.cpumax_seconds.value_or(c.cpumax_seconds);
        so.rng_seed = e.base_seed;
        so.threads = opts.threads;
        for (const auto& [o, file] : c.warm_start_files) {
            if (o != order) continue;
            const auto path = suite_dir / file;
            if (!std::filesystem::exists(path)) {
                e.message = "warm start " + path.string() + " not found";
                break;
            }
            so.warm_start = load_controller(path);
            e.warm_started = true;
        }
        if (!e.message.empty()) {
            e.status = EntryStatus::DataUnavailable;
            entries.push_back(std::move(e));
            continue;
        }

        const auto t0 = std::chrono::steady_clock::now();
        const SynthesisResult res = synthesize(*plant, so);
        e.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& r : res.per_run) e.run_seeds.push_back(r.seed);
        e.best_run = res.best_run;
        if (res.status != SynthesisStatus::Success) {
            e.status = EntryStatus::NoStabilizingController;
            e.message = "no run produced a stabilizing controller";
            entries.push_back(std::move(e));
            continue;
        }
        e.achieved_norm = res.best_norm;
        e.controller = res.best;
        e.certificate = certify(*plant, res.best, res.best_norm,
                                res.best_peak_at_infinity ? std::nullopt
                                                          : std::optional(res.best_omega_peak));
        if (!e.certificate->ok) {
            e.status = EntryStatus::Fail;
            e.message = "certificate: " + e.certificate->detail;
        } else if (!std::isfinite(e.threshold)) {
            e.status = EntryStatus::NoReference;
        } else {
            e.status = e.achieved_norm <= e.threshold ? EntryStatus::Pass : EntryStatus::Fail;
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

json report_to_json(const std::vector<BenchEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) {
        json j;
        j["case"] = e.case_name;
        j["order"] = e.order;
        j["status"] = to_string(e.status);
        j["achieved_norm"] = finite_or_null(e.achieved_norm);
        if (e.reference) {
            j["reference"] = {{"source", e.reference->source}, {"norm", e.reference->norm}};
        } else {
            j["reference"] = nullptr;
        }
        j["threshold"] = finite_or_null(e.threshold);
        j["base_seed"] = e.base_seed;
        j["run_seeds"] = e.run_seeds;
        j["best_run"] = e.best_run;
        j["warm_started"] = e.warm_started;
        if (e.certificate) {
            j["certificate"] = {{"ok", e.certificate->ok},
                                {"abscissa", e.certificate->abscissa},
                                {"norm", e.certificate->norm},
                                {"detail", e.certificate->detail}};
        }
        if (e.controller) j["controller"] = to_json(*e.controller);
        if (!e.message.empty()) j["message"] = e.message;
        out.push_back(std::move(j));
    }
    return out;
}

void write_report_table(std::ostream& out, const std::vector<BenchEntry>& entries) {
    char line[512];
    std::snprintf(line, sizeof line, "%-12s %4s %-26s %-12s %-12s %-12s %9s  %s\n", "case", "nK",
                  "status", "achieved", "threshold", "reference", "time[s]", "source");
    out << line;
    auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("-"); };
    for (const auto& e : entries) {
        std::snprintf(line, sizeof line, "%-12s %4lld %-26s %-12.12s %-12.12s %-12.12s %9.1f  %s\n",
                      e.case_name.c_str(), static_cast<long long>(e.order), to_string(e.status),
                      cell(e.achieved_norm).c_str(), cell(e.threshold).c_str(),
                      e.reference ? format_double(e.reference->norm).c_str() : "-",
                      e.elapsed_seconds, e.reference ? e.reference->source.c_str() : "-");
        out << line;
    }
}

}  // namespace fohinf
