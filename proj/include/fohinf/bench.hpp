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
#ifndef FOHINF_BENCH_HPP
#define FOHINF_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fohinf/io.hpp"
#include "fohinf/synthesis.hpp"

/**
 * @file bench.hpp
 * @brief Benchmark cases, certified runs and reports.
 *
 * A suite directory holds cases.json and the plant files it references:
 *
 *     {"cases": [{"name": "HE1", "plant_file": "plants/HE1.json", "tier": "quick",
 *                 "orders": [0], "tolerance": 0.05, "cpumax_seconds": 300,
 *                 "references": [{"source": "published", "order": 0, "norm": 0.154}],
 *                 "warm_start_files": {"1": "plants/AC10_K1.json"}}]}
 *
 * A case whose plant file is missing is reported as data-unavailable.
 */

namespace fohinf {

struct ReferenceValue {
    std::string source;
    Eigen::Index order = 0;
    double norm = 0.0;
};

struct BenchmarkCase {
    std::string name;
    std::filesystem::path plant_file;
    std::vector<Eigen::Index> orders;
    std::vector<ReferenceValue> references;
    double tolerance = 0.05;
    /// Absolute pass threshold per order, overriding reference * (1 + tolerance).
    std::vector<std::pair<Eigen::Index, double>> thresholds;
    std::string tier = "quick";
    double cpumax_seconds = 300.0;
    std::vector<std::pair<Eigen::Index, std::filesystem::path>> warm_start_files;

    /// Reference for an order, if the case has one.
    std::optional<ReferenceValue> reference_for(Eigen::Index order) const;
    /// Largest norm that passes at this order; +inf without a reference.
    double pass_threshold(Eigen::Index order) const;
    void validate() const;
};

enum class EntryStatus { Pass, Fail, NoReference, NoStabilizingController, DataUnavailable };

const char* to_string(EntryStatus s);

/// Fresh recomputation of the closed loop of a reported controller.
struct Certificate {
    bool ok = false;
    double abscissa = 0.0;
    double norm = 0.0;
    /// sigma_max at the reported peak frequency; a lower bound on the norm.
    double peak_sigma = 0.0;
    /// Largest sigma_max over a logarithmic frequency grid.
    double grid_sigma = 0.0;
    std::string detail;
};

/**
 * @brief Independent check of a claimed closed-loop norm.
 *
 * Rebuilds the closed loop, requires a negative spectral abscissa, recomputes
 * the norm at rel_tol and checks it against the claim, a frequency-response
 * evaluation at the reported peak, and a dense frequency grid. claimed_omega
 * is empty for a peak at infinity.
 */
Certificate certify(const Plant& plant, const Controller& k, double claimed_norm,
                    std::optional<double> claimed_omega, double rel_tol = 1e-9);

struct BenchEntry {
    std::string case_name;
    Eigen::Index order = 0;
    EntryStatus status = EntryStatus::DataUnavailable;
    double achieved_norm = std::numeric_limits<double>::infinity();
    std::optional<ReferenceValue> reference;
    double threshold = std::numeric_limits<double>::infinity();
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> run_seeds;
    int best_run = -1;
    bool warm_started = false;
    std::optional<Certificate> certificate;
    std::optional<Controller> controller;
    std::string message;
    /// Reported in the text table only, so the JSON report stays reproducible.
    double elapsed_seconds = 0.0;
};

struct BenchOptions {
    int runs = 10;
    /// Overrides the per-case budget when set.
    std::optional<double> cpumax_seconds;
    std::uint64_t rng_seed = 0;
    int threads = 1;
};

std::vector<BenchmarkCase> load_cases(const std::filesystem::path& cases_file);

/// Cases of a suite directory, filtered by tier ("all" keeps every tier) and by name.
std::vector<BenchmarkCase> select_cases(const std::filesystem::path& suite_dir,
                                        const std::string& tier,
                                        const std::vector<std::string>& names);

/// One entry per order of the case; never throws for synthesis failures.
std::vector<BenchEntry> run_benchmark(const BenchmarkCase& c,
                                      const std::filesystem::path& suite_dir,
                                      const BenchOptions& opts);

json report_to_json(const std::vector<BenchEntry>& entries);
void write_report_table(std::ostream& out, const std::vector<BenchEntry>& entries);

}  // namespace fohinf

#endif  // FOHINF_BENCH_HPP
