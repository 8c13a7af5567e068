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
#ifndef FOHINF_IO_HPP
#define FOHINF_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fohinf/statespace.hpp"

/**
 * @file io.hpp
 * @brief JSON files for plants, controllers and plain realizations.
 *
 * Plant:      {"n","m1","m2","p1","p2","A","B1","B2","C1","C2","D11","D12","D21","D22"}
 * Controller: {"nK","AK","BK","CK","DK"}
 * Realization:{"A","B","C","D"}
 *
 * Matrices are arrays of row arrays. Absent D-blocks of a plant are zero.
 * Doubles are written in shortest round-trip form.
 */

namespace fohinf {

using json = nlohmann::json;

inline bool is_plant_json(const json& j) { return j.is_object() && j.contains("B1"); }
inline bool is_controller_json(const json& j) { return j.is_object() && j.contains("DK"); }

Plant plant_from_json(const json& j);

json to_json(const Plant& p);

/// DK fixes (m2, p2); nK defaults to the AK row count when absent.
Controller controller_from_json(const json& j);

json to_json(const Controller& k);

StateSpace statespace_from_json(const json& j);

json to_json(const StateSpace& s);

/// Decimal with 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

/// Parses a JSON file; ParseError carries the file name and position.
json load_json(const std::filesystem::path& path);

Plant load_plant(const std::filesystem::path& path);

Controller load_controller(const std::filesystem::path& path);

StateSpace load_statespace(const std::filesystem::path& path);

void save_json(const std::filesystem::path& path, const json& j);

void save_plant(const std::filesystem::path& path, const Plant& p);

void save_controller(const std::filesystem::path& path, const Controller& k);

}  // namespace fohinf

#endif  // FOHINF_IO_HPP
