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
#include "fohinf/io.hpp"

#include <cstdio>

namespace fohinf {

namespace detail {

Matrix matrix_from_json(const json& j, const std::string& name, Eigen::Index rows,
                               Eigen::Index cols) {
    if (!j.is_array()) throw Error(Errc::ParseError, "field \"" + name + "\" is not an array");
    if (j.empty()) {
        if (rows * cols != 0) {
            throw Error(Errc::DimensionMismatch,
                        name + " is empty, expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
        }
        return Matrix::Zero(rows, cols);
    }
    if (static_cast<Eigen::Index>(j.size()) != rows) {
        throw Error(Errc::DimensionMismatch, name + " has " + std::to_string(j.size()) +
                                                 " rows, expected " + std::to_string(rows));
    }
    Matrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array()) {
            throw Error(Errc::ParseError,
                        "field \"" + name + "\" row " + std::to_string(r) + " is not an array");
        }
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(Errc::DimensionMismatch, name + " row " + std::to_string(r) + " has " +
                                                     std::to_string(row.size()) +
                                                     " entries, expected " + std::to_string(cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw Error(Errc::ParseError, "field \"" + name + "\" entry (" +
                                                  std::to_string(r) + "," + std::to_string(c) +
                                                  ") is not a number");
            }
            M(r, c) = v.get<double>();
        }
    }
    if (!M.allFinite()) throw Error(Errc::NonFinite, name + " has non-finite entries");
    return M;
}

/// Row count and width of a nonempty row-array matrix.
std::pair<Eigen::Index, Eigen::Index> json_shape(const json& j, const std::string& name) {
    if (!j.is_array()) throw Error(Errc::ParseError, "field \"" + name + "\" is not an array");
    if (j.empty()) return {0, 0};
    if (!j.front().is_array()) {
        throw Error(Errc::ParseError, "field \"" + name + "\" row 0 is not an array");
    }
    return {static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.front().size())};
}

Eigen::Index dim_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw Error(Errc::ParseError, "missing field \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw Error(Errc::ParseError, "field \"" + key + "\" must be a nonnegative integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
}

const json& required(const json& j, const std::string& key) {
    if (!j.contains(key)) throw Error(Errc::ParseError, "missing field \"" + key + "\"");
    return j.at(key);
}

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

/// Prefixes errors raised while decoding a file with its path.
template <class F>
auto with_path(const std::filesystem::path& path, F&& decode) {
    try {
        return decode();
    } catch (const Error& e) {
        if (e.message().rfind(path.string(), 0) == 0) throw;
        throw Error(e.code(), path.string() + ": " + e.message());
    }
}

}  // namespace detail

Plant plant_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::ParseError, "plant document must be an object");
    const auto n = detail::dim_field(j, "n"), m1 = detail::dim_field(j, "m1"),
               m2 = detail::dim_field(j, "m2"), p1 = detail::dim_field(j, "p1"),
               p2 = detail::dim_field(j, "p2");
    auto block = [&](const char* key, Eigen::Index r, Eigen::Index c, bool optional) {
        if (!j.contains(key)) {
            if (optional) return Matrix(Matrix::Zero(r, c));
            throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
        }
        return detail::matrix_from_json(j.at(key), key, r, c);
    };
    Plant p;
    p.A = block("A", n, n, false);
    p.B1 = block("B1", n, m1, false);
    p.B2 = block("B2", n, m2, false);
    p.C1 = block("C1", p1, n, false);
    p.C2 = block("C2", p2, n, false);
    p.D11 = block("D11", p1, m1, true);
    p.D12 = block("D12", p1, m2, true);
    p.D21 = block("D21", p2, m1, true);
    p.D22 = block("D22", p2, m2, true);
    p.validate();
    return p;
}

json to_json(const Plant& p) {
    json j;
    j["n"] = p.n();
    j["m1"] = p.m1();
    j["m2"] = p.m2();
    j["p1"] = p.p1();
    j["p2"] = p.p2();
    j["A"] = detail::matrix_to_json(p.A);
    j["B1"] = detail::matrix_to_json(p.B1);
    j["B2"] = detail::matrix_to_json(p.B2);
    j["C1"] = detail::matrix_to_json(p.C1);
    j["C2"] = detail::matrix_to_json(p.C2);
    j["D11"] = detail::matrix_to_json(p.D11);
    j["D12"] = detail::matrix_to_json(p.D12);
    j["D21"] = detail::matrix_to_json(p.D21);
    j["D22"] = detail::matrix_to_json(p.D22);
    return j;
}

Controller controller_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::ParseError, "controller document must be an object");
    const auto [m2, p2] = detail::json_shape(detail::required(j, "DK"), "DK");
    if (m2 == 0 || p2 == 0) throw Error(Errc::DimensionMismatch, "DK must be nonempty");
    Eigen::Index nK = 0;
    if (j.contains("nK")) {
        nK = detail::dim_field(j, "nK");
    } else if (j.contains("AK")) {
        nK = detail::json_shape(j.at("AK"), "AK").first;
    }
    auto block = [&](const char* key, Eigen::Index r, Eigen::Index c) {
        if (!j.contains(key)) {
            if (r * c == 0) return Matrix(Matrix::Zero(r, c));
            throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
        }
        return detail::matrix_from_json(j.at(key), key, r, c);
    };
    Controller k;
    k.AK = block("AK", nK, nK);
    k.BK = block("BK", nK, p2);
    k.CK = block("CK", m2, nK);
    k.DK = detail::matrix_from_json(j.at("DK"), "DK", m2, p2);
    k.validate();
    return k;
}

json to_json(const Controller& k) {
    json j;
    j["nK"] = k.order();
    j["AK"] = detail::matrix_to_json(k.AK);
    j["BK"] = detail::matrix_to_json(k.BK);
    j["CK"] = detail::matrix_to_json(k.CK);
    j["DK"] = detail::matrix_to_json(k.DK);
    return j;
}

StateSpace statespace_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::ParseError, "realization document must be an object");
    const auto [n, n2] = detail::json_shape(detail::required(j, "A"), "A");
    const auto [p, m] = detail::json_shape(detail::required(j, "D"), "D");
    if (n != n2) throw Error(Errc::DimensionMismatch, "A is not square");
    StateSpace s;
    s.A = detail::matrix_from_json(j.at("A"), "A", n, n);
    s.B = detail::matrix_from_json(detail::required(j, "B"), "B", n, m);
    s.C = detail::matrix_from_json(detail::required(j, "C"), "C", p, n);
    s.D = detail::matrix_from_json(j.at("D"), "D", p, m);
    s.validate();
    return s;
}

json to_json(const StateSpace& s) {
    return {{"A", detail::matrix_to_json(s.A)},
            {"B", detail::matrix_to_json(s.B)},
            {"C", detail::matrix_to_json(s.C)},
            {"D", detail::matrix_to_json(s.D)}};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json load_json(const std::filesystem::path& path) { return detail::parse_file(path); }

Plant load_plant(const std::filesystem::path& path) {
    return detail::with_path(path, [&] { return plant_from_json(detail::parse_file(path)); });
}

Controller load_controller(const std::filesystem::path& path) {
    return detail::with_path(path, [&] { return controller_from_json(detail::parse_file(path)); });
}

StateSpace load_statespace(const std::filesystem::path& path) {
    return detail::with_path(path, [&] { return statespace_from_json(detail::parse_file(path)); });
}

void save_json(const std::filesystem::path& path, const json& j) { detail::write_file(path, j); }

void save_plant(const std::filesystem::path& path, const Plant& p) {
    detail::write_file(path, to_json(p));
}

void save_controller(const std::filesystem::path& path, const Controller& k) {
    detail::write_file(path, to_json(k));
}

}  // namespace fohinf
