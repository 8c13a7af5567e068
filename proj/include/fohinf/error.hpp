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
#ifndef FOHINF_ERROR_HPP
#define FOHINF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace fohinf {

enum class Errc {
    DimensionMismatch,
    NonFinite,
    IllPosed,
    SingularResolvent,
    EigenFailure,
    UnstableSystem,
    LengthMismatch,
    InfeasibleStart,
    AllStartsInfeasible,
    NotStabilizing,
    NoStabilizingController,
    ParseError,
    InvalidArgument,
};

inline std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NonFinite: return "NonFinite";
        case Errc::IllPosed: return "IllPosed";
        case Errc::SingularResolvent: return "SingularResolvent";
        case Errc::EigenFailure: return "EigenFailure";
        case Errc::UnstableSystem: return "UnstableSystem";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::InfeasibleStart: return "InfeasibleStart";
        case Errc::AllStartsInfeasible: return "AllStartsInfeasible";
        case Errc::NotStabilizing: return "NotStabilizing";
        case Errc::NoStabilizingController: return "NoStabilizingController";
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

    Errc code() const noexcept { return code_; }
    /// what() without the error-code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    Errc code_;
    std::string message_;
};

}  // namespace fohinf

#endif  // FOHINF_ERROR_HPP
