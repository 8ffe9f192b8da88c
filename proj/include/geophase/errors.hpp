// errors.hpp — structured failures raised by the geometric-phase pipeline

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geophase {

enum class ErrorKind {
    InvalidInput,
    DegeneracyEncountered,
    NullOverlap,
    RealityViolation,
    ReducedDegeneracy,
    NumericalFailure,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegeneracyEncountered: return "DegeneracyEncountered";
    case ErrorKind::NullOverlap: return "NullOverlap";
    case ErrorKind::RealityViolation: return "RealityViolation";
    case ErrorKind::ReducedDegeneracy: return "ReducedDegeneracy";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace geophase
