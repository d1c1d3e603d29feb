#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace risvlc {

enum class ErrorKind {
    Range,
    EvanescentOrder,
    TotalInternalReflection,
    NullBeyondHorizon,
    QuadratureFailure,
    OutOfMaterialRange,
    Infeasible,
    NonMonotonic,
    NonConvergent,
    Parse,
    Validation,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Range: return "RangeError";
    case ErrorKind::EvanescentOrder: return "EvanescentOrder";
    case ErrorKind::TotalInternalReflection: return "TotalInternalReflection";
    case ErrorKind::NullBeyondHorizon: return "NullBeyondHorizon";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::OutOfMaterialRange: return "OutOfMaterialRange";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NonMonotonic: return "NonMonotonic";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

/// Process exit code for an error kind: 2 validation, 3 numerical, 4 I/O.
constexpr int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Range:
    case ErrorKind::Parse:
    case ErrorKind::Validation: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error{what}, kind_{kind} {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error{ErrorKind::Range, what} {}
};

class EvanescentOrder : public Error {
public:
    explicit EvanescentOrder(const std::string& what) : Error{ErrorKind::EvanescentOrder, what} {}
};

class TotalInternalReflection : public Error {
public:
    explicit TotalInternalReflection(const std::string& what)
        : Error{ErrorKind::TotalInternalReflection, what} {}
};

class NullBeyondHorizon : public Error {
public:
    explicit NullBeyondHorizon(const std::string& what) : Error{ErrorKind::NullBeyondHorizon, what} {}
};

class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& what) : Error{ErrorKind::QuadratureFailure, what} {}
};

class OutOfMaterialRange : public Error {
public:
    explicit OutOfMaterialRange(const std::string& what)
        : Error{ErrorKind::OutOfMaterialRange, what} {}
};

/// Target outside the actuator's reachable interval; carries that interval.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, double lo, double hi)
        : Error{ErrorKind::Infeasible, what}, reachable_lo{lo}, reachable_hi{hi} {}
    double reachable_lo;
    double reachable_hi;
};

class NonMonotonic : public Error {
public:
    explicit NonMonotonic(const std::string& what) : Error{ErrorKind::NonMonotonic, what} {}
};

class NonConvergent : public Error {
public:
    explicit NonConvergent(const std::string& what) : Error{ErrorKind::NonConvergent, what} {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error{ErrorKind::Parse, what} {}
};

struct Violation {
    std::string path;
    std::string message;
};

/// All violations found while validating a document, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> v)
        : Error{ErrorKind::Validation, format(v)}, violations{std::move(v)} {}
    std::vector<Violation> violations;

private:
    static std::string format(const std::vector<Violation>& v) {
        std::string out = std::to_string(v.size()) + " validation error(s):";
        for (const auto& e : v) out += " [" + e.path + ": " + e.message + "]";
        return out;
    }
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error{ErrorKind::Io, what} {}
};

}  // namespace risvlc
