#pragma once

#include <stdexcept>
#include <string>

namespace chemotax {

/// A field contains NaN/Inf entries, or an operation received a field that
/// violates its strict-sign precondition.
class InvalidField : public std::runtime_error {
public:
    explicit InvalidField(const std::string& what) : std::runtime_error(what) {}
};

/// Initial-data or parameter construction failed validation.
class InvalidData : public std::runtime_error {
public:
    explicit InvalidData(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve did not meet its residual contract.
class SolveFailure : public std::runtime_error {
public:
    SolveFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// An operation was called outside its stated regime (e.g. a tau>0-only
/// functional on a parabolic-elliptic configuration).
class PreconditionViolation : public std::logic_error {
public:
    explicit PreconditionViolation(const std::string& what) : std::logic_error(what) {}
};

/// All optimizer starts collapsed to a degenerate test function.
class EstimateFailure : public std::runtime_error {
public:
    explicit EstimateFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Exponential fit requested on a series that contains nonpositive values in
/// the fit window; callers treat this as "decayed below measurable".
class FitUndefined : public std::runtime_error {
public:
    explicit FitUndefined(const std::string& what) : std::runtime_error(what) {}
};

} // namespace chemotax
