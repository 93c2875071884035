#pragma once

#include <stdexcept>
#include <string>

namespace robinrad {

enum class ErrorCode {
    InvalidArgument,
    PivotBreakdown,
    NonConvergence,
    DiscriminantNegative,
    StepSizeUnderflow,
    NoSignChange,
    NoPositiveSolution,
    ExistenceGateFailed,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PivotBreakdown: return "PivotBreakdown";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DiscriminantNegative: return "DiscriminantNegative";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoPositiveSolution: return "NoPositiveSolution";
    case ErrorCode::ExistenceGateFailed: return "ExistenceGateFailed";
    }
    return "Unknown";
}

/// Base of every error thrown by the library. The code is what callers
/// (notably the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// A pivot of the shifted LDL^T factorization was exactly zero.
class PivotBreakdown : public Error {
public:
    PivotBreakdown(double shift, std::size_t index)
        : Error(ErrorCode::PivotBreakdown,
                "zero pivot at row " + std::to_string(index) + " for shift " + std::to_string(shift)),
          shift_(shift) {}
    double shift() const noexcept { return shift_; }

private:
    double shift_;
};

/// Eigensolver gave up; carries the last bracket so the caller can refine.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double lo, double hi)
        : Error(ErrorCode::NonConvergence, what), lo_(lo), hi_(hi) {}
    double lower() const noexcept { return lo_; }
    double upper() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

class DiscriminantNegative : public Error {
public:
    explicit DiscriminantNegative(const std::string& what) : Error(ErrorCode::DiscriminantNegative, what) {}
};

class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(const std::string& what, double r)
        : Error(ErrorCode::StepSizeUnderflow, what), r_(r) {}
    double radius() const noexcept { return r_; }

private:
    double r_;
};

class NoSignChange : public Error {
public:
    explicit NoSignChange(const std::string& what) : Error(ErrorCode::NoSignChange, what) {}
};

/// The linear mode Phi is not positive at the boundary, so no amplitude exists.
class NoPositiveSolution : public Error {
public:
    explicit NoPositiveSolution(const std::string& what) : Error(ErrorCode::NoPositiveSolution, what) {}
};

/// sigma0 * lambda is at or above the first weighted Dirichlet eigenvalue.
class ExistenceGateFailed : public Error {
public:
    ExistenceGateFailed(const std::string& what, double lambda_tilde, double dirichlet_lambda)
        : Error(ErrorCode::ExistenceGateFailed, what),
          lambda_tilde_(lambda_tilde), dirichlet_lambda_(dirichlet_lambda) {}
    double lambda_tilde() const noexcept { return lambda_tilde_; }
    double dirichlet_lambda() const noexcept { return dirichlet_lambda_; }

private:
    double lambda_tilde_;
    double dirichlet_lambda_;
};

} // namespace robinrad
