#pragma once

#include <stdexcept>
#include <string>

namespace selfaffine {

// Machine-readable error codes surfaced by the CLI in report.json.
enum class ErrorCode {
    NotInvertible,
    NotCertifiedExpanding,
    DeterminantTooSmall,
    WrongDigitCount,
    BudgetExceeded,
    StateBudgetExceeded,
    DenominatorOverflow,
    SearchExhausted,
    InsufficientScales,
    InvalidArgument,
    ParseError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotInvertible: return "NotInvertible";
        case ErrorCode::NotCertifiedExpanding: return "NotCertifiedExpanding";
        case ErrorCode::DeterminantTooSmall: return "DeterminantTooSmall";
        case ErrorCode::WrongDigitCount: return "WrongDigitCount";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
        case ErrorCode::DenominatorOverflow: return "DenominatorOverflow";
        case ErrorCode::SearchExhausted: return "SearchExhausted";
        case ErrorCode::InsufficientScales: return "InsufficientScales";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Budget overruns are reported as "inconclusive", never as a classification.
class BudgetError : public Error {
public:
    using Error::Error;
};

}  // namespace selfaffine
