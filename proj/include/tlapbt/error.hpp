#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tlapbt {

enum class ErrorCode : std::uint8_t {
    UnboundVariable,
    TypeMismatch,
    PrimedInStateFormula,
    EmptyChooseDomain,
    ArithmeticOverflow,
    UnboundedDomain,
    NoInitialStates,
    MissingDefinition,
    MissingParameter,
    UnknownInvariant,
    InvalidSpec,
    InvalidArgument,
    ConsumptionOutOfRange,
    NondeterministicEffect,
    PreconditionViolated,
    SutCrashed,
    ProtocolError,
    SpawnError,
    LexError,
    ParseError,
    UnsupportedConstruct,
};

constexpr std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::PrimedInStateFormula: return "PrimedInStateFormula";
    case ErrorCode::EmptyChooseDomain: return "EmptyChooseDomain";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::NoInitialStates: return "NoInitialStates";
    case ErrorCode::MissingDefinition: return "MissingDefinition";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::UnknownInvariant: return "UnknownInvariant";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConsumptionOutOfRange: return "ConsumptionOutOfRange";
    case ErrorCode::NondeterministicEffect: return "NondeterministicEffect";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SutCrashed: return "SutCrashed";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::SpawnError: return "SpawnError";
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tlapbt
