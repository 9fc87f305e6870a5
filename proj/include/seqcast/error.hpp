#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqcast {

enum class ErrorCode {
    EmptyInput,
    MalformedRow,
    UnknownVehicle,
    InvalidPeriod,
    InvalidConfig,
    InvalidRange,
    NonFiniteInput,
    InvalidHorizon,
    InsufficientData,
    OutOfDomain,
    AllZeroPossibility,
    UnfittedModel,
    DimensionMismatch,
    DivergedTraining,
    LengthMismatch,
    EmptySeries,
    TooManySeries,
    Io,
    Format,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace seqcast
