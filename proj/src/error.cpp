#include "seqcast/error.hpp"

namespace seqcast {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::UnknownVehicle: return "UnknownVehicle";
        case ErrorCode::InvalidPeriod: return "InvalidPeriod";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::InvalidHorizon: return "InvalidHorizon";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::AllZeroPossibility: return "AllZeroPossibility";
        case ErrorCode::UnfittedModel: return "UnfittedModel";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DivergedTraining: return "DivergedTraining";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::TooManySeries: return "TooManySeries";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Format: return "Format";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace seqcast
