#include "repvec/error.hpp"

namespace repvec {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::EmptyTable: return "EmptyTable";
        case ErrorCode::DimensionZero: return "DimensionZero";
        case ErrorCode::NoTokenResolved: return "NoTokenResolved";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateClassLabel: return "DuplicateClassLabel";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::LabelUnresolvable: return "LabelUnresolvable";
        case ErrorCode::ClassUnresolvable: return "ClassUnresolvable";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptySide: return "EmptySide";
        case ErrorCode::AllZeroMembership: return "AllZeroMembership";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroWeightSum: return "ZeroWeightSum";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::InsufficientClasses: return "InsufficientClasses";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      module_(std::move(module)) {}

}  // namespace repvec
