#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repvec {

enum class ErrorCode {
    MalformedLine,
    EmptyTable,
    DimensionZero,
    NoTokenResolved,
    ParseError,
    DuplicateClassLabel,
    EmptyClass,
    LabelUnresolvable,
    ClassUnresolvable,
    EmptyInput,
    EmptySide,
    AllZeroMembership,
    DimensionMismatch,
    ZeroWeightSum,
    EmptyDataset,
    NonFiniteLoss,
    InvalidWeights,
    InsufficientClasses,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code plus
// the name of the module that raised it, so callers (the CLI in particular)
// can report "module: class: message".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

    // Set when the failure is tied to one ontology class.
    const std::string& class_label() const noexcept { return class_label_; }
    Error& with_class(std::string label) {
        class_label_ = std::move(label);
        return *this;
    }

    // For MalformedLine: 1-based physical line number; for ParseError: byte offset.
    std::size_t position() const noexcept { return position_; }
    Error& at(std::size_t pos) {
        position_ = pos;
        return *this;
    }

private:
    ErrorCode code_;
    std::string module_;
    std::string class_label_;
    std::size_t position_ = 0;
};

}  // namespace repvec
