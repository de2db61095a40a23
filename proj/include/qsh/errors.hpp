#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsh {

enum class ErrorCode {
    EmptyRows,
    DimensionMismatch,
    NonFiniteValue,
    InvalidMeasure,
    EmptyFamily,
    MissingValue,
    InvalidMarket,
    ClaimMismatch,
    DimensionError,
    LeafNode,
    CycleDetected,
    RaggedDepth,
    PriorArityMismatch,
    NegativePrice,
    InvalidTree,
    MissingPayoff,
    GlobalIPDetected,
    ScaleExceeded,
    ParseError,
    InternalInvariant,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code carries the failure kind
// and `node` is set for tree errors that can be attributed to one node.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<int> node = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), node_(node) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::optional<int> node() const noexcept { return node_; }

private:
    ErrorCode code_;
    std::optional<int> node_;
};

}  // namespace qsh
