#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace forge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error("syntax error at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the domain of an expression or produced a non-finite number.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message, std::optional<std::size_t> node = std::nullopt)
        : Error(node ? message + " (node " + std::to_string(*node) + ")" : message), node_(node) {}

    std::optional<std::size_t> node() const noexcept { return node_; }

private:
    std::optional<std::size_t> node_;
};

/// Two fields that must share a grid do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A seed has a node, a P-matrix determinant changes sign, or a chained
/// normalization vanishes: the transformed potential would be singular.
class SingularTransform : public Error {
public:
    SingularTransform(const std::string& message, std::size_t node)
        : Error(message + " (node " + std::to_string(node) + ")"), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Caller supplied inconsistent inputs (duplicate spectral parameters,
/// direction/boundary mismatch, wrong matrix sizes, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace forge
