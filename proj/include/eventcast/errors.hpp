#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eventcast {

/// Malformed input data or serialized document (bad framing, bad field, bad version).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
    FormatError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// A serialized document whose format version this build does not speak.
class VersionError : public FormatError {
public:
    explicit VersionError(const std::string& what) : FormatError(what) {}
};

/// Two series that must share start and length do not.
class AlignmentError : public std::runtime_error {
public:
    explicit AlignmentError(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough samples to perform an estimation.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Zero-variance or singular input where an estimator needs spread.
class DegenerateDataError : public std::runtime_error {
public:
    explicit DegenerateDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Observations fed out of time order.
class OrderingError : public std::runtime_error {
public:
    explicit OrderingError(const std::string& what) : std::runtime_error(what) {}
};

/// A filter matched nothing.
class EmptySelectionError : public std::runtime_error {
public:
    explicit EmptySelectionError(const std::string& what) : std::runtime_error(what) {}
};

/// Every candidate in a model-selection grid failed to fit.
class SelectionError : public std::runtime_error {
public:
    explicit SelectionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eventcast
