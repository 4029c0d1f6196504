#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nearca {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands belong to different groups, fields or shapes.
class mismatch_error : public error {
public:
    using error::error;
};

/// The requested operation is not available for this group kind or field.
class unsupported_error : public error {
public:
    using error::error;
};

/// The Magnus comparison did not separate two distinct elements below the cap.
class undecidable_at_cap : public error {
public:
    using error::error;
};

/// A polynomial product would exceed the configured term cap.
class term_cap_exceeded : public error {
public:
    using error::error;
};

/// An exhaustive search space is larger than the configured cap.
class search_space_too_large : public error {
public:
    search_space_too_large(const std::string& what, double estimate)
        : error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Malformed textual input. `offset()` is the zero-based byte position.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t offset)
        : error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace nearca
