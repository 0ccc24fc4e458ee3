#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace repclust {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The inputs are well-formed but the computation cannot proceed
/// (degenerate geometry, divergence, non-convergence).
class ComputationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class FormatErrorKind {
    malformed,
    non_finite,
    row_length_mismatch,
    label_out_of_range,
    truncated,
};

const char* to_string(FormatErrorKind kind) noexcept;

/// Parse/validation failure while reading a file. Row and column are
/// zero-based data coordinates; npos when not applicable.
class FormatError : public IoError {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    FormatError(FormatErrorKind kind, const std::string& path, const std::string& what,
                std::size_t row = npos, std::size_t col = npos);

    FormatErrorKind kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    FormatErrorKind kind_;
    std::size_t row_;
    std::size_t col_;
};

}  // namespace repclust
