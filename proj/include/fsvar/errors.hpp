#pragma once

#include <stdexcept>
#include <string>

namespace fsvar {

// Error taxonomy shared by the library and the CLI.  Every category carries a
// short machine-parsable code so scripts can branch on stderr output, and the
// CLI maps each category to a distinct exit status.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string what)
        : std::runtime_error("[" + code + "] " + what),
          code_(std::move(code)),
          message_(std::move(what)) {}
    const std::string& code() const { return code_; }
    // The description without the bracketed code prefix (for rewrapping).
    const std::string& message() const { return message_; }

private:
    std::string code_;
    std::string message_;
};

// Invalid configuration: bad JSON, unknown keys, out-of-range settings.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("E_CONFIG", what) {}
};

// Malformed or unusable input data (CSV contents, transform failures).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error("E_DATA", what) {}
};

// Shape/index mismatches between model objects.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error("E_DIMENSION", what) {}
};

// Invalid distribution parameters or a numerical breakdown (e.g. a Cholesky
// factorisation that fails on an ill-conditioned posterior precision).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error("E_NUMERIC", what) {}
};

// Filesystem problems: missing files, short reads, bad magic bytes.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("E_IO", what) {}
};

}  // namespace fsvar
