#ifndef UMAPLAB_COMMON_HPP
#define UMAPLAB_COMMON_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

/**
 * @file common.hpp
 *
 * @brief Shared matrix aliases and the exception hierarchy used across the library.
 */

namespace umaplab {

/// Points are stored one per row; row-major keeps per-point access contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using Index = std::uint32_t;

/**
 * Base class for every error raised by the library.
 * The message is prefixed with the name of the module that raised it.
 */
class Error : public std::runtime_error {
public:
    Error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}

    const std::string& module() const { return module_; }

private:
    std::string module_;
};

/// Invalid parameters or shapes supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    ParseError(const std::string& module, const std::string& what, std::size_t row, std::size_t column)
        : Error(module, what), row_(row), column_(column) {}

    /// 1-based line number in the source file.
    std::size_t row() const { return row_; }
    /// 1-based column; 0 when the error concerns the whole row.
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

/// A computation produced non-finite values or failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace umaplab

#endif
