#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lpv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (system descriptions, generator specs, CSV, model JSON).
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(format(message, line, column)), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }
    int line_;
    int column_;
};

/// Arithmetic failure while evaluating an expression (division by zero, non-finite result).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Incompatible shapes or index ranges between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input data does not span the space an operation requires.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// An iterative numeric procedure failed to produce a usable result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Componentwise interval bounds, lower(i) <= upper(i).
struct Bounds {
    Vector lower;
    Vector upper;

    int dim() const { return static_cast<int>(lower.size()); }

    /// True when v lies inside the box inflated by `inflate` relative to the
    /// local scale max(1, |lower|, |upper|) on each axis.
    bool contains(const Vector& v, double inflate = 0.0) const {
        if (v.size() != lower.size()) return false;
        for (int i = 0; i < lower.size(); ++i) {
            const double pad =
                inflate * std::max({1.0, std::abs(lower(i)), std::abs(upper(i))});
            if (v(i) < lower(i) - pad || v(i) > upper(i) + pad) return false;
        }
        return true;
    }
};

/// Row-wise (row-major) vectorization of a matrix.
inline Vector row_major_vec(const Matrix& m) {
    Vector out(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(k++) = m(i, j);
    return out;
}

/// Inverse of row_major_vec for the given shape.
inline Matrix row_major_unvec(const Vector& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols)
        throw DimensionError("row_major_unvec: vector length does not match shape");
    Matrix out(rows, cols);
    Eigen::Index k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = v(k++);
    return out;
}

}  // namespace lpv
