#pragma once

#include "skewform/expr.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace skewform {

// Dense matrix of expressions, row-major.
class ExprMatrix {
public:
    ExprMatrix() = default;
    ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static ExprMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Expr &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Expr &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ExprMatrix transposed() const;
    ExprMatrix operator*(const ExprMatrix &o) const;
    ExprMatrix submatrix(const std::vector<int> &rows, const std::vector<int> &cols) const;

    friend bool operator==(const ExprMatrix &a, const ExprMatrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Expr> data_;
};

// Gaussian elimination over the rational-function field; pivots are chosen
// among structurally nonzero entries.
Expr determinant(const ExprMatrix &m);
std::optional<ExprMatrix> inverse(const ExprMatrix &m);

} // namespace skewform
