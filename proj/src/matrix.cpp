#include "skewform/matrix.hpp"
#include "skewform/errors.hpp"

#include <utility>

namespace skewform {

ExprMatrix ExprMatrix::identity(std::size_t n)
{
    ExprMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Expr(1);
    }
    return m;
}

ExprMatrix ExprMatrix::transposed() const
{
    ExprMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

ExprMatrix ExprMatrix::operator*(const ExprMatrix &o) const
{
    if (cols_ != o.rows_) {
        throw Error("matrix shapes do not match for multiplication");
    }
    ExprMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < o.cols_; ++j) {
            Expr s;
            for (std::size_t k = 0; k < cols_; ++k) {
                if (!(*this)(i, k).is_zero() && !o(k, j).is_zero()) {
                    s += (*this)(i, k) * o(k, j);
                }
            }
            r(i, j) = std::move(s);
        }
    }
    return r;
}

ExprMatrix ExprMatrix::submatrix(const std::vector<int> &rows, const std::vector<int> &cols) const
{
    ExprMatrix r(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            r(i, j) = (*this)(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(cols[j]));
        }
    }
    return r;
}

Expr determinant(const ExprMatrix &m)
{
    if (!m.square()) {
        throw Error("determinant of a non-square matrix");
    }
    const std::size_t n = m.rows();
    if (n == 0) {
        return Expr(1);
    }
    if (n == 1) {
        return m(0, 0);
    }
    if (n == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    }
    ExprMatrix a = m;
    Expr det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r) {
            if (!a(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot == n) {
            return Expr();
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
            }
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col).is_zero()) {
                continue;
            }
            const Expr f = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) {
                if (!a(col, j).is_zero()) {
                    a(r, j) -= f * a(col, j);
                }
            }
        }
    }
    return det;
}

std::optional<ExprMatrix> inverse(const ExprMatrix &m)
{
    if (!m.square()) {
        throw Error("inverse of a non-square matrix");
    }
    const std::size_t n = m.rows();
    ExprMatrix a = m;
    ExprMatrix inv = ExprMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (std::size_t r = col; r < n; ++r) {
            if (!a(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot == n) {
            return std::nullopt;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const Expr p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col).is_zero()) {
                continue;
            }
            const Expr f = a(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace skewform
