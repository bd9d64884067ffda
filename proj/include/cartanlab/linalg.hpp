#pragma once

#include "cartanlab/rational.hpp"

#include <optional>
#include <vector>

namespace cartanlab {

/// Dense row-major matrix over the rationals.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);

    static QMatrix identity(std::size_t n);
    static QMatrix from_columns(std::size_t rows, const std::vector<QVec>& cols);
    static QMatrix from_rows(const std::vector<QVec>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QVec col(std::size_t j) const;
    QVec row(std::size_t i) const;
    QMatrix transpose() const;
    bool is_zero() const;

    friend bool operator==(const QMatrix&, const QMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix scale(const Rational& s, const QMatrix& a);
template <std::same_as<Rational> S>
QMatrix operator*(const S& s, const QMatrix& a) {
    return scale(s, a);
}
QVec operator*(const QMatrix& a, const QVec& v);

/// a*b - b*a
QMatrix commutator(const QMatrix& a, const QMatrix& b);

/// [a | b]
QMatrix hstack(const QMatrix& a, const QMatrix& b);

struct RowEchelon {
    QMatrix reduced;                  ///< reduced row echelon form
    std::vector<std::size_t> pivots;  ///< pivot column of each nonzero row
};

RowEchelon rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);

/// Solves A X = B exactly; nullopt when inconsistent. Free variables are set to zero.
std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b);
std::optional<QVec> solve(const QMatrix& a, const QVec& b);

std::optional<QMatrix> inverse(const QMatrix& m);

/// Linear subspace of Q^ambient with a linearly independent basis.
class Subspace {
public:
    /// Throws DimensionMismatch if a vector has the wrong length or the list is dependent.
    Subspace(std::size_t ambient, std::vector<QVec> basis);

    /// Span of arbitrary vectors; dependent ones are dropped (first occurrences kept).
    static Subspace span(std::size_t ambient, const std::vector<QVec>& vectors);
    static Subspace zero(std::size_t ambient);
    static Subspace whole(std::size_t ambient);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<QVec>& basis() const { return basis_; }

    /// ambient x dim matrix whose columns are the basis.
    QMatrix basis_matrix() const;
    bool contains(const QVec& v) const;
    bool contains(const Subspace& other) const;

    /// Coordinates of v in the basis; nullopt if v is not in the subspace.
    std::optional<QVec> coordinates(const QVec& v) const;

    /// Standard basis vectors completing this basis, chosen greedily by index.
    std::vector<QVec> standard_complement() const;

private:
    std::size_t ambient_;
    std::vector<QVec> basis_;
};

Subspace kernel_of_linear_map(const QMatrix& m);
Subspace image_of_linear_map(const QMatrix& m);

}  // namespace cartanlab
