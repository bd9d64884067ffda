#include "cartanlab/linalg.hpp"

#include "cartanlab/errors.hpp"

namespace cartanlab {

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_columns(std::size_t rows, const std::vector<QVec>& cols) {
    QMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw DimensionMismatch("from_columns: column length");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVec>& rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("from_rows: row length");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

QVec QMatrix::col(std::size_t j) const {
    QVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

QVec QMatrix::row(std::size_t i) const {
    return QVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool QMatrix::is_zero() const {
    for (const auto& x : data_)
        if (x != 0) return false;
    return true;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum");
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix difference");
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
    QMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) r(i, j) += aik * b(k, j);
        }
    return r;
}

QMatrix scale(const Rational& s, const QMatrix& a) {
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
    return r;
}

QVec operator*(const QMatrix& a, const QVec& v) {
    if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector product");
    QVec r(a.rows(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0 && v[j] != 0) r[i] += a(i, j) * v[j];
    return r;
}

QMatrix commutator(const QMatrix& a, const QMatrix& b) { return a * b - b * a; }

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("hstack: row counts differ");
    QMatrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

RowEchelon rref(const QMatrix& m) {
    RowEchelon out{m, {}};
    QMatrix& a = out.reduced;
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
        std::size_t piv = row;
        while (piv < a.rows() && a(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
        Rational inv = 1 / a(row, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (a(row, j) != 0) a(i, j) -= f * a(row, j);
        }
        out.pivots.push_back(c);
        ++row;
    }
    return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
    auto e = rref(hstack(a, b));
    const std::size_t n = a.cols();
    for (std::size_t p : e.pivots)
        if (p >= n) return std::nullopt;
    QMatrix x(n, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, n + j);
    return x;
}

std::optional<QVec> solve(const QMatrix& a, const QVec& b) {
    auto x = solve(a, QMatrix::from_columns(b.size(), {b}));
    if (!x) return std::nullopt;
    return x->col(0);
}

std::optional<QMatrix> inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse: not square");
    if (rank(m) != m.rows()) return std::nullopt;
    return solve(m, QMatrix::identity(m.rows()));
}

Subspace::Subspace(std::size_t ambient, std::vector<QVec> basis) : ambient_(ambient), basis_(std::move(basis)) {
    for (const auto& v : basis_)
        if (v.size() != ambient_) throw DimensionMismatch("subspace vector has wrong length");
    if (!basis_.empty() && rank(basis_matrix()) != basis_.size())
        throw DimensionMismatch("subspace basis is linearly dependent");
}

Subspace Subspace::span(std::size_t ambient, const std::vector<QVec>& vectors) {
    std::vector<QVec> kept;
    for (const auto& v : vectors) {
        if (v.size() != ambient) throw DimensionMismatch("span: vector has wrong length");
        kept.push_back(v);
        if (rank(QMatrix::from_columns(ambient, kept)) != kept.size()) kept.pop_back();
    }
    return Subspace(ambient, std::move(kept));
}

Subspace Subspace::zero(std::size_t ambient) { return Subspace(ambient, {}); }

Subspace Subspace::whole(std::size_t ambient) {
    std::vector<QVec> b;
    for (std::size_t i = 0; i < ambient; ++i) b.push_back(unit_vec(ambient, i));
    return Subspace(ambient, std::move(b));
}

QMatrix Subspace::basis_matrix() const { return QMatrix::from_columns(ambient_, basis_); }

bool Subspace::contains(const QVec& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("contains: vector has wrong length");
    if (is_zero(v)) return true;
    auto cols = basis_;
    cols.push_back(v);
    return rank(QMatrix::from_columns(ambient_, cols)) == basis_.size();
}

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("contains: ambient dimensions differ");
    for (const auto& v : other.basis_)
        if (!contains(v)) return false;
    return true;
}

std::optional<QVec> Subspace::coordinates(const QVec& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("coordinates: vector has wrong length");
    if (basis_.empty()) return is_zero(v) ? std::optional<QVec>(QVec{}) : std::nullopt;
    return solve(basis_matrix(), v);
}

std::vector<QVec> Subspace::standard_complement() const {
    std::vector<QVec> all = basis_;
    std::vector<QVec> comp;
    for (std::size_t i = 0; i < ambient_ && all.size() < ambient_; ++i) {
        all.push_back(unit_vec(ambient_, i));
        if (rank(QMatrix::from_columns(ambient_, all)) == all.size())
            comp.push_back(all.back());
        else
            all.pop_back();
    }
    return comp;
}

Subspace kernel_of_linear_map(const QMatrix& m) {
    auto e = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<QVec> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        QVec v(n, Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return Subspace(n, std::move(basis));
}

Subspace image_of_linear_map(const QMatrix& m) {
    std::vector<QVec> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    return Subspace::span(m.rows(), cols);
}

}  // namespace cartanlab
