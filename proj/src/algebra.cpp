#include "cartanlab/algebra.hpp"

#include "cartanlab/errors.hpp"

#include <stdexcept>

namespace cartanlab {

AlmostLieAlgebra::AlmostLieAlgebra(std::string name, std::vector<std::string> basis_names, std::vector<Rational> sc)
    : name_(std::move(name)), dim_(basis_names.size()), names_(std::move(basis_names)), sc_(std::move(sc)) {
    if (sc_.size() != dim_ * dim_ * dim_)
        throw DimensionMismatch("structure constant array has wrong size for dim " + std::to_string(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = j; k < dim_; ++k)
                if (d(i, j, k) != -d(i, k, j))
                    throw NotAntisymmetric("d^" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                                           std::to_string(k + 1) + " is not antisymmetric");
}

AlmostLieAlgebra AlmostLieAlgebra::from_brackets(std::string name, std::vector<std::string> basis_names,
                                                 const std::function<QVec(std::size_t, std::size_t)>& br) {
    const std::size_t n = basis_names.size();
    std::vector<Rational> sc(n * n * n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            QVec v = br(j, k);
            if (v.size() != n) throw DimensionMismatch("bracket callback returned wrong length");
            for (std::size_t i = 0; i < n; ++i) sc[(i * n + j) * n + k] = v[i];
        }
    return AlmostLieAlgebra(std::move(name), std::move(basis_names), std::move(sc));
}

AlmostLieAlgebra AlmostLieAlgebra::abelian(std::size_t dim, std::string name, std::string prefix) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < dim; ++i) names.push_back(prefix + std::to_string(i + 1));
    if (name.empty()) name = "ab" + std::to_string(dim);
    return AlmostLieAlgebra(std::move(name), std::move(names), std::vector<Rational>(dim * dim * dim, Rational(0)));
}

QVec AlmostLieAlgebra::basis_bracket(std::size_t j, std::size_t k) const {
    QVec v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = d(i, j, k);
    return v;
}

QMatrix AlmostLieAlgebra::ad(std::size_t j) const {
    QMatrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) m(i, k) = d(i, j, k);
    return m;
}

LinearRep::LinearRep(AlmostLieAlgebra alg, std::size_t dim, std::vector<QMatrix> mats)
    : algebra(std::move(alg)), space_dim(dim), matrices(std::move(mats)) {
    if (matrices.size() != algebra.dim()) throw DimensionMismatch("rep needs one matrix per basis element");
    for (const auto& m : matrices)
        if (m.rows() != space_dim || m.cols() != space_dim) throw DimensionMismatch("rep matrix has wrong shape");
}

QMatrix LinearRep::matrix_of(const QVec& alpha) const {
    if (alpha.size() != algebra.dim()) throw DimensionMismatch("rep: coefficient vector length");
    QMatrix m(space_dim, space_dim);
    for (std::size_t a = 0; a < alpha.size(); ++a)
        if (alpha[a] != 0) m = m + alpha[a] * matrices[a];
    return m;
}

QVec LinearRep::act(const QVec& alpha, const QVec& v) const { return matrix_of(alpha) * v; }

QVec bracket(const AlmostLieAlgebra& alg, const QVec& u, const QVec& v) {
    const std::size_t n = alg.dim();
    if (u.size() != n || v.size() != n) throw DimensionMismatch("bracket: vector length differs from dim");
    QVec r(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        if (u[j] == 0) continue;
        for (std::size_t k = 0; k < n; ++k) {
            if (v[k] == 0) continue;
            Rational uv = u[j] * v[k];
            for (std::size_t i = 0; i < n; ++i)
                if (alg.d(i, j, k) != 0) r[i] += alg.d(i, j, k) * uv;
        }
    }
    return r;
}

QVec jacobiator(const AlmostLieAlgebra& alg, const QVec& u, const QVec& v, const QVec& w) {
    return bracket(alg, bracket(alg, u, v), w) + bracket(alg, bracket(alg, v, w), u) +
           bracket(alg, bracket(alg, w, u), v);
}

std::optional<Triple> jacobi_witness(const AlmostLieAlgebra& alg) {
    const std::size_t n = alg.dim();
    // The jacobiator is alternating, so i<j<k suffices.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (!is_zero(jacobiator(alg, unit_vec(n, i), unit_vec(n, j), unit_vec(n, k)))) return Triple{i, j, k};
    return std::nullopt;
}

bool is_lie(const AlmostLieAlgebra& alg) { return !jacobi_witness(alg).has_value(); }

bool is_ideal(const AlmostLieAlgebra& alg, const Subspace& s) {
    if (s.ambient_dim() != alg.dim()) throw DimensionMismatch("is_ideal: ambient dimension differs from dim");
    for (std::size_t j = 0; j < alg.dim(); ++j)
        for (const auto& v : s.basis())
            if (!s.contains(bracket(alg, unit_vec(alg.dim(), j), v))) return false;
    return true;
}

bool is_subalgebra(const AlmostLieAlgebra& alg, const Subspace& s) {
    if (s.ambient_dim() != alg.dim()) throw DimensionMismatch("is_subalgebra: ambient dimension differs");
    for (const auto& u : s.basis())
        for (const auto& v : s.basis())
            if (!s.contains(bracket(alg, u, v))) return false;
    return true;
}

std::optional<Triple> derivation_witness(const LinearRep& rep, const AlmostLieAlgebra& k) {
    if (rep.space_dim != k.dim()) throw DimensionMismatch("derivation check: rep space differs from k");
    const std::size_t n = k.dim();
    for (std::size_t a = 0; a < rep.algebra.dim(); ++a) {
        const QMatrix& m = rep.matrices[a];
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = v + 1; w < n; ++w) {
                QVec ev = unit_vec(n, v), ew = unit_vec(n, w);
                QVec lhs = m * k.basis_bracket(v, w);
                QVec rhs = bracket(k, m * ev, ew) + bracket(k, ev, m * ew);
                if (lhs != rhs) return Triple{a, v, w};
            }
    }
    return std::nullopt;
}

bool is_derivation_action(const LinearRep& rep, const AlmostLieAlgebra& k) {
    return !derivation_witness(rep, k).has_value();
}

std::optional<Pair> representation_witness(const LinearRep& rep) {
    const auto& g = rep.algebra;
    for (std::size_t a = 0; a < g.dim(); ++a)
        for (std::size_t b = a + 1; b < g.dim(); ++b)
            if (rep.matrix_of(g.basis_bracket(a, b)) != commutator(rep.matrices[a], rep.matrices[b]))
                return Pair{a, b};
    return std::nullopt;
}

bool is_representation(const LinearRep& rep) { return !representation_witness(rep).has_value(); }

AlmostLieAlgebra semidirect(const AlmostLieAlgebra& g, const LinearRep& rep, const AlmostLieAlgebra& k) {
    if (rep.space_dim != k.dim()) throw DimensionMismatch("semidirect: rep space differs from k");
    if (rep.algebra.dim() != g.dim()) throw DimensionMismatch("semidirect: rep is not of g");
    const std::size_t m = g.dim(), n = k.dim(), N = m + n;
    std::vector<std::string> names = g.basis_names();
    names.insert(names.end(), k.basis_names().begin(), k.basis_names().end());
    std::vector<Rational> sc(N * N * N, Rational(0));
    auto at = [&](std::size_t i, std::size_t j, std::size_t l) -> Rational& { return sc[(i * N + j) * N + l]; };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < m; ++l) at(i, j, l) = g.d(i, j, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) at(m + i, m + j, m + l) = k.d(i, j, l);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t w = 0; w < n; ++w)
            for (std::size_t i = 0; i < n; ++i) {
                at(m + i, a, m + w) = rep.matrices[a](i, w);
                at(m + i, m + w, a) = -rep.matrices[a](i, w);
            }
    std::string name = g.name() + "|x" + k.name();
    return AlmostLieAlgebra(std::move(name), std::move(names), std::move(sc));
}

LinearRep adjoint_rep(const AlmostLieAlgebra& alg) {
    std::vector<QMatrix> mats;
    for (std::size_t j = 0; j < alg.dim(); ++j) mats.push_back(alg.ad(j));
    return LinearRep(alg, alg.dim(), std::move(mats));
}

namespace {

QMatrix complement_projection(std::size_t n, const std::vector<QVec>& comp, const Subspace& sub) {
    std::vector<QVec> cols = comp;
    cols.insert(cols.end(), sub.basis().begin(), sub.basis().end());
    auto inv = inverse(QMatrix::from_columns(n, cols));
    if (!inv) throw std::logic_error("complement does not span together with the subspace");
    QMatrix p(comp.size(), n);
    for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = (*inv)(i, j);
    return p;
}

std::vector<Rational> quotient_constants(const AlmostLieAlgebra& alg, const std::vector<QVec>& comp,
                                         const QMatrix& proj) {
    const std::size_t q = comp.size();
    std::vector<Rational> sc(q * q * q, Rational(0));
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t k = 0; k < q; ++k) {
            QVec c = proj * bracket(alg, comp[j], comp[k]);
            for (std::size_t i = 0; i < q; ++i) sc[(i * q + j) * q + k] = c[i];
        }
    return sc;
}

}  // namespace

QuotientAlgebra quotient(const AlmostLieAlgebra& alg, const Subspace& ideal) {
    if (ideal.ambient_dim() != alg.dim()) throw DimensionMismatch("quotient: ambient dimension differs");
    if (!is_ideal(alg, ideal)) throw NotAnIdeal("quotient: subspace is not an ideal of " + alg.name());
    const std::size_t n = alg.dim();
    auto comp = ideal.standard_complement();
    QMatrix proj = complement_projection(n, comp, ideal);
    auto sc = quotient_constants(alg, comp, proj);

    if (ideal.dim() > 0 && !comp.empty()) {
        auto comp2 = comp;
        for (auto& c : comp2) c = c + ideal.basis().front();
        QMatrix proj2 = complement_projection(n, comp2, ideal);
        if (quotient_constants(alg, comp2, proj2) != sc)
            throw std::logic_error("quotient bracket depends on the complement");
    }

    std::vector<std::string> names;
    for (const auto& c : comp) {
        std::size_t idx = 0;
        while (idx < n && c[idx] == 0) ++idx;
        names.push_back("[" + alg.basis_names()[idx] + "]");
    }
    AlmostLieAlgebra q(alg.name() + "/" + std::to_string(ideal.dim()), std::move(names), std::move(sc));
    return QuotientAlgebra{std::move(q), std::move(comp), std::move(proj)};
}

AlmostLieAlgebra quotient_algebra(const AlmostLieAlgebra& alg, const Subspace& ideal) {
    return quotient(alg, ideal).algebra;
}

AlmostLieAlgebra subalgebra(const AlmostLieAlgebra& alg, const Subspace& s, std::string name) {
    if (!is_subalgebra(alg, s)) throw Error("subalgebra: subspace is not closed under the bracket");
    const std::size_t m = s.dim();
    std::vector<std::string> names;
    for (std::size_t a = 0; a < m; ++a) names.push_back("s" + std::to_string(a + 1));
    return AlmostLieAlgebra::from_brackets(std::move(name), std::move(names), [&](std::size_t j, std::size_t k) {
        return *s.coordinates(bracket(alg, s.basis()[j], s.basis()[k]));
    });
}

LinearRep restrict_rep(const LinearRep& rep, const Subspace& s, const AlmostLieAlgebra& sub) {
    if (s.dim() != sub.dim()) throw DimensionMismatch("restrict_rep: subalgebra dimension");
    std::vector<QMatrix> mats;
    for (const auto& b : s.basis()) mats.push_back(rep.matrix_of(b));
    return LinearRep(sub, rep.space_dim, std::move(mats));
}

QuotientRep quotient_rep(const LinearRep& rep, const Subspace& invariant) {
    if (invariant.ambient_dim() != rep.space_dim) throw DimensionMismatch("quotient_rep: ambient dimension");
    for (const auto& m : rep.matrices)
        for (const auto& w : invariant.basis())
            if (!invariant.contains(m * w)) throw Error("quotient_rep: subspace is not invariant");
    auto comp = invariant.standard_complement();
    QMatrix proj = complement_projection(rep.space_dim, comp, invariant);
    QMatrix c = QMatrix::from_columns(rep.space_dim, comp);
    std::vector<QMatrix> mats;
    for (const auto& m : rep.matrices) mats.push_back(proj * m * c);
    return QuotientRep{LinearRep(rep.algebra, comp.size(), std::move(mats)), std::move(proj)};
}

}  // namespace cartanlab
