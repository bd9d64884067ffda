#pragma once

#include "cartanlab/linalg.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cartanlab {

/// Finite-dimensional vector space with an antisymmetric bilinear bracket.
/// Convention: [e_j, e_k] = sum_i d^i_jk e_i.
class AlmostLieAlgebra {
public:
    AlmostLieAlgebra() = default;

    /// `sc` is indexed as sc[(i*dim + j)*dim + k] = d^i_jk. Throws NotAntisymmetric.
    AlmostLieAlgebra(std::string name, std::vector<std::string> basis_names, std::vector<Rational> sc);

    /// Builds structure constants from a callback returning [e_j, e_k] in coordinates.
    static AlmostLieAlgebra from_brackets(std::string name, std::vector<std::string> basis_names,
                                          const std::function<QVec(std::size_t, std::size_t)>& br);
    static AlmostLieAlgebra abelian(std::size_t dim, std::string name = "", std::string prefix = "e");

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& basis_names() const { return names_; }

    const Rational& d(std::size_t i, std::size_t j, std::size_t k) const {
        return sc_[(i * dim_ + j) * dim_ + k];
    }
    const std::vector<Rational>& structure_constants() const { return sc_; }

    QVec basis_bracket(std::size_t j, std::size_t k) const;
    /// Matrix of ad(e_j): column k is [e_j, e_k].
    QMatrix ad(std::size_t j) const;

    friend bool operator==(const AlmostLieAlgebra& a, const AlmostLieAlgebra& b) {
        return a.dim_ == b.dim_ && a.sc_ == b.sc_;
    }

private:
    std::string name_;
    std::size_t dim_ = 0;
    std::vector<std::string> names_;
    std::vector<Rational> sc_;
};

/// Linear action of an almost Lie algebra on Q^space_dim, one matrix per basis element.
struct LinearRep {
    AlmostLieAlgebra algebra;
    std::size_t space_dim = 0;
    std::vector<QMatrix> matrices;

    LinearRep() = default;
    LinearRep(AlmostLieAlgebra alg, std::size_t space_dim, std::vector<QMatrix> mats);

    /// rho(alpha) for a coordinate vector alpha.
    QMatrix matrix_of(const QVec& alpha) const;
    QVec act(const QVec& alpha, const QVec& v) const;
};

using Triple = std::array<std::size_t, 3>;
using Pair = std::array<std::size_t, 2>;

QVec bracket(const AlmostLieAlgebra& alg, const QVec& u, const QVec& v);
QVec jacobiator(const AlmostLieAlgebra& alg, const QVec& u, const QVec& v, const QVec& w);

/// First basis triple (i<j<k, lexicographic) with nonzero jacobiator.
std::optional<Triple> jacobi_witness(const AlmostLieAlgebra& alg);
bool is_lie(const AlmostLieAlgebra& alg);

bool is_ideal(const AlmostLieAlgebra& alg, const Subspace& s);
bool is_subalgebra(const AlmostLieAlgebra& alg, const Subspace& s);

/// First (alpha, v, w) violating the Leibniz rule, if any.
std::optional<Triple> derivation_witness(const LinearRep& rep, const AlmostLieAlgebra& k);
bool is_derivation_action(const LinearRep& rep, const AlmostLieAlgebra& k);

/// First basis pair (a, b) with rho([a,b]) != [rho(a), rho(b)].
std::optional<Pair> representation_witness(const LinearRep& rep);
bool is_representation(const LinearRep& rep);

/// g x k with [(a,v),(b,w)] = ([a,b], [v,w] + a(w) - b(v)); g-coordinates come first.
AlmostLieAlgebra semidirect(const AlmostLieAlgebra& g, const LinearRep& rep, const AlmostLieAlgebra& k);

LinearRep adjoint_rep(const AlmostLieAlgebra& alg);

struct QuotientAlgebra {
    AlmostLieAlgebra algebra;
    std::vector<QVec> complement;  ///< representatives of the quotient basis
    QMatrix projection;            ///< alg.dim -> quotient coordinates
};

/// Throws NotAnIdeal. Asserts complement independence internally.
QuotientAlgebra quotient(const AlmostLieAlgebra& alg, const Subspace& ideal);
AlmostLieAlgebra quotient_algebra(const AlmostLieAlgebra& alg, const Subspace& ideal);

/// Algebra spanned by a subalgebra basis, with structure constants in that basis.
AlmostLieAlgebra subalgebra(const AlmostLieAlgebra& alg, const Subspace& s, std::string name);

/// Restriction of a rep to a subalgebra given by its basis.
LinearRep restrict_rep(const LinearRep& rep, const Subspace& s, const AlmostLieAlgebra& sub);

/// Projection of rho(alpha) onto a complement of an invariant subspace W.
struct QuotientRep {
    LinearRep rep;
    QMatrix projection;  ///< space -> quotient coordinates
};
QuotientRep quotient_rep(const LinearRep& rep, const Subspace& invariant);

}  // namespace cartanlab
