#pragma once

#include "cartanlab/algebra.hpp"

#include <string>
#include <vector>

namespace cartanlab {

/// Lie algebra realised by N x N matrices; bracket is the commutator.
struct MatrixAlgebra {
    AlmostLieAlgebra algebra;
    std::vector<QMatrix> basis;  ///< basis[j] realises e_j
    std::size_t size = 0;        ///< N

    /// Defining action on Q^N.
    LinearRep standard_rep() const;
};

/// Coordinates of commutators are solved exactly; throws if the span is not closed.
MatrixAlgebra matrix_algebra(std::string name, std::vector<std::string> names, std::vector<QMatrix> basis);

/// E_ij in row-major order.
MatrixAlgebra gl(std::size_t n);
MatrixAlgebra sl(std::size_t n);
/// E_ij - E_ji for i<j.
MatrixAlgebra so(std::size_t n);
/// {a : a^T J + J a = 0}, J = [[0, I],[-I, 0]].
MatrixAlgebra sp(std::size_t k);
/// Block matrices (a b; 0 c), a in sp(k): sp(k) block first, then b = E_{i,2k+1}, then c.
MatrixAlgebra sp_k1(std::size_t k);

/// hei_{2k+1}: [e_i, e_{k+i}] = e_{2k+1}.
AlmostLieAlgebra heisenberg(std::size_t k);

/// Symplectic form J used by sp(k).
QMatrix symplectic_form(std::size_t k);

/// Parses "gl(n)", "sl(n)", "so(n)", "sp(k)", "sp(k,1)", "hei(2k+1)", "ab(n)", "jet2(n)".
AlmostLieAlgebra builtin_algebra(const std::string& spec);

/// Standard representation for matrix algebras named as in builtin_algebra.
LinearRep builtin_standard_rep(const std::string& spec);

}  // namespace cartanlab
