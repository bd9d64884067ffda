#pragma once

#include "cartanlab/extension.hpp"

#include <optional>

namespace cartanlab {

// 2-jets at 0 of vector fields vanishing at 0.
//
// Element (A, S) stands for the field x -> A x + S(x,x) with S^i_jk symmetric in (j,k).
// Coordinates: A entries row-major (n^2 of them), then for each i the pairs (j,k) with j <= k.
// The bracket is the negative of the vector-field bracket, so the A-part is the matrix commutator.

std::size_t jet2_dim(std::size_t n);
std::size_t sym_pair_index(std::size_t n, std::size_t j, std::size_t k);

struct Jet2Element {
    QMatrix A;
    std::vector<QMatrix> S;  ///< S[i](j,k) = S^i_jk
};

Jet2Element jet2_from_coords(std::size_t n, const QVec& c);
QVec jet2_to_coords(const Jet2Element& e);

AlmostLieAlgebra jet2_algebra(std::size_t n);

/// Pfaffian data of second order frames: g = jet2(n), V = gl(n) x R^n,
/// rho(A,S)(alpha,v) = ([A,alpha] + S(v,.), A v), l(A,S) = (A, 0).
PfaffianGroupData second_order_pfaffian(std::size_t n);

struct SecondOrderModel {
    ModelExtension model;     ///< z2 = h |x (g1 |x R^n) with canonical splittings
    AlmostLieAlgebra g1;      ///< first-order algebra (subalgebra of gl(n))
    std::vector<QMatrix> g1_matrices;
    std::vector<std::vector<QMatrix>> h_tensors;  ///< per h basis element, S[i](j,k)
    std::size_t n = 0;
};

/// h = prolongation of g1 (all symmetric S when g1 = gl(n)), k = g1 |x R^n,
/// h acting on k by S.(alpha, v) = (S(v,.), 0).
/// `g1_sub` is a subspace of gl(n) in E_ij coordinates; it must be a subalgebra.
SecondOrderModel second_order_model(std::size_t n, const std::optional<Subspace>& g1_sub = std::nullopt);

}  // namespace cartanlab
