#include "cartanlab/jet.hpp"

#include "cartanlab/builtin_algebras.hpp"
#include "cartanlab/errors.hpp"

namespace cartanlab {

std::size_t jet2_dim(std::size_t n) { return n * n + n * (n * (n + 1) / 2); }

std::size_t sym_pair_index(std::size_t n, std::size_t j, std::size_t k) {
    if (j > k) std::swap(j, k);
    // Pairs ordered (0,0),(0,1),...,(0,n-1),(1,1),...
    return j * n - j * (j - 1) / 2 + (k - j);
}

Jet2Element jet2_from_coords(std::size_t n, const QVec& c) {
    if (c.size() != jet2_dim(n)) throw DimensionMismatch("jet2 coordinates have wrong length");
    const std::size_t P = n * (n + 1) / 2;
    Jet2Element e{QMatrix(n, n), std::vector<QMatrix>(n, QMatrix(n, n))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e.A(i, j) = c[i * n + j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) e.S[i](j, k) = c[n * n + i * P + sym_pair_index(n, j, k)];
    return e;
}

QVec jet2_to_coords(const Jet2Element& e) {
    const std::size_t n = e.A.rows();
    const std::size_t P = n * (n + 1) / 2;
    QVec c(jet2_dim(n), Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] = e.A(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                if (e.S[i](j, k) != e.S[i](k, j)) throw DimensionMismatch("jet2: S is not symmetric");
                c[n * n + i * P + sym_pair_index(n, j, k)] = e.S[i](j, k);
            }
    return c;
}

namespace {

// U(x,y) = A T(x,y) - B S(x,y) + S(x,By) + S(Bx,y) - T(x,Ay) - T(Ax,y)
Jet2Element jet2_bracket(const Jet2Element& X, const Jet2Element& Y) {
    const std::size_t n = X.A.rows();
    Jet2Element r{commutator(X.A, Y.A), std::vector<QMatrix>(n, QMatrix(n, n))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Rational u = 0;
                for (std::size_t m = 0; m < n; ++m) {
                    u += X.A(i, m) * Y.S[m](j, k) - Y.A(i, m) * X.S[m](j, k);
                    u += X.S[i](j, m) * Y.A(m, k) + X.S[i](m, k) * Y.A(m, j);
                    u -= Y.S[i](j, m) * X.A(m, k) + Y.S[i](m, k) * X.A(m, j);
                }
                r.S[i](j, k) = u;
            }
    return r;
}

}  // namespace

AlmostLieAlgebra jet2_algebra(std::size_t n) {
    if (n == 0) throw DimensionMismatch("jet2_algebra needs n >= 1");
    const std::size_t N = jet2_dim(n);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) names.push_back("A" + std::to_string(i + 1) + std::to_string(j + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                names.push_back("S" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + std::to_string(k + 1));
    std::vector<Jet2Element> basis;
    for (std::size_t a = 0; a < N; ++a) basis.push_back(jet2_from_coords(n, unit_vec(N, a)));
    return AlmostLieAlgebra::from_brackets("jet2(" + std::to_string(n) + ")", std::move(names),
                                           [&](std::size_t a, std::size_t b) {
                                               return jet2_to_coords(jet2_bracket(basis[a], basis[b]));
                                           });
}

PfaffianGroupData second_order_pfaffian(std::size_t n) {
    AlmostLieAlgebra g = jet2_algebra(n);
    const std::size_t N = g.dim();
    const std::size_t V = n * n + n;
    std::vector<QMatrix> mats;
    for (std::size_t a = 0; a < N; ++a) {
        Jet2Element e = jet2_from_coords(n, unit_vec(N, a));
        QMatrix m(V, V);
        // Columns for alpha = E_pq.
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                QMatrix alpha(n, n);
                alpha(p, q) = 1;
                QMatrix c = commutator(e.A, alpha);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) m(i * n + j, p * n + q) = c(i, j);
            }
        // Columns for v = e_s: (S(e_s, .), A e_s).
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) m(i * n + k, n * n + s) = e.S[i](s, k);
            for (std::size_t i = 0; i < n; ++i) m(n * n + i, n * n + s) = e.A(i, s);
        }
        mats.push_back(std::move(m));
    }
    QMatrix l(V, N);
    for (std::size_t a = 0; a < n * n; ++a) l(a, a) = 1;
    LinearRep rho(g, V, std::move(mats));
    return PfaffianGroupData{std::move(g), std::move(rho), std::move(l)};
}

SecondOrderModel second_order_model(std::size_t n, const std::optional<Subspace>& g1_sub) {
    if (n == 0) throw DimensionMismatch("second_order_model needs n >= 1");
    MatrixAlgebra full = gl(n);
    Subspace g1_space = g1_sub ? *g1_sub : Subspace::whole(n * n);
    if (g1_space.ambient_dim() != n * n) throw DimensionMismatch("g1 subspace must live in gl(n)");
    if (!is_subalgebra(full.algebra, g1_space)) throw Error("g1 is not a subalgebra of gl(n)");

    std::vector<QMatrix> g1_mats;
    std::vector<std::string> g1_names;
    for (std::size_t a = 0; a < g1_space.dim(); ++a) {
        QMatrix m(n, n);
        for (std::size_t e = 0; e < n * n; ++e) m(e / n, e % n) = g1_space.basis()[a][e];
        g1_mats.push_back(std::move(m));
        g1_names.push_back(g1_sub ? "g" + std::to_string(a + 1) : full.algebra.basis_names()[a]);
    }
    MatrixAlgebra g1 = matrix_algebra("g1", g1_names, g1_mats);

    // Prolongation: symmetric S with S(e_j, .) in g1 for every j.
    const std::size_t P = n * (n + 1) / 2;
    const std::size_t nsym = n * P;
    Subspace ann = kernel_of_linear_map(g1_space.basis_matrix().transpose());
    QMatrix cond(std::max<std::size_t>(1, n * ann.dim()), nsym);
    for (std::size_t s = 0; s < nsym; ++s) {
        QVec c(jet2_dim(n), Rational(0));
        c[n * n + s] = 1;
        Jet2Element e = jet2_from_coords(n, c);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < ann.dim(); ++t) {
                Rational acc = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < n; ++k) acc += ann.basis()[t][i * n + k] * e.S[i](j, k);
                cond(j * ann.dim() + t, s) = acc;
            }
    }
    Subspace prolong = kernel_of_linear_map(cond);

    std::vector<std::vector<QMatrix>> tensors;
    for (const auto& b : prolong.basis()) {
        QVec c(jet2_dim(n), Rational(0));
        for (std::size_t s = 0; s < nsym; ++s) c[n * n + s] = b[s];
        tensors.push_back(jet2_from_coords(n, c).S);
    }
    AlmostLieAlgebra h = AlmostLieAlgebra::abelian(tensors.size(), "g2_1", "S");

    std::vector<std::string> x_names;
    for (std::size_t i = 0; i < n; ++i) x_names.push_back("x" + std::to_string(i + 1));
    AlmostLieAlgebra rn("R" + std::to_string(n), x_names, std::vector<Rational>(n * n * n, Rational(0)));
    AlmostLieAlgebra k = semidirect(g1.algebra, g1.standard_rep(), rn);

    // S acts on k: (alpha, v) -> (S(v, .), 0).
    const std::size_t m1 = g1.algebra.dim();
    QMatrix g1_coords = g1_space.basis_matrix();
    std::vector<QMatrix> act;
    for (const auto& S : tensors) {
        QMatrix m(m1 + n, m1 + n);
        for (std::size_t v = 0; v < n; ++v) {
            QVec flat(n * n, Rational(0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t kk = 0; kk < n; ++kk) flat[i * n + kk] = S[i](v, kk);
            auto c = solve(g1_coords, flat);
            if (!c) throw std::logic_error("prolongation element leaves g1");
            for (std::size_t a = 0; a < m1; ++a) m(a, m1 + v) = (*c)[a];
        }
        act.push_back(std::move(m));
    }
    LinearRep rep(h, m1 + n, std::move(act));
    ModelExtension model = semidirect_extension(h, rep, k);
    model.cte.z_alg = AlmostLieAlgebra("z2(" + std::to_string(n) + ")", model.cte.z_alg.basis_names(),
                                       model.cte.z_alg.structure_constants());
    return SecondOrderModel{std::move(model), g1.algebra, std::move(g1_mats), std::move(tensors), n};
}

}  // namespace cartanlab
