#include "helpers.hpp"

#include "cartanlab/errors.hpp"
#include "cartanlab/jet.hpp"

#include <doctest.h>

#include <map>

using namespace cartanlab;
using namespace testing_support;

namespace {

QMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_rational(rng, 2, 2);
    return m;
}

QMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
    for (;;) {
        QMatrix m = random_matrix(rng, n, n);
        if (rank(m) == n) return m;
    }
}

// Polynomial vector fields on R^n with exact coefficients, keyed by exponent vectors.
using Poly = std::map<std::vector<int>, Rational>;
using Field = std::vector<Poly>;

Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r[e] += ca * cb;
        }
    return r;
}

Poly diff(const Poly& a, std::size_t j) {
    Poly r;
    for (const auto& [e, c] : a)
        if (e[j] > 0) {
            auto f = e;
            --f[j];
            r[f] += c * e[j];
        }
    return r;
}

// (DY) X
Field apply_derivative(const Field& Y, const Field& X) {
    Field r(Y.size());
    for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = 0; j < X.size(); ++j)
            for (const auto& [e, c] : mul(diff(Y[i], j), X[j])) r[i][e] += c;
    return r;
}

std::vector<int> mono(std::size_t n, std::size_t j, std::size_t k) {
    std::vector<int> e(n, 0);
    ++e[j];
    if (k < n) ++e[k];
    return e;
}

std::size_t pair_slot(std::size_t n, std::size_t j, std::size_t k) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b, ++s)
            if (a == j && b == k) return s;
    return s;
}

Field field_of(std::size_t n, const QVec& c) {
    Field X(n);
    const std::size_t P = n * (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) X[i][mono(n, j, n)] += c[i * n + j];
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const Rational& s = c[n * n + i * P + pair_slot(n, j, k)];
                X[i][mono(n, j, k)] += j == k ? s : Rational(2) * s;
            }
    }
    return X;
}

QVec coords_of(std::size_t n, const Field& X) {
    const std::size_t P = n * (n + 1) / 2;
    QVec c(n * n + n * P);
    for (std::size_t i = 0; i < n; ++i) {
        auto get = [&](const std::vector<int>& e) {
            auto it = X[i].find(e);
            return it == X[i].end() ? Rational(0) : it->second;
        };
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] = get(mono(n, j, n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                Rational v = get(mono(n, j, k));
                c[n * n + i * P + pair_slot(n, j, k)] = j == k ? v : v / 2;
            }
    }
    return c;
}

// Negated vector-field bracket DY X - DX Y, truncated to degree 2.
QVec jet2_oracle_bracket(std::size_t n, const QVec& x, const QVec& y) {
    Field X = field_of(n, x), Y = field_of(n, y);
    Field a = apply_derivative(Y, X), b = apply_derivative(X, Y);
    Field r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [e, c] : a[i]) r[i][e] -= c;
        for (const auto& [e, c] : b[i]) r[i][e] += c;
    }
    return coords_of(n, r);
}

}  // namespace

TEST_CASE("jet2 pair index") {
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                CHECK(sym_pair_index(n, j, k) == pair_slot(n, j, k));
                CHECK(sym_pair_index(n, k, j) == pair_slot(n, j, k));
            }
    CHECK(jet2_dim(1) == 2);
    CHECK(jet2_dim(2) == 10);
    CHECK(jet2_dim(3) == 27);
}

TEST_CASE("jet2 constants match the truncated vector-field bracket") {
    for (std::size_t n = 1; n <= 3; ++n) {
        auto g = jet2_algebra(n);
        const std::size_t d = g.dim();
        REQUIRE(d == jet2_dim(n));
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                CHECK(jet2_oracle_bracket(n, unit_vec(d, j), unit_vec(d, k)) == g.basis_bracket(j, k));
    }
}

TEST_CASE("jet2(1) bracket by hand") {
    // X = x, Y = x^2: DY X - DX Y = x^2, negated.
    auto g = jet2_algebra(1);
    CHECK(g.basis_bracket(0, 1) == QVec{0, -1});
    CHECK(g.basis_bracket(1, 0) == QVec{0, 1});
    CHECK(is_zero(g.basis_bracket(1, 1)));
}

TEST_CASE("jet2 coordinates round trip") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 3; ++n)
        for (int t = 0; t < 10; ++t) {
            QVec c = random_qvec(rng, jet2_dim(n));
            CHECK(jet2_to_coords(jet2_from_coords(n, c)) == c);
        }
}

TEST_CASE("jet2 algebras are Lie") {
    CHECK(is_lie(jet2_algebra(1)));
    CHECK(is_lie(jet2_algebra(2)));
}

TEST_CASE("second-order Pfaffian data") {
    auto pf = second_order_pfaffian(2);
    CHECK_NOTHROW(check_equivariance(pf));
    CHECK(pf.v_dim() == 6);
    CHECK(is_representation(pf.rho));
    Subspace h = symbol_ideal(pf);
    CHECK(h.dim() == 6);
    for (const auto& v : h.basis())
        for (std::size_t a = 0; a < 4; ++a) CHECK(v[a] == 0);
    auto W = image_W(pf);
    CHECK(W.W.dim() == 4);
    CHECK(W.g_mod_h.algebra.dim() == 4);
    CHECK(rank(W.iso) == 4);
}

TEST_CASE("non-equivariant coefficient map is reported") {
    auto pf = second_order_pfaffian(1);
    pf.l(1, 1) = 1;
    CHECK_THROWS_AS(check_equivariance(pf), EquivarianceViolated);
    CHECK_THROWS_AS(symbol_ideal(pf), EquivarianceViolated);
}

TEST_CASE("reduction tower of second-order frames") {
    for (std::size_t n = 1; n <= 3; ++n) {
        auto tower = reduction_tower(second_order_pfaffian(n));
        CHECK(tower.order == 2);
        REQUIRE(tower.stages.size() == 2);
        CHECK(tower.stages[0].g.dim() == jet2_dim(n));
        CHECK(tower.stages[1].g.dim() == n * n);
        CHECK(tower.stages[1].W.dim() == 0);
    }
}

TEST_CASE("reduction towers of first-order data") {
    // Frame bundle data: gl(2) on R^2 with l = 0 acts faithfully, so the tower stops at once.
    auto g = gl(2);
    auto frames = reduction_tower(PfaffianGroupData{g.algebra, g.standard_rep(), QMatrix(2, 4)});
    CHECK(frames.order == 1);
    CHECK(frames.stages[0].kernel.dim() == 0);
    // l = id: W = V, everything is killed and the second stage is trivial.
    auto full = reduction_tower(PfaffianGroupData{g.algebra, adjoint_rep(g.algebra), QMatrix::identity(4)});
    REQUIRE(full.order == 2);
    CHECK(full.stages[0].kernel.dim() == 4);
    CHECK(full.stages[1].g.dim() == 0);
}

TEST_CASE("exact sequences") {
    auto m = semidirect_extension(heisenberg(1), adjoint_rep(heisenberg(1)), heisenberg(1));
    auto rep = check_exact(m.cte.ext);
    CHECK(rep.ok());
    auto broken = m.cte.ext;
    broken.p(0, 0) = 1;  // p no longer kills i(h)
    auto r2 = check_exact(broken);
    CHECK_FALSE(r2.exact);
    CHECK_FALSE(r2.ok());
    CHECK_FALSE(r2.failures.empty());
}

TEST_CASE("complete_splitting from a shifted right splitting") {
    std::mt19937_64 rng(5);
    auto g = gl(2);
    auto m = semidirect_extension(g.algebra, g.standard_rep(), AlmostLieAlgebra::abelian(2));
    const auto& ext = m.cte.ext;
    QMatrix A = random_matrix(rng, 4, 2);
    QMatrix r(6, 2);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = A(i, j);
    r(4, 0) = r(5, 1) = 1;
    auto sp = complete_splitting(ext, RightSplitting{r});
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) CHECK(sp.l(i, j) == (i == j ? 1 : 0));
        for (std::size_t j = 0; j < 2; ++j) CHECK(sp.l(i, 4 + j) == -A(i, j));
    }
    auto back = complete_splitting(ext, LeftSplitting{sp.l});
    CHECK(is_splitting_pair(ext, back));
    CHECK(back.r == r);
}

TEST_CASE("complete_splitting rejects non-splittings") {
    auto m = semidirect_extension(heisenberg(1), adjoint_rep(heisenberg(1)), AlmostLieAlgebra::abelian(3));
    QMatrix bad = m.splitting.l;
    bad(0, 0) = 2;
    CHECK_THROWS_AS(complete_splitting(m.cte.ext, LeftSplitting{bad}), NotASplitting);
    CHECK_THROWS_AS(complete_splitting(m.cte.ext, LeftSplitting{QMatrix(2, 6)}), NotASplitting);
    QMatrix badr = m.splitting.r;
    badr(3, 0) = 0;
    CHECK_THROWS_AS(complete_splitting(m.cte.ext, RightSplitting{badr}), NotASplitting);
}

TEST_CASE("sp(1,1) |x hei3 is reductive but not Lie") {
    auto s = sp_k1(1);
    auto m = semidirect_extension(s.algebra, s.standard_rep(), heisenberg(1));
    CHECK(check_exact(m.cte.ext).ok());
    CHECK(check_reductive(m.cte, m.splitting).ok());
    CHECK(induced_quotient_bracket(m.cte, m.splitting) == heisenberg(1));
    CHECK(semidirect_iso_check(m.cte, m.splitting).ok);
    CHECK_FALSE(is_lie(m.cte.z_alg));
}

TEST_CASE("perturbed left splitting breaks reductivity") {
    auto s = sp_k1(1);
    auto m = semidirect_extension(s.algebra, s.standard_rep(), heisenberg(1));
    QMatrix l = m.splitting.l;
    l(5, 8) = 1;
    auto sp = complete_splitting(m.cte.ext, LeftSplitting{l});
    auto rep = check_reductive(m.cte, sp);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.morphism);
    REQUIRE(rep.morphism_witness.has_value());
    auto [a, b] = *rep.morphism_witness;
    QVec lhs = sp.l * m.cte.z_alg.basis_bracket(a, b);
    QVec rhs = bracket(m.cte.h_alg, sp.l.col(a), sp.l.col(b));
    CHECK(lhs != rhs);
}

TEST_CASE("i must be a bracket morphism") {
    auto m = semidirect_extension(heisenberg(1), adjoint_rep(heisenberg(1)), AlmostLieAlgebra::abelian(3));
    auto cte = m.cte;
    cte.h_alg = AlmostLieAlgebra::abelian(3);
    CHECK_THROWS_AS(validate_cartan_type(cte), NotAMorphism);
}

TEST_CASE("property: random h |x k round trips through a change of basis") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dh = dim(rng), dk = dim(rng);
        auto h = random_almost_lie(rng, dh, "h");
        auto k = random_almost_lie(rng, dk, "k");
        std::vector<QMatrix> mats;
        for (std::size_t a = 0; a < dh; ++a) mats.push_back(random_matrix(rng, dk, dk));
        LinearRep rep(h, dk, mats);
        auto m = change_z_basis(semidirect_extension(h, rep, k), random_invertible(rng, dh + dk));
        CHECK(is_splitting_pair(m.cte.ext, m.splitting));
        CHECK(check_reductive(m.cte, m.splitting).ok());
        CHECK(induced_quotient_bracket(m.cte, m.splitting).structure_constants() == k.structure_constants());
        CHECK(semidirect_iso_check(m.cte, m.splitting).ok);
        CHECK(h_action_on_V(m.cte).matrices == mats);
    }
}

TEST_CASE("second-order models are reductive") {
    for (std::size_t n = 1; n <= 2; ++n) {
        auto som = second_order_model(n);
        CHECK(som.n == n);
        CHECK(som.g1.dim() == n * n);
        CHECK(som.model.cte.h_alg.dim() == n * n * (n + 1) / 2);
        CHECK(check_exact(som.model.cte.ext).ok());
        CHECK(check_reductive(som.model.cte, som.model.splitting).ok());
        CHECK(semidirect_iso_check(som.model.cte, som.model.splitting).ok);
    }
}

TEST_CASE("second-order model over a subalgebra") {
    // g1 = so(2) in gl(2): prolongation is trivial.
    Subspace so2(4, {QVec{0, 1, -1, 0}});
    auto som = second_order_model(2, so2);
    CHECK(som.g1.dim() == 1);
    CHECK(som.model.cte.h_alg.dim() == 0);
    Subspace bad(4, {QVec{0, 1, 0, 0}, QVec{0, 0, 1, 0}});
    CHECK_THROWS(second_order_model(2, bad));
}
