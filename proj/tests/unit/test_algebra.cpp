#include "helpers.hpp"

#include "cartanlab/errors.hpp"

#include <doctest.h>

using namespace cartanlab;
using namespace testing_support;

namespace {

// Coordinates of commutators by least squares over doubles, independent of the exact solver.
void check_against_matrix_oracle(const MatrixAlgebra& ma) {
    const std::size_t d = ma.algebra.dim();
    const std::size_t n = ma.size;
    Eigen::MatrixXd B(n * n, d);
    std::vector<Eigen::MatrixXd> mats;
    for (std::size_t a = 0; a < d; ++a) {
        mats.push_back(numeric(ma.basis[a]));
        B.col(static_cast<Eigen::Index>(a)) = Eigen::Map<const Eigen::VectorXd>(mats.back().data(), n * n);
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            Eigen::MatrixXd c = mats[j] * mats[k] - mats[k] * mats[j];
            Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
            Eigen::VectorXd x = B.colPivHouseholderQr().solve(rhs);
            CHECK((B * x - rhs).norm() < 1e-10);
            for (std::size_t i = 0; i < d; ++i)
                CHECK(to_double(ma.algebra.d(i, j, k)) == doctest::Approx(x(static_cast<Eigen::Index>(i))).epsilon(1e-10));
        }
}

// Heisenberg group law (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b').
std::array<double, 3> hmul(std::array<double, 3> p, std::array<double, 3> q) {
    return {p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]};
}
std::array<double, 3> hinv(std::array<double, 3> p) { return {-p[0], -p[1], -p[2] + p[0] * p[1]}; }

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-6/4") == Rational(-3) / 2);
    CHECK(parse_rational("0.25") == Rational(1) / 4);
    CHECK(parse_rational("-1.5e-2") == Rational(-3) / 200);
    CHECK(to_string(Rational(-3) / 2) == "-3/2");
    CHECK(to_string(Rational(4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
}

TEST_CASE("kernel of linear maps") {
    QMatrix z(3, 3);
    CHECK(kernel_of_linear_map(z).dim() == 3);
    CHECK(kernel_of_linear_map(QMatrix::identity(3)).dim() == 0);
    QMatrix r1 = QMatrix::from_rows({{1, 1}, {1, 1}}, 2);
    Subspace k = kernel_of_linear_map(r1);
    CHECK(k.dim() == 1);
    CHECK(k.contains(QVec{1, -1}));
}

TEST_CASE("exact solve and inverse") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        QMatrix a(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) = random_rational(rng);
        auto inv = inverse(a);
        if (!inv) {
            CHECK(rank(a) < 4);
            continue;
        }
        CHECK(a * *inv == QMatrix::identity(4));
    }
    CHECK_FALSE(solve(QMatrix::from_rows({{1, 1}, {1, 1}}, 2), QVec{1, 2}).has_value());
}

TEST_CASE("subspace rejects dependent bases") {
    CHECK_THROWS_AS(Subspace(2, {QVec{1, 2}, QVec{2, 4}}), DimensionMismatch);
    Subspace s = Subspace::span(3, {QVec{1, 0, 0}, QVec{2, 0, 0}, QVec{0, 1, 0}});
    CHECK(s.dim() == 2);
    CHECK(s.standard_complement().size() == 1);
}

TEST_CASE("bracket examples") {
    auto ab = AlmostLieAlgebra::abelian(3);
    CHECK(is_zero(bracket(ab, unit_vec(3, 0), unit_vec(3, 1))));
    auto h = heisenberg(1);
    CHECK(bracket(h, unit_vec(3, 0), unit_vec(3, 1)) == unit_vec(3, 2));
    auto g = gl(2);
    CHECK(bracket(g.algebra, unit_vec(4, 0), unit_vec(4, 1)) == unit_vec(4, 1));
    CHECK_THROWS_AS(bracket(h, unit_vec(2, 0), unit_vec(3, 1)), DimensionMismatch);
}

TEST_CASE("heisenberg constants match the differentiated group law") {
    const double s = 1e-4;
    auto h = heisenberg(1);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            auto comm = [&](double a, double b) {
                std::array<double, 3> x{}, y{};
                x[j] = a;
                y[k] = b;
                return hmul(hmul(hmul(x, y), hinv(x)), hinv(y));
            };
            for (std::size_t i = 0; i < 3; ++i) {
                double v = (comm(s, s)[i] - comm(-s, s)[i] - comm(s, -s)[i] + comm(-s, -s)[i]) / (4 * s * s);
                CHECK(to_double(h.d(i, j, k)) == doctest::Approx(v).epsilon(1e-6));
            }
        }
}

TEST_CASE("matrix algebras agree with the commutator oracle") {
    for (std::size_t n = 1; n <= 3; ++n) check_against_matrix_oracle(gl(n));
    for (std::size_t n = 2; n <= 3; ++n) {
        check_against_matrix_oracle(sl(n));
        check_against_matrix_oracle(so(n));
    }
    check_against_matrix_oracle(sp(1));
    check_against_matrix_oracle(sp(2));
    check_against_matrix_oracle(sp_k1(1));
}

TEST_CASE("builtin dimensions") {
    CHECK(builtin_algebra("sp(1,1)").dim() == 6);
    CHECK(builtin_algebra("sp(2)").dim() == 10);
    CHECK(builtin_algebra("hei(5)").dim() == 5);
    CHECK(builtin_algebra("jet2(2)").dim() == 10);
    CHECK(builtin_algebra("so(3)").dim() == 3);
    CHECK_THROWS_AS(builtin_algebra("hei(4)"), InputError);
    CHECK_THROWS_AS(builtin_algebra("foo(2)"), InputError);
    CHECK_THROWS_AS(builtin_algebra("gl(99)"), InputError);
}

TEST_CASE("antisymmetry is enforced at construction") {
    std::vector<Rational> sc(8, Rational(0));
    sc[(0 * 2 + 0) * 2 + 1] = 1;  // [e1,e2] = e1 without the mirrored entry
    CHECK_THROWS_AS(AlmostLieAlgebra("bad", {"e1", "e2"}, sc), NotAntisymmetric);
}

TEST_CASE("jacobiator and is_lie") {
    std::mt19937_64 rng(1);
    auto ab = AlmostLieAlgebra::abelian(4);
    for (int t = 0; t < 5; ++t)
        CHECK(is_zero(jacobiator(ab, random_qvec(rng, 4), random_qvec(rng, 4), random_qvec(rng, 4))));
    auto h = heisenberg(1);
    CHECK(is_zero(jacobiator(h, unit_vec(3, 0), unit_vec(3, 1), unit_vec(3, 2))));
    CHECK(is_lie(ab));
    CHECK(is_lie(h));
    auto sp11 = sp_k1(1);
    auto z = semidirect(sp11.algebra, sp11.standard_rep(), h);
    CHECK_FALSE(is_lie(z));
    auto w = jacobi_witness(z);
    REQUIRE(w.has_value());
    // Brute force over all triples: at least one non-zero jacobiator, and the witness is one of them.
    const std::size_t d = z.dim();
    bool found = false;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c)
                found = found || !is_zero(jacobiator(z, unit_vec(d, a), unit_vec(d, b), unit_vec(d, c)));
    CHECK(found);
    CHECK_FALSE(is_zero(jacobiator(z, unit_vec(d, (*w)[0]), unit_vec(d, (*w)[1]), unit_vec(d, (*w)[2]))));
}

TEST_CASE("acceptance-scale Lie checks") {
    CHECK(is_lie(sp_k1(1).algebra));
    for (std::size_t n = 1; n <= 3; ++n) CHECK(is_lie(gl(n).algebra));
    for (std::size_t n = 2; n <= 3; ++n) CHECK(is_lie(so(n).algebra));
}

TEST_CASE("ideals") {
    auto h = heisenberg(1);
    CHECK(is_ideal(h, Subspace(3, {unit_vec(3, 2)})));
    CHECK_FALSE(is_ideal(h, Subspace(3, {unit_vec(3, 0)})));
    CHECK(is_ideal(h, Subspace::whole(3)));
    CHECK_THROWS_AS(is_ideal(h, Subspace::whole(2)), DimensionMismatch);
}

TEST_CASE("derivation actions") {
    std::mt19937_64 rng(2);
    auto ab = AlmostLieAlgebra::abelian(3);
    auto g = gl(3);
    CHECK(is_derivation_action(g.standard_rep(), ab));
    auto sp11 = sp_k1(1);
    CHECK_FALSE(is_derivation_action(sp11.standard_rep(), heisenberg(1)));
    auto w = derivation_witness(sp11.standard_rep(), heisenberg(1));
    REQUIRE(w.has_value());
    // Any rep on an abelian algebra acts by derivations.
    std::vector<QMatrix> mats;
    for (std::size_t a = 0; a < 2; ++a) {
        QMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = random_rational(rng);
        mats.push_back(m);
    }
    CHECK(is_derivation_action(LinearRep(AlmostLieAlgebra::abelian(2), 3, mats), ab));
}

TEST_CASE("semidirect products") {
    auto h = heisenberg(1);
    auto zero = AlmostLieAlgebra::abelian(0);
    auto z0 = semidirect(zero, LinearRep(zero, 3, {}), h);
    CHECK(z0.structure_constants() == h.structure_constants());
    for (std::size_t n = 1; n <= 3; ++n) {
        auto g = gl(n);
        CHECK(is_lie(semidirect(g.algebra, g.standard_rep(), AlmostLieAlgebra::abelian(n))));
    }
    // [(alpha,0),(0,w)] = (0, alpha(w))
    auto g = gl(2);
    auto z = semidirect(g.algebra, g.standard_rep(), AlmostLieAlgebra::abelian(2));
    QVec a = zero_vec(6), w = zero_vec(6);
    a[1] = 1;  // E12
    w[5] = 1;  // second basis vector of R^2
    QVec expect = zero_vec(6);
    expect[4] = 1;
    CHECK(bracket(z, a, w) == expect);
}

TEST_CASE("property: semidirect of Lie data with a derivation action is Lie") {
    struct Case {
        AlmostLieAlgebra g;
        LinearRep rep;
        AlmostLieAlgebra k;
    };
    std::vector<Case> cases;
    for (std::size_t n = 1; n <= 3; ++n) cases.push_back({gl(n).algebra, gl(n).standard_rep(), AlmostLieAlgebra::abelian(n)});
    cases.push_back({so(3).algebra, so(3).standard_rep(), AlmostLieAlgebra::abelian(3)});
    cases.push_back({sl(2).algebra, adjoint_rep(sl(2).algebra), sl(2).algebra});
    cases.push_back({heisenberg(1), adjoint_rep(heisenberg(1)), heisenberg(1)});
    cases.push_back({sp(1).algebra, sp(1).standard_rep(), AlmostLieAlgebra::abelian(2)});
    for (const auto& c : cases) {
        REQUIRE(is_lie(c.g));
        REQUIRE(is_lie(c.k));
        REQUIRE(is_derivation_action(c.rep, c.k));
        CHECK(is_lie(semidirect(c.g, c.rep, c.k)));
    }
}

TEST_CASE("property: brackets are antisymmetric on random vectors") {
    std::mt19937_64 rng(7);
    std::vector<AlmostLieAlgebra> algs{heisenberg(1), heisenberg(2), gl(3).algebra, sp_k1(1).algebra,
                                       semidirect(sp_k1(1).algebra, sp_k1(1).standard_rep(), heisenberg(1))};
    for (int t = 0; t < 5; ++t) algs.push_back(random_almost_lie(rng, 4, "rnd"));
    for (const auto& a : algs)
        for (int t = 0; t < 10; ++t) {
            QVec u = random_qvec(rng, a.dim()), v = random_qvec(rng, a.dim());
            CHECK(bracket(a, u, v) == scale(Rational(-1), bracket(a, v, u)));
        }
}

TEST_CASE("adjoint representation") {
    CHECK(adjoint_rep(AlmostLieAlgebra::abelian(3)).matrices[0].is_zero());
    auto h = heisenberg(1);
    auto ad = adjoint_rep(h);
    CHECK(ad.act(unit_vec(3, 0), unit_vec(3, 1)) == unit_vec(3, 2));
    CHECK(ad.act(unit_vec(3, 1), unit_vec(3, 2)) == zero_vec(3));
    // gl(2): ad is the commutator rep.
    auto g = gl(2);
    auto adg = adjoint_rep(g.algebra);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
            QMatrix c = commutator(g.basis[j], g.basis[k]);
            QVec flat{c(0, 0), c(0, 1), c(1, 0), c(1, 1)};
            CHECK(adg.act(unit_vec(4, j), unit_vec(4, k)) == flat);
        }
    for (const auto& a : {heisenberg(1), gl(3).algebra, so(3).algebra, sp_k1(1).algebra, builtin_algebra("jet2(2)")})
        CHECK(is_representation(adjoint_rep(a)));
}

TEST_CASE("quotients") {
    auto h = heisenberg(1);
    auto q = quotient_algebra(h, Subspace(3, {unit_vec(3, 2)}));
    CHECK(q.dim() == 2);
    CHECK(q == AlmostLieAlgebra::abelian(2));
    CHECK(quotient_algebra(h, Subspace::whole(3)).dim() == 0);
    auto g = gl(2);
    auto s = sl(2);
    std::vector<QVec> sl_in_gl;
    for (const auto& m : s.basis) sl_in_gl.push_back(QVec{m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
    Subspace sl_sub(4, sl_in_gl);
    REQUIRE(is_ideal(g.algebra, sl_sub));
    auto qg = quotient_algebra(g.algebra, sl_sub);
    CHECK(qg == AlmostLieAlgebra::abelian(1));
    CHECK_THROWS_AS(quotient_algebra(h, Subspace(3, {unit_vec(3, 0)})), NotAnIdeal);
}

TEST_CASE("property: quotient is complement independent") {
    // Recompute gl(3)/sl(3) and hei5/centre with a shifted complement by hand.
    auto h = heisenberg(2);
    Subspace centre(5, {unit_vec(5, 4)});
    auto q1 = quotient(h, centre);
    std::vector<QVec> shifted;
    for (const auto& c : q1.complement) shifted.push_back(c + unit_vec(5, 4));
    // Bracket of shifted representatives, projected, must equal q1's constants.
    for (std::size_t j = 0; j < shifted.size(); ++j)
        for (std::size_t k = 0; k < shifted.size(); ++k) {
            QVec b = q1.projection * bracket(h, shifted[j], shifted[k]);
            CHECK(b == q1.algebra.basis_bracket(j, k));
        }
}
