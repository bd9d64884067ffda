#include "cartanlab/errors.hpp"
#include "cartanlab/groupoid.hpp"

#include <doctest.h>

#include <random>

using namespace cartanlab;

namespace {

// Independent model of the Heisenberg pair groupoid on R^3, with its own group law and differences.
namespace oracle {

using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;

V3 mul(const V3& p, const V3& q) { return {p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]}; }
V3 inv(const V3& p) { return {-p[0], -p[1], -p[2] + p[0] * p[1]}; }
V3 phi(const V3& y, const V3& x) { return mul(y, inv(x)); }

template <class F>
M3 jac(F f, const V3& p, double h = 1e-5) {
    M3 J;
    for (int j = 0; j < 3; ++j) {
        V3 e = V3::Zero();
        e[j] = h;
        J.col(j) = (f(V3(p + e)) - f(V3(p - e))) / (2 * h);
    }
    return J;
}

V3 omega(const V3& k, const V3& x, const M3& A, const V3& v1, const V3& v2) {
    const V3 x0 = V3::Zero();
    V3 kx = mul(k, x);
    V3 dm = jac([&](const V3& kk) { return mul(kk, x); }, k) * v1 + jac([&](const V3& xx) { return mul(k, xx); }, x) * v2;
    V3 a = phi(kx, x0), b = inv(phi(x, x0));
    M3 At = jac([&](const V3& xx) { return mul(a, xx); }, x0) * A * jac([&](const V3& xx) { return mul(b, xx); }, x);
    return jac([&](const V3& yy) { return phi(yy, x); }, kx) * (dm - At * v2);
}

// Value identification T_k K -> E_{kx} through the action map and the divisor at x0.
V3 iota(const V3& k, const V3& x, const V3& v) {
    V3 w = jac([&](const V3& kk) { return mul(kk, x); }, k) * v;
    return jac([&](const V3& yy) { return phi(yy, V3::Zero()); }, mul(k, x)) * w;
}

V3 abar(const V3& k, const V3& x, const M3& A, const V3& v) {
    const V3 x0 = V3::Zero();
    V3 y = mul(k, x);
    M3 At = jac([&](const V3& xx) { return mul(phi(y, x0), xx); }, x0) * A *
            jac([&](const V3& xx) { return mul(inv(phi(x, x0)), xx); }, x);
    return jac([&](const V3& yy) { return phi(yy, x0); }, y) * At *
           jac([&](const V3& kk) { return mul(kk, x0); }, phi(x, x0)) * v;
}

}  // namespace oracle

Vec rvec(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    Vec v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng);
    return v;
}

double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("divisor examples") {
    auto tr = FreeTransitiveAction::translations(2);
    Vec y(2), x(2);
    y << 3, 1;
    x << 1, -1;
    CHECK(maxabs(tr.divisor(y, x) - Vec::Constant(2, 2.0)) == 0);
    auto he = FreeTransitiveAction::heisenberg(1);
    Vec a(3), b(3);
    a << 1, 2, 3;
    b << -1, 4, 0.5;
    Vec expect(3);
    expect << 0, 6, 3.5 + 1 * 4;
    CHECK(maxabs(he.mul(a, b) - expect) == 0);
    CHECK(maxabs(he.mul(a, he.inv(a))) == 0);
    CHECK(maxabs(he.act(he.divisor(a, b), b) - a) < 1e-14);
    CHECK(he.dim() == 3);
    CHECK(FreeTransitiveAction::heisenberg(2).dim() == 5);
    CHECK_THROWS_AS(FreeTransitiveAction::translations(0), DimensionMismatch);
    CHECK_THROWS_AS(he.mul(a, Vec::Zero(2)), DimensionMismatch);
}

TEST_CASE("divisor identities and groupoid axioms") {
    for (const auto& act : {FreeTransitiveAction::translations(1), FreeTransitiveAction::translations(3),
                            FreeTransitiveAction::heisenberg(1), FreeTransitiveAction::heisenberg(2)}) {
        CHECK(divisor_identity_residual(act, 200, 1) <= 1e-12);
        CHECK(groupoid_axiom_residual(act, 100, 2) <= 1e-12);
    }
}

TEST_CASE("composition") {
    auto he = FreeTransitiveAction::heisenberg(1);
    std::mt19937_64 rng(3);
    GroupoidArrow a1{rvec(rng, 3), rvec(rng, 3), random_isotropy(he, rng)};
    GroupoidArrow a2{rvec(rng, 3), target(he, a1), random_isotropy(he, rng)};
    auto c = compose(he, a2, a1);
    CHECK(maxabs(source(c) - a1.x) == 0);
    CHECK(maxabs(target(he, c) - target(he, a2)) < 1e-12);
    CHECK(maxabs(c.A - a2.A * a1.A) == 0);
    GroupoidArrow off = a2;
    off.x(0) += 1e-3;
    CHECK_THROWS_AS(compose(he, off, a1), NonComposable);
    auto u = compose(he, unit_arrow(he, target(he, a1)), a1);
    CHECK(maxabs(u.k - a1.k) < 1e-14);
    auto back = compose(he, inverse_arrow(he, a1), a1);
    CHECK(maxabs(back.k) < 1e-12);
    CHECK(maxabs(back.A - Mat::Identity(3, 3)) < 1e-12);
    GroupoidArrow sing = a1;
    sing.A.setZero();
    CHECK_THROWS_AS(inverse_arrow(he, sing), SingularDifferential);
}

TEST_CASE("omega for translations") {
    auto tr = FreeTransitiveAction::translations(2);
    Mat A(2, 2);
    A << 2, 1, 0, 1;
    GroupoidArrow a{Vec::Constant(2, 0.5), Vec::Constant(2, -0.25), A};
    Vec v1(2), v2(2);
    v1 << 1, 2;
    v2 << -1, 3;
    Vec w = pfaffian_omega(tr, a, ArrowTangent{v1, v2, Mat::Zero(2, 2)});
    CHECK(maxabs(w - (v1 + v2 - A * v2)) < 1e-14);
    GroupoidArrow id{a.k, a.x, Mat::Identity(2, 2)};
    CHECK(maxabs(pfaffian_omega(tr, id, ArrowTangent{Vec::Zero(2), v2, Mat::Zero(2, 2)})) == 0);
}

TEST_CASE("omega agrees with the independent Heisenberg oracle") {
    auto he = FreeTransitiveAction::heisenberg(1);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        Vec k = rvec(rng, 3), x = rvec(rng, 3), v1 = rvec(rng, 3), v2 = rvec(rng, 3);
        Mat A = random_isotropy(he, rng);
        Vec lib = pfaffian_omega(he, GroupoidArrow{k, x, A}, ArrowTangent{v1, v2, Mat::Zero(3, 3)});
        oracle::V3 ref = oracle::omega(k, x, A, v1, v2);
        CHECK(maxabs(lib - Vec(ref)) < 1e-6);
    }
}

TEST_CASE("oracle: multiplicativity holds in the Heisenberg model") {
    using namespace oracle;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    auto r3 = [&] { return V3(nd(rng), nd(rng), nd(rng)); };
    auto rA = [&] {
        M3 m;
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = 0.3 * nd(rng);
        return M3(M3::Identity() + m);
    };
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        V3 k1 = r3(), k2 = r3(), x = r3(), u1 = r3(), u2 = r3(), w1 = r3();
        M3 A1 = rA(), A2 = rA();
        V3 w2 = jac([&](const V3& kk) { return mul(kk, x); }, k1) * u1 + jac([&](const V3& xx) { return mul(k1, xx); }, x) * u2;
        V3 dmul = jac([&](const V3& kk) { return mul(kk, k1); }, k2) * w1 + jac([&](const V3& kk) { return mul(k2, kk); }, k1) * u1;
        V3 y = mul(k1, x), k21 = mul(k2, k1);
        V3 lhs = iota(k21, x, omega(k21, x, A2 * A1, dmul, u2));
        V3 rhs = iota(k2, y, omega(k2, y, A2, w1, w2)) + abar(k2, y, A2, iota(k1, x, omega(k1, x, A1, u1, u2)));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("library multiplicativity defect") {
    auto tr = multiplicativity_residual(FreeTransitiveAction::translations(2), 200, 4, 7);
    CHECK(tr.max_defect <= 1e-5);
    CHECK(tr.pairs == 200);
    CHECK(tr.samples == 800);
    auto he = multiplicativity_residual(FreeTransitiveAction::heisenberg(1), 200, 4, 7);
    CHECK(he.max_defect <= 1e-5);
    auto he_id = multiplicativity_residual(FreeTransitiveAction::heisenberg(1), 50, 2, 9, true);
    CHECK(he_id.max_defect <= 1e-5);
    auto again = multiplicativity_residual(FreeTransitiveAction::heisenberg(1), 200, 4, 7);
    CHECK(again.max_defect == he.max_defect);
    CHECK(again.max_literal_defect == he.max_literal_defect);
}

TEST_CASE("value transport and arrow action for translations") {
    auto tr = FreeTransitiveAction::translations(3);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
        GroupoidArrow a{rvec(rng, 3), rvec(rng, 3), random_isotropy(tr, rng)};
        CHECK(maxabs(value_transport(tr, a) - Mat::Identity(3, 3)) == 0);
        CHECK(maxabs(arrow_action_matrix(tr, a) - a.A) == 0);
        CHECK(maxabs(conjugated_matrix(tr, a) - a.A) == 0);
    }
}

TEST_CASE("constant bisections are holonomic") {
    std::mt19937_64 rng(8);
    for (const auto& act : {FreeTransitiveAction::translations(2), FreeTransitiveAction::heisenberg(1)}) {
        std::vector<Vec> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(rvec(rng, act.dim()));
        for (int t = 0; t < 20; ++t) CHECK(holonomic_bisection_residual(act, rvec(rng, act.dim()), pts) <= 1e-6);
    }
}

TEST_CASE("random isotropy data") {
    std::mt19937_64 rng(9);
    auto he = FreeTransitiveAction::heisenberg(1);
    Mat J(2, 2);
    J << 0, 1, -1, 0;
    for (int t = 0; t < 20; ++t) {
        Mat A = random_isotropy(he, rng);
        CHECK(std::abs(A(2, 0)) < 1e-12);
        CHECK(std::abs(A(2, 1)) < 1e-12);
        Mat a = A.topLeftCorner(2, 2);
        CHECK(maxabs(a.transpose() * J * a - J) < 1e-10);
    }
    auto tr = FreeTransitiveAction::translations(3);
    for (int t = 0; t < 20; ++t) CHECK(std::abs(random_isotropy(tr, rng).determinant()) > 0.1);
}

TEST_CASE("isotropy action is a group action") {
    auto he = FreeTransitiveAction::heisenberg(1);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        Mat A = random_isotropy(he, rng), B = random_isotropy(he, rng);
        Vec k = rvec(rng, 3);
        CHECK(maxabs(isotropy_action(he, A * B, k) - isotropy_action(he, A, isotropy_action(he, B, k))) < 1e-12);
        CHECK(maxabs(isotropy_action(he, Mat::Identity(3, 3), k) - k) < 1e-14);
    }
    CHECK_THROWS_AS(isotropy_action(he, Mat::Zero(3, 3), Vec::Zero(3)), SingularDifferential);
    CHECK_THROWS_AS(isotropy_action(he, Mat::Identity(2, 2), Vec::Zero(3)), DimensionMismatch);
}

TEST_CASE("infinitesimal data") {
    auto he = FreeTransitiveAction::heisenberg(1);
    auto sc = lie_algebra_constants(he);
    auto exact = heisenberg(1).structure_constants();
    for (std::size_t i = 0; i < sc.size(); ++i) CHECK(sc[i] == doctest::Approx(to_double(exact[i])).epsilon(1e-6));
    for (double v : lie_algebra_constants(FreeTransitiveAction::translations(2))) CHECK(std::abs(v) < 1e-9);

    auto g = gl(2);
    std::vector<Mat> basis;
    for (const auto& m : g.basis) basis.push_back((Mat(2, 2) << to_double(m(0, 0)), to_double(m(0, 1)),
                                                   to_double(m(1, 0)), to_double(m(1, 1))).finished());
    auto rep = infinitesimal_rep(FreeTransitiveAction::translations(2), basis);
    for (std::size_t a = 0; a < 4; ++a) CHECK(maxabs(rep[a] - basis[a]) < 1e-6);
}

TEST_CASE("snap_rational") {
    CHECK(*snap_rational(0.5000000001) == Rational(1) / 2);
    CHECK(*snap_rational(-0.33333333) == Rational(-1) / 3);
    CHECK(*snap_rational(2.0) == Rational(2));
    CHECK(*snap_rational(1e-9) == Rational(0));
    CHECK_FALSE(snap_rational(3.14159265).has_value());
    CHECK_FALSE(snap_rational(std::nan("")).has_value());
    CHECK(*snap_rational(0.0625) == Rational(1) / 16);
    CHECK_FALSE(snap_rational(1.0 / 17).has_value());
}

TEST_CASE("reductive extension from the Heisenberg action") {
    auto s = sp_k1(1);
    auto b = build_reductive_extension(FreeTransitiveAction::heisenberg(1), s.algebra, s.basis);
    REQUIRE(b.exact);
    REQUIRE(b.kfrak.has_value());
    CHECK(b.kfrak->structure_constants() == heisenberg(1).structure_constants());
    REQUIRE(b.rep.has_value());
    CHECK(b.rep->matrices == s.basis);
    REQUIRE(b.check.has_value());
    CHECK(b.check->ok());
    CHECK(b.max_snap_error < 1e-6);

    auto g = gl(2);
    auto t = build_reductive_extension(FreeTransitiveAction::translations(2), g.algebra, g.basis);
    REQUIRE(t.exact);
    CHECK(*t.kfrak == AlmostLieAlgebra::abelian(2));
    CHECK(t.check->ok());
    CHECK(is_lie(t.model->cte.z_alg));
}
