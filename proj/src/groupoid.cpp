#include "cartanlab/groupoid.hpp"

#include "cartanlab/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <mutex>

namespace cartanlab {

namespace {

Mat to_numeric(const QMatrix& m) {
    Mat r(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return r;
}

Vec unit(std::size_t n, std::size_t j) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(j)) = 1;
    return v;
}

Vec random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng);
    return v;
}

Mat random_mat(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng);
    return m;
}

const std::vector<Mat>& sp_k1_numeric(std::size_t k) {
    static std::mutex mu;
    static std::map<std::size_t, std::vector<Mat>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) {
        std::vector<Mat> mats;
        for (const auto& b : sp_k1(k).basis) mats.push_back(to_numeric(b));
        it = cache.emplace(k, std::move(mats)).first;
    }
    return it->second;
}

}  // namespace

FreeTransitiveAction FreeTransitiveAction::translations(std::size_t n) {
    if (n == 0) throw DimensionMismatch("translations need n >= 1");
    FreeTransitiveAction a;
    a.kind_ = ModelKind::Translations;
    a.param_ = n;
    a.dim_ = n;
    return a;
}

FreeTransitiveAction FreeTransitiveAction::heisenberg(std::size_t k) {
    if (k == 0) throw DimensionMismatch("Heisenberg group needs k >= 1");
    FreeTransitiveAction a;
    a.kind_ = ModelKind::Heisenberg;
    a.param_ = k;
    a.dim_ = 2 * k + 1;
    return a;
}

std::string FreeTransitiveAction::name() const {
    if (kind_ == ModelKind::Translations) return "translations(" + std::to_string(param_) + ")";
    return "heisenberg(" + std::to_string(param_) + ")";
}

Vec FreeTransitiveAction::mul(const Vec& a, const Vec& b) const {
    if (static_cast<std::size_t>(a.size()) != dim_ || static_cast<std::size_t>(b.size()) != dim_)
        throw DimensionMismatch("group element has wrong dimension");
    Vec r = a + b;
    if (kind_ == ModelKind::Heisenberg) {
        const auto k = static_cast<Eigen::Index>(param_);
        r(2 * k) += a.head(k).dot(b.segment(k, k));
    }
    return r;
}

Vec FreeTransitiveAction::inv(const Vec& a) const {
    if (static_cast<std::size_t>(a.size()) != dim_) throw DimensionMismatch("group element has wrong dimension");
    Vec r = -a;
    if (kind_ == ModelKind::Heisenberg) {
        const auto k = static_cast<Eigen::Index>(param_);
        r(2 * k) += a.head(k).dot(a.segment(k, k));
    }
    return r;
}

Vec FreeTransitiveAction::act(const Vec& k, const Vec& x) const { return mul(k, x); }

Vec FreeTransitiveAction::divisor(const Vec& y, const Vec& x) const { return mul(y, inv(x)); }

Mat FreeTransitiveAction::jacobian(const std::function<Vec(const Vec&)>& f, const Vec& p) const {
    const auto n = p.size();
    if (kind_ == ModelKind::Translations) {
        Vec y = f(p);
        return Mat::Identity(y.size(), n);
    }
    Mat J;
    Vec q = p;
    for (Eigen::Index j = 0; j < n; ++j) {
        q(j) = p(j) + kFdStep;
        Vec plus = f(q);
        q(j) = p(j) - kFdStep;
        Vec minus = f(q);
        q(j) = p(j);
        if (j == 0) J.resize(plus.size(), n);
        J.col(j) = (plus - minus) / (2 * kFdStep);
    }
    return J;
}

Vec FreeTransitiveAction::dm(const Vec& k, const Vec& x, const Vec& v1, const Vec& v2) const {
    Mat dk = jacobian([&](const Vec& kk) { return act(kk, x); }, k);
    Mat dx = jacobian([&](const Vec& xx) { return act(k, xx); }, x);
    return dk * v1 + dx * v2;
}

Vec divisor(const FreeTransitiveAction& act, const Vec& y, const Vec& x) { return act.divisor(y, x); }

Vec source(const GroupoidArrow& a) { return a.x; }

Vec target(const FreeTransitiveAction& act, const GroupoidArrow& a) { return act.act(a.k, a.x); }

GroupoidArrow unit_arrow(const FreeTransitiveAction& act, const Vec& x) {
    const auto n = static_cast<Eigen::Index>(act.dim());
    return GroupoidArrow{act.identity(), x, Mat::Identity(n, n)};
}

GroupoidArrow inverse_arrow(const FreeTransitiveAction& act, const GroupoidArrow& a) {
    Eigen::FullPivLU<Mat> lu(a.A);
    if (!lu.isInvertible()) throw SingularDifferential("isotropy datum is not invertible");
    return GroupoidArrow{act.inv(a.k), target(act, a), lu.inverse()};
}

GroupoidArrow compose(const FreeTransitiveAction& act, const GroupoidArrow& a2, const GroupoidArrow& a1) {
    Vec t1 = target(act, a1);
    const double scale = 1.0 + t1.cwiseAbs().maxCoeff();
    if ((a2.x - t1).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NonComposable("source of the second arrow differs from the target of the first");
    return GroupoidArrow{act.mul(a2.k, a1.k), a1.x, a2.A * a1.A};
}

Mat conjugated_matrix(const FreeTransitiveAction& act, const GroupoidArrow& a) {
    const Vec x0 = act.x0();
    const Vec kx = act.act(a.k, a.x);
    const Vec lead = act.divisor(kx, x0);
    const Vec back = act.inv(act.divisor(a.x, x0));
    Mat dl = act.jacobian([&](const Vec& xx) { return act.act(lead, xx); }, x0);
    Mat db = act.jacobian([&](const Vec& xx) { return act.act(back, xx); }, a.x);
    return dl * a.A * db;
}

Vec pfaffian_omega(const FreeTransitiveAction& act, const GroupoidArrow& a, const ArrowTangent& t) {
    const Vec kx = act.act(a.k, a.x);
    Vec w = act.dm(a.k, a.x, t.v1, t.v2) - conjugated_matrix(act, a) * t.v2;
    Mat dphi = act.jacobian([&](const Vec& yy) { return act.divisor(yy, a.x); }, kx);
    return dphi * w;
}

Mat arrow_action_matrix(const FreeTransitiveAction& act, const GroupoidArrow& a) {
    const Vec x0 = act.x0();
    const Vec kx = act.act(a.k, a.x);
    const Vec pt = act.act(act.divisor(x0, kx), x0);
    const Vec q = act.act(act.divisor(x0, a.x), x0);
    Mat L = act.jacobian([&](const Vec& xx) { return act.divisor(xx, pt); }, x0);
    Mat R = act.jacobian([&](const Vec& kk) { return act.act(kk, q); }, act.divisor(a.x, x0));
    return L * a.A * R;
}

Mat value_transport(const FreeTransitiveAction& act, const GroupoidArrow& a) {
    const Vec x0 = act.x0();
    const Vec c = act.divisor(a.x, x0);
    const Vec lead = act.mul(act.inv(c), act.inv(a.k));
    const Vec tail = act.mul(c, act.divisor(act.act(a.k, a.x), x0));
    return act.jacobian([&](const Vec& z) { return act.mul(act.mul(lead, z), tail); }, a.k);
}

double divisor_identity_residual(const FreeTransitiveAction& act, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = act.dim();
    double worst = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        Vec x = random_vec(n, rng), y = random_vec(n, rng), z = random_vec(n, rng);
        Vec yx = act.divisor(y, x);
        worst = std::max(worst, (act.inv(yx) - act.divisor(x, y)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (act.mul(act.divisor(z, y), yx) - act.divisor(z, x)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (act.act(yx, x) - y).cwiseAbs().maxCoeff());
    }
    return worst;
}

double groupoid_axiom_residual(const FreeTransitiveAction& act, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = act.dim();
    double worst = 0;
    auto dist = [&](const GroupoidArrow& a, const GroupoidArrow& b) {
        return std::max({(a.k - b.k).cwiseAbs().maxCoeff(), (a.x - b.x).cwiseAbs().maxCoeff(),
                         (a.A - b.A).cwiseAbs().maxCoeff()});
    };
    for (std::size_t s = 0; s < samples; ++s) {
        GroupoidArrow a1{random_vec(n, rng), random_vec(n, rng), random_isotropy(act, rng)};
        GroupoidArrow a2{random_vec(n, rng), target(act, a1), random_isotropy(act, rng)};
        GroupoidArrow a3{random_vec(n, rng), target(act, a2), random_isotropy(act, rng)};
        worst = std::max(worst, dist(compose(act, compose(act, a3, a2), a1), compose(act, a3, compose(act, a2, a1))));
        worst = std::max(worst, dist(compose(act, unit_arrow(act, target(act, a1)), a1), a1));
        worst = std::max(worst, dist(compose(act, a1, unit_arrow(act, a1.x)), a1));
        GroupoidArrow inv = inverse_arrow(act, a1);
        worst = std::max(worst, dist(compose(act, inv, a1), unit_arrow(act, a1.x)));
        worst = std::max(worst, dist(compose(act, a1, inv), unit_arrow(act, target(act, a1))));
        GroupoidArrow a21 = compose(act, a2, a1);
        worst = std::max(worst, (source(a21) - source(a1)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (target(act, a21) - target(act, a2)).cwiseAbs().maxCoeff());
    }
    return worst;
}

double holonomic_bisection_residual(const FreeTransitiveAction& act, const Vec& k, const std::vector<Vec>& points) {
    const std::size_t n = act.dim();
    const auto N = static_cast<Eigen::Index>(n);
    double worst = 0;
    for (const auto& x : points) {
        GroupoidArrow a{k, x, Mat::Identity(N, N)};
        for (std::size_t j = 0; j < n; ++j) {
            ArrowTangent t{Vec::Zero(N), unit(n, j), Mat::Zero(N, N)};
            worst = std::max(worst, pfaffian_omega(act, a, t).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Mat random_isotropy(const FreeTransitiveAction& act, std::mt19937_64& rng, double scale) {
    const std::size_t n = act.dim();
    const auto N = static_cast<Eigen::Index>(n);
    if (act.kind() == ModelKind::Translations) {
        for (;;) {
            Mat A = Mat::Identity(N, N) + scale * random_mat(n, rng);
            if (std::abs(A.determinant()) > 0.1) return A;
        }
    }
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat X = Mat::Zero(N, N);
    for (const auto& b : sp_k1_numeric(act.param())) X += scale * nd(rng) * b;
    return X.exp();
}

MultiplicativityReport multiplicativity_residual(const FreeTransitiveAction& act, std::size_t pairs,
                                                 std::size_t tangents_per_pair, std::uint64_t seed,
                                                 bool identity_isotropy) {
    std::mt19937_64 rng(seed);
    const std::size_t n = act.dim();
    const auto N = static_cast<Eigen::Index>(n);
    MultiplicativityReport rep;
    for (std::size_t s = 0; s < pairs; ++s) {
        Vec k1 = random_vec(n, rng), k2 = random_vec(n, rng), x = random_vec(n, rng);
        Mat A1 = identity_isotropy ? Mat::Identity(N, N) : random_isotropy(act, rng);
        Mat A2 = identity_isotropy ? Mat::Identity(N, N) : random_isotropy(act, rng);
        GroupoidArrow a1{k1, x, A1};
        GroupoidArrow a2{k2, target(act, a1), A2};
        GroupoidArrow a21 = compose(act, a2, a1);
        Mat i1 = value_transport(act, a1), i2 = value_transport(act, a2), i21 = value_transport(act, a21);
        Mat bar2 = arrow_action_matrix(act, a2);
        Mat dR = act.jacobian([&](const Vec& kk) { return act.mul(kk, k1); }, k2);
        Mat dL = act.jacobian([&](const Vec& kk) { return act.mul(k2, kk); }, k1);
        ++rep.pairs;
        for (std::size_t t = 0; t < tangents_per_pair; ++t) {
            ArrowTangent u{random_vec(n, rng), random_vec(n, rng), random_mat(n, rng)};
            ArrowTangent w{random_vec(n, rng), act.dm(k1, x, u.v1, u.v2), random_mat(n, rng)};
            ArrowTangent prod{dR * w.v1 + dL * u.v1, u.v2, w.v3 * A1 + A2 * u.v3};
            Vec o21 = pfaffian_omega(act, a21, prod);
            Vec o2 = pfaffian_omega(act, a2, w);
            Vec o1 = pfaffian_omega(act, a1, u);
            Vec d = i21 * o21 - (i2 * o2 + bar2 * (i1 * o1));
            Vec lit = o21 - (o2 + bar2 * o1);
            rep.max_defect = std::max(rep.max_defect, d.cwiseAbs().maxCoeff());
            rep.max_literal_defect = std::max(rep.max_literal_defect, lit.cwiseAbs().maxCoeff());
            ++rep.samples;
        }
    }
    return rep;
}

Vec isotropy_action(const FreeTransitiveAction& act, const Mat& dphi, const Vec& k) {
    const auto N = static_cast<Eigen::Index>(act.dim());
    if (dphi.rows() != N || dphi.cols() != N) throw DimensionMismatch("isotropy_action: dphi has wrong shape");
    if (std::abs(dphi.determinant()) < 1e-12) throw SingularDifferential("d phi at x0 is singular");
    const Vec x0 = act.x0();
    Vec y = act.act(k, x0);
    return act.divisor(x0 + dphi * (y - x0), x0);
}

std::vector<Mat> infinitesimal_rep(const FreeTransitiveAction& act, const std::vector<Mat>& g_basis) {
    const std::size_t n = act.dim();
    const auto N = static_cast<Eigen::Index>(n);
    const double h = FreeTransitiveAction::kFdStep;
    std::vector<Mat> out;
    for (const auto& X : g_basis) {
        if (X.rows() != N || X.cols() != N) throw DimensionMismatch("infinitesimal_rep: matrix has wrong shape");
        Mat gp = (h * X).exp(), gm = (-h * X).exp();
        Mat r(N, N);
        for (std::size_t j = 0; j < n; ++j) {
            Vec e = h * unit(n, j);
            Vec v = isotropy_action(act, gp, e) - isotropy_action(act, gm, e) - isotropy_action(act, gp, -e) +
                    isotropy_action(act, gm, -e);
            r.col(static_cast<Eigen::Index>(j)) = v / (4 * h * h);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> lie_algebra_constants(const FreeTransitiveAction& act) {
    const std::size_t n = act.dim();
    const double h = FreeTransitiveAction::kFdStep;
    auto comm = [&](const Vec& a, const Vec& b) { return act.mul(act.mul(act.mul(a, b), act.inv(a)), act.inv(b)); };
    std::vector<double> sc(n * n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Vec a = h * unit(n, j), b = h * unit(n, k);
            Vec v = (comm(a, b) - comm(-a, b) - comm(a, -b) + comm(-a, -b)) / (4 * h * h);
            for (std::size_t i = 0; i < n; ++i) sc[(i * n + j) * n + k] = v(static_cast<Eigen::Index>(i));
        }
    return sc;
}

std::optional<Rational> snap_rational(double x, double tol, long max_den) {
    if (!std::isfinite(x)) return std::nullopt;
    for (long q = 1; q <= max_den; ++q) {
        const double p = std::round(x * static_cast<double>(q));
        if (std::abs(x - p / static_cast<double>(q)) <= tol)
            return Rational(BigInt(static_cast<long long>(p)), BigInt(q));
    }
    return std::nullopt;
}

ReductiveBuild build_reductive_extension(const FreeTransitiveAction& act, const AlmostLieAlgebra& g,
                                         const std::vector<QMatrix>& g_matrices) {
    if (g_matrices.size() != g.dim()) throw DimensionMismatch("build_reductive_extension: one matrix per basis element");
    const std::size_t n = act.dim();
    ReductiveBuild out;
    out.k_constants = lie_algebra_constants(act);
    std::vector<Mat> num;
    for (const auto& m : g_matrices) {
        if (m.rows() != n || m.cols() != n) throw DimensionMismatch("g matrices must act on T_{x0} X");
        num.push_back(to_numeric(m));
    }
    out.rep_numeric = infinitesimal_rep(act, num);

    bool ok = true;
    auto snap = [&](double x) {
        auto q = snap_rational(x);
        if (!q) {
            ok = false;
            return Rational(0);
        }
        out.max_snap_error = std::max(out.max_snap_error, std::abs(x - to_double(*q)));
        return *q;
    };
    std::vector<Rational> sc;
    for (double x : out.k_constants) sc.push_back(snap(x));
    std::vector<QMatrix> mats;
    for (const auto& m : out.rep_numeric) {
        QMatrix q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q(i, j) = snap(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        mats.push_back(std::move(q));
    }
    if (!ok) return out;

    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("k" + std::to_string(i + 1));
    try {
        out.kfrak = AlmostLieAlgebra("lie(" + act.name() + ")", std::move(names), std::move(sc));
    } catch (const NotAntisymmetric&) {
        return out;
    }
    out.rep = LinearRep(g, n, std::move(mats));
    out.model = semidirect_extension(g, *out.rep, *out.kfrak);
    out.check = check_reductive(out.model->cte, out.model->splitting);
    out.exact = out.check->ok();
    return out;
}

}  // namespace cartanlab
