#pragma once

#include "cartanlab/builtin_algebras.hpp"
#include "cartanlab/extension.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cartanlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ModelKind { Translations, Heisenberg };

/// Free transitive action of K on X = R^dim with base point x0 = 0.
/// Translations: K = R^n acting by addition.
/// Heisenberg: K = R^{2k+1} with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+<a,b'>), acting on itself by left multiplication.
class FreeTransitiveAction {
public:
    static FreeTransitiveAction translations(std::size_t n);
    static FreeTransitiveAction heisenberg(std::size_t k);

    ModelKind kind() const { return kind_; }
    std::size_t param() const { return param_; }
    std::size_t dim() const { return dim_; }
    std::string name() const;

    Vec identity() const { return Vec::Zero(static_cast<Eigen::Index>(dim_)); }
    Vec x0() const { return Vec::Zero(static_cast<Eigen::Index>(dim_)); }
    Vec mul(const Vec& a, const Vec& b) const;
    Vec inv(const Vec& a) const;
    Vec act(const Vec& k, const Vec& x) const;
    /// Phi(y, x): the unique k with act(k, x) = y.
    Vec divisor(const Vec& y, const Vec& x) const;

    /// Jacobian of f at p. Closed form (identity) for translations, where every map
    /// differentiated here is a translation by a constant; central differences otherwise.
    Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& p) const;

    /// d m^K(v1, v2) at (k, x), m^K(k, x) = act(k, x).
    Vec dm(const Vec& k, const Vec& x, const Vec& v1, const Vec& v2) const;

    static constexpr double kFdStep = 1e-5;

private:
    ModelKind kind_ = ModelKind::Translations;
    std::size_t param_ = 0;
    std::size_t dim_ = 0;
};

Vec divisor(const FreeTransitiveAction& act, const Vec& y, const Vec& x);

/// Arrow of (K |x X) x G from x to act(k, x) with isotropy datum A.
struct GroupoidArrow {
    Vec k;
    Vec x;
    Mat A;
};

Vec source(const GroupoidArrow& a);
Vec target(const FreeTransitiveAction& act, const GroupoidArrow& a);
GroupoidArrow unit_arrow(const FreeTransitiveAction& act, const Vec& x);
GroupoidArrow inverse_arrow(const FreeTransitiveAction& act, const GroupoidArrow& a);

/// (k2, k1 x, A2)(k1, x, A1) = (k2 k1, x, A2 A1). Throws NonComposable.
GroupoidArrow compose(const FreeTransitiveAction& act, const GroupoidArrow& a2, const GroupoidArrow& a1);

/// Tangent vector at an arrow: v1 in T_k K, v2 in T_x X, v3 in T_A G.
struct ArrowTangent {
    Vec v1;
    Vec v2;
    Mat v3;
};

/// A~ = d_{x0} T_{Phi(kx, x0)} o A o d_x T_{Phi(x, x0)^{-1}}, mapping T_x X to T_{kx} X.
Mat conjugated_matrix(const FreeTransitiveAction& act, const GroupoidArrow& a);

/// omega(v1, v2, v3) = d Phi_{(kx, x)}(dm(v1, v2) - A~ v2, 0), a vector in T_k K.
Vec pfaffian_omega(const FreeTransitiveAction& act, const GroupoidArrow& a, const ArrowTangent& t);

/// Arrow action on coefficients, A-bar = d_{x0} Phi^{-1}_{pt} o A o d Phi_q, from E_x to E_{kx}
/// (pt = Phi(x0, kx) x0, q = Phi(x0, x) x0; E_y = T_{Phi(y, x0)} K).
Mat arrow_action_matrix(const FreeTransitiveAction& act, const GroupoidArrow& a);

/// Identification of the value space T_k K of omega with E_{kx}:
/// derivative at z = k of z -> c^{-1} k^{-1} z c Phi(kx, x0), c = Phi(x, x0).
Mat value_transport(const FreeTransitiveAction& act, const GroupoidArrow& a);

/// Max of |Phi(y,x)^{-1} - Phi(x,y)|, |Phi(z,y)Phi(y,x) - Phi(z,x)| and |act(Phi(y,x),x) - y| over random triples.
double divisor_identity_residual(const FreeTransitiveAction& act, std::size_t samples, std::uint64_t seed);

/// Max deviation in associativity, units, inverses and source/target compatibility over random arrows.
double groupoid_axiom_residual(const FreeTransitiveAction& act, std::size_t samples, std::uint64_t seed);

/// Max over points and coordinate directions of |omega(0, e_j, 0)| at (k, x, I).
double holonomic_bisection_residual(const FreeTransitiveAction& act, const Vec& k, const std::vector<Vec>& points);

/// Random isotropy datum: exp of a random sp(k,1) element for Heisenberg, I + noise in GL(n) for translations.
Mat random_isotropy(const FreeTransitiveAction& act, std::mt19937_64& rng, double scale = 0.3);

struct MultiplicativityReport {
    double max_defect = 0;          ///< with the value transport (gating)
    double max_literal_defect = 0;  ///< raw coordinate identification (diagnostic)
    std::size_t pairs = 0;
    std::size_t samples = 0;
};

/// Samples composable pairs and tangents with w2 = dm(u1, u2), and compares
/// iota(omega_{a2 a1}(product tangent)) with iota(omega_{a2}(w)) + A-bar_{a2} iota(omega_{a1}(u)).
/// `identity_isotropy` forces A = I everywhere.
MultiplicativityReport multiplicativity_residual(const FreeTransitiveAction& act, std::size_t pairs,
                                                 std::size_t tangents_per_pair, std::uint64_t seed,
                                                 bool identity_isotropy = false);

/// Phi_{x0}^{-1}(d phi (Phi_{x0}(k))). Throws SingularDifferential.
Vec isotropy_action(const FreeTransitiveAction& act, const Mat& dphi, const Vec& k);

/// Infinitesimal action of matrices at x0 on the Lie algebra of K, by mixed central differences at e_K.
std::vector<Mat> infinitesimal_rep(const FreeTransitiveAction& act, const std::vector<Mat>& g_basis);

/// Structure constants of Lie(K) from the group commutator, by mixed central differences.
std::vector<double> lie_algebra_constants(const FreeTransitiveAction& act);

/// Rational with denominator <= max_den within tol, smallest denominator first.
std::optional<Rational> snap_rational(double x, double tol = 1e-6, long max_den = 16);

struct ReductiveBuild {
    bool exact = false;  ///< false means "numeric only"
    double max_snap_error = 0;
    std::vector<double> k_constants;   ///< numeric d^i_jk of Lie(K)
    std::vector<Mat> rep_numeric;      ///< numeric action matrices
    std::optional<AlmostLieAlgebra> kfrak;
    std::optional<LinearRep> rep;
    std::optional<ModelExtension> model;
    std::optional<ReductiveReport> check;
};

/// g given by matrices at x0. Builds z = g |x Lie(K) with canonical splittings after snapping.
ReductiveBuild build_reductive_extension(const FreeTransitiveAction& act, const AlmostLieAlgebra& g,
                                         const std::vector<QMatrix>& g_matrices);

}  // namespace cartanlab
