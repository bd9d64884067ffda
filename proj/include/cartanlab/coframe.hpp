#pragma once

#include "cartanlab/extension.hpp"
#include "cartanlab/expr.hpp"
#include "cartanlab/jet.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace cartanlab {

using Point = std::vector<double>;

struct ChartBox {
    std::vector<std::string> coords;
    std::vector<double> lo;
    std::vector<double> hi;
    std::size_t grid = 9;
    double fd_step = 1e-4;
    double tol = 1e-6;

    std::size_t n() const { return coords.size(); }
    /// Throws InputError on inconsistent bounds or step.
    void validate() const;
    /// Evaluation grid: `grid` points per axis spanning [lo + 2h, hi - 2h], first axis slowest.
    std::vector<Point> grid_points() const;
};

/// Sweep options; results never depend on `threads`.
struct SweepOptions {
    unsigned threads = 1;
};

/// Vector-valued 1-form: row i holds the dx^j coefficients of the i-th target component.
struct VForm1 {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<Expr> comps;  ///< row-major m x n

    const Expr& at(std::size_t i, std::size_t j) const { return comps[i * n + j]; }
    Eigen::MatrixXd eval(const Point& p) const;

    static VForm1 parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& coords);
    static VForm1 zero(std::size_t m, const std::vector<std::string>& coords);
    /// Stacks forms on top of each other (target dimensions add).
    static VForm1 stack(const std::vector<const VForm1*>& parts);
};

/// n vector fields in n coordinates; field a has components fields[a][j] along d/dx^j.
struct FrameField {
    std::size_t n = 0;
    std::vector<std::vector<Expr>> fields;

    /// Column a is V_a(p).
    Eigen::MatrixXd eval(const Point& p) const;
    static FrameField parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& coords);
};

/// Antisymmetric 2-form values at one point: value(i, a, b) for target i, slots a, b.
class TwoForm {
public:
    TwoForm() = default;
    TwoForm(std::size_t m, std::size_t n) : m_(m), n_(n), data_(m * n * n, 0.0) {}
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    double& operator()(std::size_t i, std::size_t a, std::size_t b) { return data_[(i * n_ + a) * n_ + b]; }
    double operator()(std::size_t i, std::size_t a, std::size_t b) const { return data_[(i * n_ + a) * n_ + b]; }
    TwoForm& operator+=(const TwoForm& o);
    TwoForm& operator-=(const TwoForm& o);
    double max_abs() const;
    double max_abs_rows(std::size_t first, std::size_t count) const;
    /// Rows [first, first+count) as a new form.
    TwoForm rows(std::size_t first, std::size_t count) const;
    bool antisymmetric() const;

private:
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Floating-point copies of structure constants and rep matrices.
struct NumericAlgebra {
    std::size_t dim = 0;
    std::vector<double> sc;  ///< d^i_jk at (i*dim + j)*dim + k
    explicit NumericAlgebra(const AlmostLieAlgebra& alg);
    NumericAlgebra() = default;
};

struct NumericRep {
    std::size_t algebra_dim = 0;
    std::size_t space_dim = 0;
    std::vector<Eigen::MatrixXd> mats;
    explicit NumericRep(const LinearRep& rep);
    NumericRep() = default;
};

/// (d eta)_iab = d_a eta_ib - d_b eta_ia by central differences. Throws BoundaryProximity.
TwoForm fd_d(const VForm1& form, const Point& p, double h, const ChartBox* box = nullptr);

/// (eta ^ eta)(v,w) = [eta(v), eta(w)].
TwoForm wedge_bracket(const Eigen::MatrixXd& eta, const NumericAlgebra& alg);
/// (tau ^ theta)(v,w) = tau(v) theta(w) - tau(w) theta(v).
TwoForm wedge_action(const Eigen::MatrixXd& tau, const Eigen::MatrixXd& theta, const NumericRep& rep);

TwoForm wedge_bracket(const Eigen::MatrixXd& eta, const AlmostLieAlgebra& alg);
TwoForm wedge_action(const Eigen::MatrixXd& tau, const Eigen::MatrixXd& theta, const LinearRep& rep);

struct CurvatureReport {
    std::vector<Point> points;
    std::vector<TwoForm> omega;  ///< per grid point
    double max_norm = 0;
    std::size_t worst_index = 0;
    Point worst_point;
    bool flat = false;
    std::optional<double> max_h;  ///< split maxima when the target is h |x k
    std::optional<double> max_k;
};

/// Omega = d eta + [eta ^ eta] on the grid. `split_at` = dim h for semidirect targets.
CurvatureReport curvature(const VForm1& eta, const AlmostLieAlgebra& alg, const ChartBox& box,
                          std::optional<std::size_t> split_at = std::nullopt, const SweepOptions& opt = {});

/// Torsion T^i_ab and curvature R^alpha_ab at one point, evaluated on the frame dual to theta.
struct TorsionCurvature {
    TwoForm T;
    TwoForm R;
};

TorsionCurvature torsion_curvature(const VForm1& theta, const VForm1& tau, const NumericAlgebra& h_alg,
                                   const NumericRep& rep, const ChartBox& box, const Point& p);
TorsionCurvature torsion_curvature(const VForm1& theta, const VForm1& tau, const AlmostLieAlgebra& h_alg,
                                   const LinearRep& rep, const ChartBox& box, const Point& p);

/// Concrete Cartan-bundle scenario on one chart.
struct Scenario {
    std::string name;
    ChartBox box;
    VForm1 theta;  ///< k-valued coframe
    VForm1 tau;    ///< h-valued connection
    AlmostLieAlgebra h;
    AlmostLieAlgebra k;
    LinearRep rep;  ///< h acting on k
    std::optional<FrameField> frames;

    /// Dimensions of forms, algebras and rep must agree. Throws DimensionMismatch.
    void validate() const;
};

struct ComponentWitness {
    std::string label;  ///< e.g. "T^3_12"
    double value = 0;
    Point point;
};

struct FlatnessReport {
    bool flat = false;
    double max_R = 0;
    double max_T_plus_d = 0;
    Point worst_point;
    std::vector<ComponentWitness> worst_components;  ///< worst torsion and curvature entries
    TorsionCurvature at_worst;
    std::optional<Triple> z_jacobi_witness;  ///< jacobiator status of h |x k, reported only
    std::size_t points = 0;
};

/// FLAT iff max |R| and max |T + d| over the grid are both <= tol. Throws SingularCoframe.
FlatnessReport flatness_check(const Scenario& sc, const SweepOptions& opt = {});

/// eta = i o tau + r o theta, assembled symbolically.
VForm1 assemble_lift(const VForm1& tau, const VForm1& theta, const RepExtension& ext, const SplittingPair& sp);

struct SplitReport {
    double max_h_discrepancy = 0;  ///< |Omega^eta_h - Omega^tau|
    double max_k_discrepancy = 0;  ///< |Omega^eta_k - (Omega^theta + tau ^ theta)|
    double max_omega_eta = 0;
    double max_tau_wedge_theta = 0;
    Point worst_point;
    std::size_t points = 0;

    double max_discrepancy() const { return std::max(max_h_discrepancy, max_k_discrepancy); }
};

SplitReport curvature_split_check(const VForm1& tau, const VForm1& theta, const AlmostLieAlgebra& h,
                                  const AlmostLieAlgebra& k, const LinearRep& rep, const ChartBox& box,
                                  const SweepOptions& opt = {});

struct SecondOrderSplitReport {
    double max_top_discrepancy = 0;    ///< |Omega^{eta2}_h - R2 (theta2 ^ theta2)|
    double max_lower_discrepancy = 0;  ///< |Omega^{eta2}_k - (Omega^{eta1} + tau2 ^ theta1)|
    double max_R2 = 0;
    double max_tau2_wedge_theta1 = 0;
    Point worst_point;
    std::size_t points = 0;

    double max_discrepancy() const { return std::max(max_top_discrepancy, max_lower_discrepancy); }
};

/// eta2 = (tau2, tau1, theta1) on z2; compares against the independently assembled right-hand side.
SecondOrderSplitReport second_order_split_check(const VForm1& tau2, const VForm1& tau1, const VForm1& theta1,
                                                const SecondOrderModel& model, const ChartBox& box,
                                                const SweepOptions& opt = {});

/// table[a][b] = [V_a, V_b](p) = DV_b V_a - DV_a V_b. Throws BoundaryProximity.
std::vector<std::vector<Eigen::VectorXd>> lie_bracket_frames(const FrameField& F, const Point& p, double h,
                                                             const ChartBox* box = nullptr);

struct IntegrabilityReport {
    bool pass = false;
    double max_residual = 0;
    std::optional<Pair> witness;  ///< 1-based (a,b) of the worst pair when failing
    Point worst_point;
    std::size_t points = 0;
};

/// PASS iff |[V_a,V_b] - sum_i d^i_ab V_i| <= tol everywhere. Throws DegenerateFrame.
IntegrabilityReport k_integrability_witness(const FrameField& F, const AlmostLieAlgebra& k, const ChartBox& box,
                                            const SweepOptions& opt = {});

/// Richardson ratio (d_h - d_{h/2}) / (d_{h/2} - d_{h/4}) of the max-abs fd_d differences; about 4.
double fd_convergence_ratio(const VForm1& form, const Point& p, double h);

}  // namespace cartanlab
