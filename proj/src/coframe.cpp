#include "cartanlab/coframe.hpp"

#include "cartanlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace cartanlab {

namespace {

std::string point_str(const Point& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(p[i]);
    }
    return s + ")";
}

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers; output order is index order.
/// The exception of the lowest failing index is rethrown.
template <class R, class F>
std::vector<R> sweep(std::size_t count, unsigned threads, F fn) {
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errs(count);
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

void check_interior(const ChartBox* box, const Point& p, double h) {
    if (!box) return;
    if (p.size() != box->n()) throw DimensionMismatch("point has wrong dimension for the chart");
    for (std::size_t a = 0; a < p.size(); ++a)
        if (p[a] - h < box->lo[a] || p[a] + h > box->hi[a])
            throw BoundaryProximity("point " + point_str(p) + " is within the FD step of the chart boundary");
}

std::string label3(char sym, std::size_t i, std::size_t a, std::size_t b) {
    return std::string(1, sym) + "^" + std::to_string(i + 1) + "_" + std::to_string(a + 1) + std::to_string(b + 1);
}

}  // namespace

void ChartBox::validate() const {
    if (coords.empty()) throw InputError("chart needs at least one coordinate");
    if (lo.size() != coords.size() || hi.size() != coords.size())
        throw InputError("chart bounds must have one entry per coordinate");
    if (grid < 3) throw InputError("chart grid must be at least 3");
    if (!(fd_step > 0)) throw InputError("fd_step must be positive");
    if (!(tol > 0)) throw InputError("tol must be positive");
    for (std::size_t a = 0; a < coords.size(); ++a) {
        if (!(lo[a] < hi[a])) throw InputError("chart axis " + coords[a] + " needs lo < hi");
        if (!(fd_step < (hi[a] - lo[a]) / 10)) throw InputError("fd_step must be below a tenth of every axis extent");
    }
}

std::vector<Point> ChartBox::grid_points() const {
    validate();
    const std::size_t d = n();
    std::vector<std::vector<double>> axes(d);
    for (std::size_t a = 0; a < d; ++a) {
        const double l = lo[a] + 2 * fd_step, u = hi[a] - 2 * fd_step;
        for (std::size_t t = 0; t < grid; ++t)
            axes[a].push_back(l + (u - l) * static_cast<double>(t) / static_cast<double>(grid - 1));
    }
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= grid;
    std::vector<Point> pts;
    pts.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Point p(d);
        std::size_t r = idx;
        for (std::size_t a = d; a-- > 0;) {
            p[a] = axes[a][r % grid];
            r /= grid;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

Eigen::MatrixXd VForm1::eval(const Point& p) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(this->m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < this->m; ++i)
        for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = at(i, j).eval(p);
    return m;
}

VForm1 VForm1::parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& coords) {
    VForm1 f;
    f.m = rows.size();
    f.n = coords.size();
    for (const auto& r : rows) {
        if (r.size() != coords.size()) throw DimensionMismatch("form row needs one entry per coordinate");
        for (const auto& s : r) f.comps.push_back(cartanlab::parse(s, coords));
    }
    return f;
}

VForm1 VForm1::zero(std::size_t m, const std::vector<std::string>& coords) {
    VForm1 f;
    f.m = m;
    f.n = coords.size();
    f.comps.assign(m * f.n, Expr::zero(coords));
    return f;
}

VForm1 VForm1::stack(const std::vector<const VForm1*>& parts) {
    VForm1 f;
    for (const VForm1* p : parts) {
        if (f.comps.empty() && f.m == 0) f.n = p->n;
        if (p->n != f.n) throw DimensionMismatch("stack: forms live on different charts");
        f.m += p->m;
        f.comps.insert(f.comps.end(), p->comps.begin(), p->comps.end());
    }
    return f;
}

Eigen::MatrixXd FrameField::eval(const Point& p) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t j = 0; j < n; ++j)
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) = fields[a][j].eval(p);
    return m;
}

FrameField FrameField::parse(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& coords) {
    if (rows.size() != coords.size()) throw DimensionMismatch("frame needs one field per coordinate");
    FrameField F;
    F.n = coords.size();
    for (const auto& r : rows) {
        if (r.size() != coords.size()) throw DimensionMismatch("frame field needs one component per coordinate");
        std::vector<Expr> f;
        for (const auto& s : r) f.push_back(cartanlab::parse(s, coords));
        F.fields.push_back(std::move(f));
    }
    return F;
}

TwoForm& TwoForm::operator+=(const TwoForm& o) {
    if (o.m_ != m_ || o.n_ != n_) throw DimensionMismatch("2-form sum: shapes differ");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

TwoForm& TwoForm::operator-=(const TwoForm& o) {
    if (o.m_ != m_ || o.n_ != n_) throw DimensionMismatch("2-form difference: shapes differ");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

double TwoForm::max_abs() const { return max_abs_rows(0, m_); }

double TwoForm::max_abs_rows(std::size_t first, std::size_t count) const {
    double r = 0;
    for (std::size_t i = first; i < first + count; ++i)
        for (std::size_t k = 0; k < n_ * n_; ++k) r = std::max(r, std::abs(data_[i * n_ * n_ + k]));
    return r;
}

TwoForm TwoForm::rows(std::size_t first, std::size_t count) const {
    if (first + count > m_) throw DimensionMismatch("2-form rows out of range");
    TwoForm t(count, n_);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * n_ * n_),
              data_.begin() + static_cast<std::ptrdiff_t>((first + count) * n_ * n_), t.data_.begin());
    return t;
}

bool TwoForm::antisymmetric() const {
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                if ((*this)(i, a, b) != -(*this)(i, b, a)) return false;
    return true;
}

NumericAlgebra::NumericAlgebra(const AlmostLieAlgebra& alg) : dim(alg.dim()) {
    for (const auto& q : alg.structure_constants()) sc.push_back(to_double(q));
}

NumericRep::NumericRep(const LinearRep& rep) : algebra_dim(rep.algebra.dim()), space_dim(rep.space_dim) {
    for (const auto& m : rep.matrices) {
        Eigen::MatrixXd e(static_cast<Eigen::Index>(space_dim), static_cast<Eigen::Index>(space_dim));
        for (std::size_t i = 0; i < space_dim; ++i)
            for (std::size_t j = 0; j < space_dim; ++j)
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
        mats.push_back(std::move(e));
    }
}

TwoForm fd_d(const VForm1& form, const Point& p, double h, const ChartBox* box) {
    check_interior(box, p, h);
    const std::size_t n = form.n, m = form.m;
    if (p.size() != n) throw DimensionMismatch("fd_d: point has wrong dimension");
    // deriv[a](i, b) = d_a eta_ib
    std::vector<Eigen::MatrixXd> deriv;
    Point q = p;
    for (std::size_t a = 0; a < n; ++a) {
        q[a] = p[a] + h;
        Eigen::MatrixXd plus = form.eval(q);
        q[a] = p[a] - h;
        Eigen::MatrixXd minus = form.eval(q);
        q[a] = p[a];
        deriv.push_back((plus - minus) / (2 * h));
    }
    TwoForm d(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                const auto I = static_cast<Eigen::Index>(i);
                double v = deriv[a](I, static_cast<Eigen::Index>(b)) - deriv[b](I, static_cast<Eigen::Index>(a));
                d(i, a, b) = v;
                d(i, b, a) = -v;
            }
    return d;
}

TwoForm wedge_bracket(const Eigen::MatrixXd& eta, const NumericAlgebra& alg) {
    const std::size_t m = static_cast<std::size_t>(eta.rows()), n = static_cast<std::size_t>(eta.cols());
    if (m != alg.dim) throw DimensionMismatch("wedge_bracket: form target differs from algebra dimension");
    TwoForm w(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                const double c = alg.sc[(i * m + j) * m + k];
                if (c == 0) continue;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = a + 1; b < n; ++b) {
                        double v = c * eta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) *
                                   eta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
                        w(i, a, b) += v;
                        w(i, b, a) -= v;
                    }
            }
    return w;
}

TwoForm wedge_action(const Eigen::MatrixXd& tau, const Eigen::MatrixXd& theta, const NumericRep& rep) {
    const std::size_t n = static_cast<std::size_t>(theta.cols());
    const std::size_t m = static_cast<std::size_t>(theta.rows());
    if (static_cast<std::size_t>(tau.rows()) != rep.algebra_dim || m != rep.space_dim ||
        static_cast<std::size_t>(tau.cols()) != n)
        throw DimensionMismatch("wedge_action: shapes do not match the representation");
    TwoForm w(m, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            Eigen::MatrixXd ta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            Eigen::MatrixXd tb = ta;
            for (std::size_t al = 0; al < rep.algebra_dim; ++al) {
                ta += tau(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(a)) * rep.mats[al];
                tb += tau(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(b)) * rep.mats[al];
            }
            Eigen::VectorXd v = ta * theta.col(static_cast<Eigen::Index>(b)) - tb * theta.col(static_cast<Eigen::Index>(a));
            for (std::size_t i = 0; i < m; ++i) {
                w(i, a, b) = v(static_cast<Eigen::Index>(i));
                w(i, b, a) = -v(static_cast<Eigen::Index>(i));
            }
        }
    return w;
}

TwoForm wedge_bracket(const Eigen::MatrixXd& eta, const AlmostLieAlgebra& alg) {
    return wedge_bracket(eta, NumericAlgebra(alg));
}

TwoForm wedge_action(const Eigen::MatrixXd& tau, const Eigen::MatrixXd& theta, const LinearRep& rep) {
    return wedge_action(tau, theta, NumericRep(rep));
}

CurvatureReport curvature(const VForm1& eta, const AlmostLieAlgebra& alg, const ChartBox& box,
                          std::optional<std::size_t> split_at, const SweepOptions& opt) {
    if (eta.m != alg.dim()) throw DimensionMismatch("curvature: form target differs from algebra dimension");
    if (eta.n != box.n()) throw DimensionMismatch("curvature: form lives on another chart");
    if (split_at && *split_at > alg.dim()) throw DimensionMismatch("curvature: split index out of range");
    NumericAlgebra na(alg);
    CurvatureReport rep;
    rep.points = box.grid_points();
    rep.omega = sweep<TwoForm>(rep.points.size(), opt.threads, [&](std::size_t i) {
        TwoForm om = fd_d(eta, rep.points[i], box.fd_step, &box);
        om += wedge_bracket(eta.eval(rep.points[i]), na);
        return om;
    });
    if (split_at) {
        rep.max_h = 0.0;
        rep.max_k = 0.0;
    }
    for (std::size_t i = 0; i < rep.omega.size(); ++i) {
        const double v = rep.omega[i].max_abs();
        if (v > rep.max_norm || i == 0) {
            rep.max_norm = v;
            rep.worst_index = i;
        }
        if (split_at) {
            rep.max_h = std::max(*rep.max_h, rep.omega[i].max_abs_rows(0, *split_at));
            rep.max_k = std::max(*rep.max_k, rep.omega[i].max_abs_rows(*split_at, alg.dim() - *split_at));
        }
    }
    if (!rep.points.empty()) rep.worst_point = rep.points[rep.worst_index];
    rep.flat = rep.max_norm <= box.tol;
    return rep;
}

TorsionCurvature torsion_curvature(const VForm1& theta, const VForm1& tau, const NumericAlgebra& h_alg,
                                   const NumericRep& rep, const ChartBox& box, const Point& p) {
    const std::size_t n = theta.n;
    if (theta.m != n) throw DimensionMismatch("torsion_curvature: coframe must be square");
    if (tau.m != h_alg.dim || tau.n != n) throw DimensionMismatch("torsion_curvature: connection shape");
    if (rep.space_dim != n || rep.algebra_dim != h_alg.dim) throw DimensionMismatch("torsion_curvature: rep shape");
    Eigen::MatrixXd th = theta.eval(p);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(th);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-10)
        throw SingularCoframe(p, "coframe is singular at " + point_str(p));
    Eigen::MatrixXd E = lu.inverse();  // column a is the frame vector E_a
    Eigen::MatrixXd ta = tau.eval(p);
    Eigen::MatrixXd tE = ta * E;  // column a is tau(E_a)
    TwoForm dth = fd_d(theta, p, box.fd_step, &box);
    TwoForm dta = fd_d(tau, p, box.fd_step, &box);

    auto pull = [&](const TwoForm& f, std::size_t i, std::size_t a, std::size_t b) {
        double s = 0;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
                s += f(i, c, d) * E(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a)) *
                     E(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(b));
        return s;
    };
    const std::size_t hm = h_alg.dim;
    std::vector<Eigen::MatrixXd> act(n);  // act[a] = rho(tau(E_a))
    for (std::size_t a = 0; a < n; ++a) {
        act[a] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t al = 0; al < hm; ++al)
            act[a] += tE(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(a)) * rep.mats[al];
    }
    TorsionCurvature tc{TwoForm(n, n), TwoForm(hm, n)};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                double v = pull(dth, i, a, b) + act[a](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) -
                           act[b](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
                tc.T(i, a, b) = v;
                tc.T(i, b, a) = -v;
            }
            for (std::size_t al = 0; al < hm; ++al) {
                double v = pull(dta, al, a, b);
                for (std::size_t j = 0; j < hm; ++j)
                    for (std::size_t k = 0; k < hm; ++k) {
                        const double c = h_alg.sc[(al * hm + j) * hm + k];
                        if (c != 0)
                            v += c * tE(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) *
                                 tE(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
                    }
                tc.R(al, a, b) = v;
                tc.R(al, b, a) = -v;
            }
        }
    return tc;
}

TorsionCurvature torsion_curvature(const VForm1& theta, const VForm1& tau, const AlmostLieAlgebra& h_alg,
                                   const LinearRep& rep, const ChartBox& box, const Point& p) {
    return torsion_curvature(theta, tau, NumericAlgebra(h_alg), NumericRep(rep), box, p);
}

void Scenario::validate() const {
    box.validate();
    if (theta.n != box.n() || tau.n != box.n()) throw DimensionMismatch("forms must live on the chart");
    if (theta.m != k.dim()) throw DimensionMismatch("coframe rows must match dim k");
    if (tau.m != h.dim()) throw DimensionMismatch("connection rows must match dim h");
    if (rep.algebra.dim() != h.dim() || rep.space_dim != k.dim()) throw DimensionMismatch("rep must be of h on k");
    if (frames && frames->n != box.n()) throw DimensionMismatch("frames must live on the chart");
}

FlatnessReport flatness_check(const Scenario& sc, const SweepOptions& opt) {
    sc.validate();
    if (sc.k.dim() != sc.box.n()) throw DimensionMismatch("flatness_check: dim k must equal the chart dimension");
    NumericAlgebra nh(sc.h), nk(sc.k);
    NumericRep nr(sc.rep);
    auto pts = sc.box.grid_points();
    auto tcs = sweep<TorsionCurvature>(pts.size(), opt.threads, [&](std::size_t i) {
        return torsion_curvature(sc.theta, sc.tau, nh, nr, sc.box, pts[i]);
    });
    const std::size_t n = sc.k.dim(), hm = sc.h.dim();
    FlatnessReport rep;
    rep.points = pts.size();
    std::size_t worst = 0;
    double worst_val = -1;
    ComponentWitness tw, rw;
    tw.value = rw.value = 0;
    double tw_res = -1, rw_res = -1;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        double local = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    double r = std::abs(tcs[p].T(i, a, b) + nk.sc[(i * n + a) * n + b]);
                    rep.max_T_plus_d = std::max(rep.max_T_plus_d, r);
                    local = std::max(local, r);
                    if (r > tw_res) {
                        tw_res = r;
                        tw = ComponentWitness{label3('T', i, a, b), tcs[p].T(i, a, b), pts[p]};
                    }
                }
        for (std::size_t al = 0; al < hm; ++al)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    double r = std::abs(tcs[p].R(al, a, b));
                    rep.max_R = std::max(rep.max_R, r);
                    local = std::max(local, r);
                    if (r > rw_res) {
                        rw_res = r;
                        rw = ComponentWitness{label3('R', al, a, b), tcs[p].R(al, a, b), pts[p]};
                    }
                }
        if (local > worst_val) {
            worst_val = local;
            worst = p;
        }
    }
    if (tw_res >= 0) rep.worst_components.push_back(tw);
    if (rw_res >= 0) rep.worst_components.push_back(rw);
    rep.worst_point = pts[worst];
    rep.at_worst = tcs[worst];
    rep.flat = rep.max_R <= sc.box.tol && rep.max_T_plus_d <= sc.box.tol;
    rep.z_jacobi_witness = jacobi_witness(semidirect(sc.h, sc.rep, sc.k));
    return rep;
}

VForm1 assemble_lift(const VForm1& tau, const VForm1& theta, const RepExtension& ext, const SplittingPair& sp) {
    if (tau.m != ext.h_dim() || theta.m != ext.v_dim()) throw DimensionMismatch("assemble_lift: form targets");
    if (tau.n != theta.n) throw DimensionMismatch("assemble_lift: forms live on different charts");
    if (sp.r.rows() != ext.z_dim() || sp.r.cols() != ext.v_dim()) throw DimensionMismatch("assemble_lift: r shape");
    const std::size_t n = theta.n;
    const std::vector<std::string>& coords =
        !theta.comps.empty() ? theta.comps.front().coords() : tau.comps.front().coords();
    VForm1 eta;
    eta.m = ext.z_dim();
    eta.n = n;
    for (std::size_t z = 0; z < ext.z_dim(); ++z)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> coeffs;
            std::vector<Expr> terms;
            for (std::size_t a = 0; a < tau.m; ++a) {
                coeffs.push_back(ext.i(z, a));
                terms.push_back(tau.at(a, j));
            }
            for (std::size_t v = 0; v < theta.m; ++v) {
                coeffs.push_back(sp.r(z, v));
                terms.push_back(theta.at(v, j));
            }
            eta.comps.push_back(linear_combination(coeffs, terms, coords));
        }
    return eta;
}

SplitReport curvature_split_check(const VForm1& tau, const VForm1& theta, const AlmostLieAlgebra& h,
                                  const AlmostLieAlgebra& k, const LinearRep& rep, const ChartBox& box,
                                  const SweepOptions& opt) {
    if (tau.m != h.dim() || theta.m != k.dim()) throw DimensionMismatch("split check: form targets");
    if (rep.algebra.dim() != h.dim() || rep.space_dim != k.dim()) throw DimensionMismatch("split check: rep shape");
    ModelExtension model = semidirect_extension(h, rep, k);
    VForm1 eta = assemble_lift(tau, theta, model.cte.ext, model.splitting);
    NumericAlgebra nz(model.cte.z_alg), nh(h), nk(k);
    NumericRep nr(rep);
    auto pts = box.grid_points();
    const std::size_t m = h.dim(), q = k.dim();
    struct PointResult {
        double dh = 0, dk = 0, om = 0, tw = 0;
    };
    auto res = sweep<PointResult>(pts.size(), opt.threads, [&](std::size_t i) {
        const Point& p = pts[i];
        TwoForm lhs = fd_d(eta, p, box.fd_step, &box);
        lhs += wedge_bracket(eta.eval(p), nz);

        Eigen::MatrixXd ta = tau.eval(p), th = theta.eval(p);
        TwoForm om_tau = fd_d(tau, p, box.fd_step, &box);
        om_tau += wedge_bracket(ta, nh);
        TwoForm om_theta = fd_d(theta, p, box.fd_step, &box);
        om_theta += wedge_bracket(th, nk);
        TwoForm tw = wedge_action(ta, th, nr);
        om_theta += tw;

        TwoForm lh = lhs.rows(0, m), lk = lhs.rows(m, q);
        lh -= om_tau;
        lk -= om_theta;
        return PointResult{lh.max_abs(), lk.max_abs(), lhs.max_abs(), tw.max_abs()};
    });
    SplitReport out;
    out.points = pts.size();
    double worst = -1;
    for (std::size_t i = 0; i < res.size(); ++i) {
        out.max_h_discrepancy = std::max(out.max_h_discrepancy, res[i].dh);
        out.max_k_discrepancy = std::max(out.max_k_discrepancy, res[i].dk);
        out.max_omega_eta = std::max(out.max_omega_eta, res[i].om);
        out.max_tau_wedge_theta = std::max(out.max_tau_wedge_theta, res[i].tw);
        double d = std::max(res[i].dh, res[i].dk);
        if (d > worst) {
            worst = d;
            out.worst_point = pts[i];
        }
    }
    return out;
}

SecondOrderSplitReport second_order_split_check(const VForm1& tau2, const VForm1& tau1, const VForm1& theta1,
                                                const SecondOrderModel& model, const ChartBox& box,
                                                const SweepOptions& opt) {
    const std::size_t n = model.n;
    const std::size_t hs = model.h_tensors.size();
    const std::size_t g1 = model.g1_matrices.size();
    if (tau2.m != hs || tau1.m != g1 || theta1.m != n) throw DimensionMismatch("second-order split: form targets");
    if (box.n() != tau2.n || tau1.n != tau2.n || theta1.n != tau2.n)
        throw DimensionMismatch("second-order split: forms live on different charts");

    const auto& cte = model.model.cte;
    VForm1 theta2 = VForm1::stack({&tau1, &theta1});
    VForm1 eta2 = assemble_lift(tau2, theta2, cte.ext, model.model.splitting);
    NumericAlgebra nz(cte.z_alg), nh(cte.h_alg);

    // Matrices of g1 and a left inverse from flattened gl(n) entries to g1 coordinates.
    std::vector<Eigen::MatrixXd> gmats;
    Eigen::MatrixXd flat(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(g1));
    for (std::size_t a = 0; a < g1; ++a) {
        Eigen::MatrixXd mm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                mm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(model.g1_matrices[a](i, j));
                flat(static_cast<Eigen::Index>(i * n + j), static_cast<Eigen::Index>(a)) = mm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        gmats.push_back(mm);
    }
    Eigen::MatrixXd to_g1 = flat.completeOrthogonalDecomposition().pseudoInverse();
    auto g1_coords = [&](const Eigen::MatrixXd& mat) {
        Eigen::VectorXd f(static_cast<Eigen::Index>(n * n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                f(static_cast<Eigen::Index>(i * n + j)) = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        return Eigen::VectorXd(to_g1 * f);
    };
    std::vector<std::vector<Eigen::MatrixXd>> tens(hs);
    for (std::size_t s = 0; s < hs; ++s)
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::MatrixXd mm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    mm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = to_double(model.h_tensors[s][i](j, k));
            tens[s].push_back(mm);
        }

    auto pts = box.grid_points();
    struct PointResult {
        double top = 0, lower = 0, r2 = 0, tw = 0;
    };
    const std::size_t N = tau2.n;
    auto res = sweep<PointResult>(pts.size(), opt.threads, [&](std::size_t idx) {
        const Point& p = pts[idx];
        TwoForm lhs = fd_d(eta2, p, box.fd_step, &box);
        lhs += wedge_bracket(eta2.eval(p), nz);

        Eigen::MatrixXd t2 = tau2.eval(p), t1 = tau1.eval(p), th = theta1.eval(p);
        TwoForm R2 = fd_d(tau2, p, box.fd_step, &box);
        R2 += wedge_bracket(t2, nh);

        // tau1(e_a) as n x n matrices.
        std::vector<Eigen::MatrixXd> T1(N, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t g = 0; g < g1; ++g) T1[a] += t1(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(a)) * gmats[g];
        TwoForm dt1 = fd_d(tau1, p, box.fd_step, &box);
        TwoForm dth = fd_d(theta1, p, box.fd_step, &box);

        TwoForm rhs(g1 + n, N);
        double tw_max = 0;
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = a + 1; b < N; ++b) {
                // g1 slot: d tau1 + [tau1(a), tau1(b)] + tau2(a)(theta1(b), .) - tau2(b)(theta1(a), .)
                Eigen::MatrixXd curv = T1[a] * T1[b] - T1[b] * T1[a];
                Eigen::MatrixXd tw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
                for (std::size_t s = 0; s < hs; ++s)
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t j = 0; j < n; ++j) {
                                const auto I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j),
                                           K = static_cast<Eigen::Index>(k);
                                tw(I, K) += tens[s][i](J, K) *
                                            (t2(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) * th(J, static_cast<Eigen::Index>(b)) -
                                             t2(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(b)) * th(J, static_cast<Eigen::Index>(a)));
                            }
                Eigen::VectorXd cc = g1_coords(curv), tc = g1_coords(tw);
                for (std::size_t g = 0; g < g1; ++g) {
                    double v = dt1(g, a, b) + cc(static_cast<Eigen::Index>(g)) + tc(static_cast<Eigen::Index>(g));
                    rhs(g, a, b) = v;
                    rhs(g, b, a) = -v;
                    tw_max = std::max(tw_max, std::abs(tc(static_cast<Eigen::Index>(g))));
                }
                // R^n slot: d theta1 + tau1(a) theta1(b) - tau1(b) theta1(a)
                Eigen::VectorXd v = T1[a] * th.col(static_cast<Eigen::Index>(b)) - T1[b] * th.col(static_cast<Eigen::Index>(a));
                for (std::size_t i = 0; i < n; ++i) {
                    double x = dth(i, a, b) + v(static_cast<Eigen::Index>(i));
                    rhs(g1 + i, a, b) = x;
                    rhs(g1 + i, b, a) = -x;
                }
            }
        TwoForm top = lhs.rows(0, hs), lower = lhs.rows(hs, g1 + n);
        double r2 = R2.max_abs();
        top -= R2;
        lower -= rhs;
        return PointResult{top.max_abs(), lower.max_abs(), r2, tw_max};
    });
    SecondOrderSplitReport out;
    out.points = pts.size();
    double worst = -1;
    for (std::size_t i = 0; i < res.size(); ++i) {
        out.max_top_discrepancy = std::max(out.max_top_discrepancy, res[i].top);
        out.max_lower_discrepancy = std::max(out.max_lower_discrepancy, res[i].lower);
        out.max_R2 = std::max(out.max_R2, res[i].r2);
        out.max_tau2_wedge_theta1 = std::max(out.max_tau2_wedge_theta1, res[i].tw);
        double d = std::max(res[i].top, res[i].lower);
        if (d > worst) {
            worst = d;
            out.worst_point = pts[i];
        }
    }
    return out;
}

std::vector<std::vector<Eigen::VectorXd>> lie_bracket_frames(const FrameField& F, const Point& p, double h,
                                                             const ChartBox* box) {
    check_interior(box, p, h);
    const std::size_t n = F.n;
    if (p.size() != n) throw DimensionMismatch("lie_bracket_frames: point dimension");
    // J[a] column c = d_c V_a
    std::vector<Eigen::MatrixXd> J(n, Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    Point q = p;
    for (std::size_t c = 0; c < n; ++c) {
        q[c] = p[c] + h;
        Eigen::MatrixXd plus = F.eval(q);
        q[c] = p[c] - h;
        Eigen::MatrixXd minus = F.eval(q);
        q[c] = p[c];
        Eigen::MatrixXd d = (plus - minus) / (2 * h);
        for (std::size_t a = 0; a < n; ++a) J[a].col(static_cast<Eigen::Index>(c)) = d.col(static_cast<Eigen::Index>(a));
    }
    Eigen::MatrixXd V = F.eval(p);
    std::vector<std::vector<Eigen::VectorXd>> table(n, std::vector<Eigen::VectorXd>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            table[a][b] = J[b] * V.col(static_cast<Eigen::Index>(a)) - J[a] * V.col(static_cast<Eigen::Index>(b));
    return table;
}

IntegrabilityReport k_integrability_witness(const FrameField& F, const AlmostLieAlgebra& k, const ChartBox& box,
                                            const SweepOptions& opt) {
    const std::size_t n = F.n;
    if (k.dim() != n) throw DimensionMismatch("k_integrability: dim k must equal the number of fields");
    NumericAlgebra nk(k);
    auto pts = box.grid_points();
    // Per point: residual per pair (a<b), row-major.
    auto res = sweep<std::vector<double>>(pts.size(), opt.threads, [&](std::size_t idx) {
        const Point& p = pts[idx];
        Eigen::MatrixXd V = F.eval(p);
        if (std::abs(V.determinant()) < 1e-8) throw DegenerateFrame(p, "frame is degenerate at " + point_str(p));
        auto table = lie_bracket_frames(F, p, box.fd_step, &box);
        std::vector<double> r;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                Eigen::VectorXd expect = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < n; ++i) expect += nk.sc[(i * n + a) * n + b] * V.col(static_cast<Eigen::Index>(i));
                r.push_back((table[a][b] - expect).cwiseAbs().maxCoeff());
            }
        return r;
    });
    IntegrabilityReport out;
    out.points = pts.size();
    std::vector<double> pair_max(n * (n - 1) / 2, 0.0);
    double worst = -1;
    for (std::size_t i = 0; i < res.size(); ++i)
        for (std::size_t j = 0; j < res[i].size(); ++j) {
            pair_max[j] = std::max(pair_max[j], res[i][j]);
            if (res[i][j] > worst) {
                worst = res[i][j];
                out.worst_point = pts[i];
            }
        }
    out.max_residual = std::max(0.0, worst);
    out.pass = out.max_residual <= box.tol;
    if (!out.pass) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < pair_max.size(); ++j)
            if (pair_max[j] > pair_max[best]) best = j;
        std::size_t j = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b, ++j)
                if (j == best) out.witness = Pair{a + 1, b + 1};
    }
    return out;
}

double fd_convergence_ratio(const VForm1& form, const Point& p, double h) {
    TwoForm d1 = fd_d(form, p, h), d2 = fd_d(form, p, h / 2), d3 = fd_d(form, p, h / 4);
    TwoForm a = d1, b = d2;
    a -= d2;
    b -= d3;
    const double den = b.max_abs();
    if (den == 0) throw DomainError("fd_convergence_ratio: differences vanish (form is FD-exact)");
    return a.max_abs() / den;
}

}  // namespace cartanlab
