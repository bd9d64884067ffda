#include "cartanlab/extension.hpp"

#include "cartanlab/errors.hpp"

#include <stdexcept>

namespace cartanlab {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

QMatrix block_rows(const QMatrix& top, const QMatrix& bottom) {
    return hstack(top.transpose(), bottom.transpose()).transpose();
}

}  // namespace

void check_equivariance(const PfaffianGroupData& pf) {
    const auto& g = pf.g;
    if (pf.rho.algebra.dim() != g.dim()) throw DimensionMismatch("Pfaffian data: rho is not a rep of g");
    if (pf.l.rows() != pf.v_dim() || pf.l.cols() != g.dim()) throw DimensionMismatch("Pfaffian data: l has wrong shape");
    for (std::size_t a = 0; a < g.dim(); ++a)
        for (std::size_t b = 0; b < g.dim(); ++b) {
            QVec lhs = pf.l * g.basis_bracket(a, b);
            QVec rhs = pf.rho.matrices[a] * pf.l.col(b);
            if (lhs != rhs)
                throw EquivarianceViolated(a, b,
                                           "l is not equivariant: l([e" + idx(a) + ",e" + idx(b) + "]) != rho(e" +
                                               idx(a) + ") l(e" + idx(b) + ")");
        }
}

Subspace symbol_ideal(const PfaffianGroupData& pf) {
    check_equivariance(pf);
    Subspace h = kernel_of_linear_map(pf.l);
    if (!is_ideal(pf.g, h)) throw std::logic_error("kernel of an equivariant l is not an ideal");
    return h;
}

ImageW image_W(const PfaffianGroupData& pf) {
    Subspace h = symbol_ideal(pf);
    Subspace W = image_of_linear_map(pf.l);
    if (W.dim() != pf.g.dim() - h.dim()) throw std::logic_error("dim W != dim g - dim h");
    auto q = quotient(pf.g, h);
    QMatrix iso(W.dim(), q.complement.size());
    for (std::size_t j = 0; j < q.complement.size(); ++j) {
        auto c = W.coordinates(pf.l * q.complement[j]);
        for (std::size_t i = 0; i < W.dim(); ++i) iso(i, j) = (*c)[i];
    }
    if (rank(iso) != W.dim()) throw std::logic_error("induced map g/h -> W is not invertible");
    return ImageW{std::move(W), std::move(q), std::move(iso)};
}

ReductionTower reduction_tower(const PfaffianGroupData& pf) {
    check_equivariance(pf);
    ReductionTower tower;
    AlmostLieAlgebra g = pf.g;
    LinearRep rho = pf.rho;
    QMatrix l = pf.l;
    for (;;) {
        Subspace W = image_of_linear_map(l);
        auto vq = quotient_rep(rho, W);
        // Kernel of alpha -> rho(alpha) mod W, as a linear map g -> End(V/W).
        const std::size_t q = vq.rep.space_dim;
        QMatrix stacked(q * q, g.dim());
        for (std::size_t a = 0; a < g.dim(); ++a)
            for (std::size_t i = 0; i < q; ++i)
                for (std::size_t j = 0; j < q; ++j) stacked(i * q + j, a) = vq.rep.matrices[a](i, j);
        Subspace kern = kernel_of_linear_map(stacked);
        if (!is_ideal(g, kern)) throw std::logic_error("kernel of the quotient representation is not an ideal");
        tower.stages.push_back(TowerStage{g, rho, l, W, kern});
        if (kern.dim() == 0) break;

        auto gq = quotient(g, kern);
        std::vector<QMatrix> mats;
        for (const auto& c : gq.complement) mats.push_back(vq.rep.matrix_of(c));
        LinearRep next_rho(gq.algebra, q, std::move(mats));
        // l_i lands in W_i, so the induced map on the quotient stage vanishes.
        QMatrix next_l(q, gq.algebra.dim());
        g = gq.algebra;
        rho = std::move(next_rho);
        l = std::move(next_l);
    }
    tower.order = tower.stages.size();
    return tower;
}

bool is_equivariant_map(const QMatrix& m, const LinearRep& src, const LinearRep& dst) {
    if (src.algebra.dim() != dst.algebra.dim()) throw DimensionMismatch("equivariance: acting algebras differ");
    for (std::size_t a = 0; a < src.algebra.dim(); ++a)
        if (m * src.matrices[a] != dst.matrices[a] * m) return false;
    return true;
}

ExactnessReport check_exact(const RepExtension& ext) {
    ExactnessReport rep;
    if (ext.i.rows() != ext.z_dim() || ext.i.cols() != ext.h_dim())
        throw DimensionMismatch("extension: i has wrong shape");
    if (ext.p.rows() != ext.v_dim() || ext.p.cols() != ext.z_dim())
        throw DimensionMismatch("extension: p has wrong shape");
    const std::size_t ri = rank(ext.i), rp = rank(ext.p);
    if (ri != ext.h_dim()) {
        rep.injective = false;
        auto ker = kernel_of_linear_map(ext.i);
        rep.failures.push_back("i is not injective (kernel dimension " + std::to_string(ker.dim()) + ")");
    }
    if (rp != ext.v_dim()) {
        rep.surjective = false;
        auto img = image_of_linear_map(ext.p);
        for (std::size_t e = 0; e < ext.v_dim(); ++e)
            if (!img.contains(unit_vec(ext.v_dim(), e))) {
                rep.failures.push_back("p is not surjective: v" + idx(e) + " is not in the image");
                break;
            }
    }
    QMatrix pi = ext.p * ext.i;
    if (!pi.is_zero()) {
        rep.exact = false;
        for (std::size_t j = 0; j < pi.cols(); ++j)
            if (!is_zero(pi.col(j))) {
                rep.failures.push_back("p(i(h" + idx(j) + ")) != 0");
                break;
            }
    } else if (ri + rp != ext.z_dim()) {
        rep.exact = false;
        rep.failures.push_back("im(i) is strictly smaller than ker(p)");
    }
    if (!is_equivariant_map(ext.i, ext.rep_h, ext.rep_Z)) {
        rep.i_equivariant = false;
        rep.failures.push_back("i is not equivariant");
    }
    if (!is_equivariant_map(ext.p, ext.rep_Z, ext.rep_V)) {
        rep.p_equivariant = false;
        rep.failures.push_back("p is not equivariant");
    }
    return rep;
}

void validate_cartan_type(const CartanTypeExtension& cte) {
    const auto& e = cte.ext;
    if (cte.h_alg.dim() != e.h_dim() || cte.z_alg.dim() != e.z_dim())
        throw DimensionMismatch("Cartan-type extension: algebra dimensions do not match the sequence");
    if (cte.h_in_acting.rows() != e.acting.dim() || cte.h_in_acting.cols() != e.h_dim())
        throw DimensionMismatch("Cartan-type extension: embedding of h has wrong shape");
    for (std::size_t a = 0; a < e.h_dim(); ++a)
        for (std::size_t b = a + 1; b < e.h_dim(); ++b)
            if (e.i * cte.h_alg.basis_bracket(a, b) != bracket(cte.z_alg, e.i.col(a), e.i.col(b)))
                throw NotAMorphism("i is not a bracket morphism on (h" + idx(a) + ", h" + idx(b) + ")");
}

bool is_splitting_pair(const RepExtension& ext, const SplittingPair& sp) {
    if (sp.l.rows() != ext.h_dim() || sp.l.cols() != ext.z_dim()) return false;
    if (sp.r.rows() != ext.z_dim() || sp.r.cols() != ext.v_dim()) return false;
    return sp.l * ext.i == QMatrix::identity(ext.h_dim()) && ext.p * sp.r == QMatrix::identity(ext.v_dim()) &&
           ext.i * sp.l + sp.r * ext.p == QMatrix::identity(ext.z_dim());
}

SplittingPair complete_splitting(const RepExtension& ext, const LeftSplitting& given) {
    const QMatrix& l = given.l;
    if (l.rows() != ext.h_dim() || l.cols() != ext.z_dim()) throw NotASplitting("l has wrong shape");
    if (l * ext.i != QMatrix::identity(ext.h_dim())) throw NotASplitting("l o i != id_h");
    if (rank(ext.p) != ext.v_dim()) throw NotASplitting("p is not surjective");
    // Any right inverse s of p, corrected by (I - i l).
    auto s = solve(ext.p, QMatrix::identity(ext.v_dim()));
    QMatrix r = (QMatrix::identity(ext.z_dim()) - ext.i * l) * *s;
    SplittingPair sp{l, r};
    if (!is_splitting_pair(ext, sp)) throw NotASplitting("sequence is not exact; no partner for l");
    bool eq_given = is_equivariant_map(l, ext.rep_Z, ext.rep_h);
    bool eq_partner = is_equivariant_map(r, ext.rep_V, ext.rep_Z);
    if (eq_given != eq_partner) throw std::logic_error("partner equivariance differs from the given splitting");
    return sp;
}

SplittingPair complete_splitting(const RepExtension& ext, const RightSplitting& given) {
    const QMatrix& r = given.r;
    if (r.rows() != ext.z_dim() || r.cols() != ext.v_dim()) throw NotASplitting("r has wrong shape");
    if (ext.p * r != QMatrix::identity(ext.v_dim())) throw NotASplitting("p o r != id_V");
    if (rank(ext.i) != ext.h_dim()) throw NotASplitting("i is not injective");
    // Any left inverse t of i, applied after (I - r p).
    auto tt = solve(ext.i.transpose() * ext.i, ext.i.transpose());
    QMatrix l = *tt * (QMatrix::identity(ext.z_dim()) - r * ext.p);
    SplittingPair sp{l, r};
    if (!is_splitting_pair(ext, sp)) throw NotASplitting("sequence is not exact; no partner for r");
    bool eq_given = is_equivariant_map(r, ext.rep_V, ext.rep_Z);
    bool eq_partner = is_equivariant_map(l, ext.rep_Z, ext.rep_h);
    if (eq_given != eq_partner) throw std::logic_error("partner equivariance differs from the given splitting");
    return sp;
}

LinearRep h_action_on_V(const CartanTypeExtension& cte) {
    std::vector<QMatrix> mats;
    for (std::size_t a = 0; a < cte.h_alg.dim(); ++a) mats.push_back(cte.ext.rep_V.matrix_of(cte.h_in_acting.col(a)));
    return LinearRep(cte.h_alg, cte.ext.v_dim(), std::move(mats));
}

ReductiveReport check_reductive(const CartanTypeExtension& cte, const SplittingPair& sp) {
    validate_cartan_type(cte);
    const auto& e = cte.ext;
    if (!is_splitting_pair(e, sp)) throw NotASplitting("check_reductive: splitting pair is invalid");
    ReductiveReport rep;
    const std::size_t nz = e.z_dim();
    for (std::size_t a = 0; a < nz && rep.morphism; ++a)
        for (std::size_t b = a + 1; b < nz; ++b) {
            QVec lhs = sp.l * cte.z_alg.basis_bracket(a, b);
            QVec rhs = bracket(cte.h_alg, sp.l.col(a), sp.l.col(b));
            if (lhs != rhs) {
                rep.morphism = false;
                rep.morphism_witness = Pair{a, b};
                break;
            }
        }
    LinearRep act = h_action_on_V(cte);
    for (std::size_t a = 0; a < e.h_dim() && rep.action; ++a)
        for (std::size_t v = 0; v < e.v_dim(); ++v) {
            QVec lhs = act.matrices[a].col(v);
            QVec rhs = e.p * bracket(cte.z_alg, e.i.col(a), sp.r.col(v));
            if (lhs != rhs) {
                rep.action = false;
                rep.action_witness = Pair{a, v};
                break;
            }
        }
    return rep;
}

AlmostLieAlgebra induced_quotient_bracket(const CartanTypeExtension& cte, const SplittingPair& sp) {
    auto rr = check_reductive(cte, sp);
    if (!rr.ok()) throw NotReductive("extension is not reductive for the given splitting");
    const auto& e = cte.ext;
    const std::size_t nv = e.v_dim();
    std::vector<std::string> names;
    for (std::size_t v = 0; v < nv; ++v) names.push_back("k" + idx(v));
    auto k = AlmostLieAlgebra::from_brackets("k", std::move(names), [&](std::size_t v, std::size_t w) {
        return e.p * bracket(cte.z_alg, sp.r.col(v), sp.r.col(w));
    });
    for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t w = v + 1; w < nv; ++w)
            if (sp.r * k.basis_bracket(v, w) != bracket(cte.z_alg, sp.r.col(v), sp.r.col(w)))
                throw std::logic_error("r is not a bracket morphism although the extension is reductive");
    return k;
}

IsoReport semidirect_iso_check(const CartanTypeExtension& cte, const SplittingPair& sp) {
    AlmostLieAlgebra k = induced_quotient_bracket(cte, sp);
    AlmostLieAlgebra target = semidirect(cte.h_alg, h_action_on_V(cte), k);
    QMatrix phi = block_rows(sp.l, cte.ext.p);
    IsoReport rep;
    if (rank(phi) != phi.rows()) {
        rep.ok = false;
        return rep;
    }
    const std::size_t nz = cte.z_alg.dim();
    for (std::size_t a = 0; a < nz; ++a)
        for (std::size_t b = a + 1; b < nz; ++b)
            if (phi * cte.z_alg.basis_bracket(a, b) != bracket(target, phi.col(a), phi.col(b))) {
                rep.ok = false;
                rep.witness = Pair{a, b};
                return rep;
            }
    return rep;
}

ModelExtension semidirect_extension(const AlmostLieAlgebra& h, const LinearRep& rep, const AlmostLieAlgebra& k) {
    AlmostLieAlgebra z = semidirect(h, rep, k);
    const std::size_t m = h.dim(), n = k.dim(), N = m + n;
    QMatrix i(N, m), p(n, N), l(m, N), r(N, n);
    for (std::size_t a = 0; a < m; ++a) i(a, a) = l(a, a) = 1;
    for (std::size_t v = 0; v < n; ++v) p(v, m + v) = r(m + v, v) = 1;
    std::vector<QMatrix> zmats;
    for (std::size_t a = 0; a < m; ++a) zmats.push_back(z.ad(a));
    RepExtension ext{h, adjoint_rep(h), LinearRep(h, N, std::move(zmats)), LinearRep(h, n, rep.matrices), i, p};
    CartanTypeExtension cte{std::move(ext), h, std::move(z), QMatrix::identity(m)};
    return ModelExtension{std::move(cte), SplittingPair{l, r}};
}

ModelExtension change_z_basis(const ModelExtension& m, const QMatrix& P) {
    auto Pinv = inverse(P);
    if (!Pinv) throw DimensionMismatch("change_z_basis: matrix is singular");
    const auto& z = m.cte.z_alg;
    const std::size_t N = z.dim();
    auto z2 = AlmostLieAlgebra::from_brackets(z.name(), z.basis_names(), [&](std::size_t a, std::size_t b) {
        return P * bracket(z, Pinv->col(a), Pinv->col(b));
    });
    const auto& e = m.cte.ext;
    std::vector<QMatrix> zm;
    for (const auto& mat : e.rep_Z.matrices) zm.push_back(P * mat * *Pinv);
    RepExtension ext{e.acting, e.rep_h, LinearRep(e.acting, N, std::move(zm)), e.rep_V, P * e.i, e.p * *Pinv};
    CartanTypeExtension cte{std::move(ext), m.cte.h_alg, std::move(z2), m.cte.h_in_acting};
    return ModelExtension{std::move(cte), SplittingPair{m.splitting.l * *Pinv, P * m.splitting.r}};
}

}  // namespace cartanlab
