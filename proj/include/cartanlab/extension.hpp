#pragma once

#include "cartanlab/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cartanlab {

/// (g, V, rho, l) with l: g -> V equivariant.
struct PfaffianGroupData {
    AlmostLieAlgebra g;
    LinearRep rho;  ///< rep of g on V
    QMatrix l;      ///< V_dim x g.dim

    std::size_t v_dim() const { return rho.space_dim; }
};

/// Throws EquivarianceViolated(alpha, b) on the first basis pair with l(ad_alpha e_b) != rho(alpha) l(e_b).
void check_equivariance(const PfaffianGroupData& pf);

/// h = ker l. Throws EquivarianceViolated; asserts h is an ideal.
Subspace symbol_ideal(const PfaffianGroupData& pf);

struct ImageW {
    Subspace W;
    QuotientAlgebra g_mod_h;
    QMatrix iso;  ///< g/h coordinates -> W coordinates, invertible
};
ImageW image_W(const PfaffianGroupData& pf);

struct TowerStage {
    AlmostLieAlgebra g;
    LinearRep rho;
    QMatrix l;
    Subspace W;
    Subspace kernel;  ///< ker(g -> gl(V/W))
};

struct ReductionTower {
    std::vector<TowerStage> stages;
    std::size_t order = 0;  ///< number of stages = steps + 1
};

ReductionTower reduction_tower(const PfaffianGroupData& pf);

/// 0 -> h -> Z -> V -> 0 as representations of an acting algebra.
struct RepExtension {
    AlmostLieAlgebra acting;
    LinearRep rep_h;
    LinearRep rep_Z;
    LinearRep rep_V;
    QMatrix i;  ///< Z_dim x h_dim
    QMatrix p;  ///< V_dim x Z_dim

    std::size_t h_dim() const { return rep_h.space_dim; }
    std::size_t z_dim() const { return rep_Z.space_dim; }
    std::size_t v_dim() const { return rep_V.space_dim; }
};

struct ExactnessReport {
    bool injective = true;
    bool surjective = true;
    bool exact = true;
    bool i_equivariant = true;
    bool p_equivariant = true;
    std::vector<std::string> failures;

    bool ok() const { return injective && surjective && exact && i_equivariant && p_equivariant; }
};

ExactnessReport check_exact(const RepExtension& ext);

/// True iff M rho_src(alpha) = rho_dst(alpha) M for every basis alpha.
bool is_equivariant_map(const QMatrix& m, const LinearRep& src, const LinearRep& dst);

struct CartanTypeExtension {
    RepExtension ext;
    AlmostLieAlgebra h_alg;
    AlmostLieAlgebra z_alg;
    QMatrix h_in_acting;  ///< embedding of h into the acting algebra (acting.dim x h_dim)
};

/// Validates shapes and that i is a bracket morphism; throws NotAMorphism with the witness pair.
void validate_cartan_type(const CartanTypeExtension& cte);

struct SplittingPair {
    QMatrix l;  ///< Z -> h
    QMatrix r;  ///< V -> Z
};

struct LeftSplitting {
    QMatrix l;
};
struct RightSplitting {
    QMatrix r;
};

/// Throws NotASplitting. Asserts the partner is equivariant iff the given map is.
SplittingPair complete_splitting(const RepExtension& ext, const LeftSplitting& given);
SplittingPair complete_splitting(const RepExtension& ext, const RightSplitting& given);

/// l i = id, p r = id, i l + r p = id.
bool is_splitting_pair(const RepExtension& ext, const SplittingPair& sp);

struct ReductiveReport {
    bool morphism = true;  ///< l([z1,z2]) = [l z1, l z2]_h
    std::optional<Pair> morphism_witness;
    bool action = true;  ///< alpha(v) = p([i alpha, r v])
    std::optional<Pair> action_witness;

    bool ok() const { return morphism && action; }
};

ReductiveReport check_reductive(const CartanTypeExtension& cte, const SplittingPair& sp);

/// h-action on V obtained through the embedding of h into the acting algebra.
LinearRep h_action_on_V(const CartanTypeExtension& cte);

/// [v,w]_k = p([r v, r w]_z). Throws NotReductive.
AlmostLieAlgebra induced_quotient_bracket(const CartanTypeExtension& cte, const SplittingPair& sp);

struct IsoReport {
    bool ok = true;
    std::optional<Pair> witness;
};

/// Checks z -> h |x k, z |-> (l z, p z) preserves brackets. Throws NotReductive.
IsoReport semidirect_iso_check(const CartanTypeExtension& cte, const SplittingPair& sp);

/// h |x k packaged as a Cartan-type extension acted on by h, with canonical splittings.
struct ModelExtension {
    CartanTypeExtension cte;
    SplittingPair splitting;
};
ModelExtension semidirect_extension(const AlmostLieAlgebra& h, const LinearRep& rep, const AlmostLieAlgebra& k);

/// Transports a Cartan-type extension along a change of basis of Z (new = P old).
ModelExtension change_z_basis(const ModelExtension& m, const QMatrix& P);

}  // namespace cartanlab
