#pragma once

#include <optional>
#include <string>
#include <vector>

#include "profusion/fusion.hpp"
#include "profusion/saturation.hpp"

namespace profusion {

// C_T(Q') <= Z(Q') for every Q' in the E-class of Q.
bool is_centric(const FusionSystem& E, SubId Q);

// Aut_{T n Q}(Q) inside A.group.
Subgroup aut_T_cap_Q(const FusionSystem& E, const AutGroup& A);
// Intersection of the Sylow p-subgroups of G.
Subgroup o_p(const GroupPtr& G, unsigned p);

struct EssentialInfo {
    SubId Q = 0;
    bool contains_T = false;
    bool centric = false;
    bool radical = false;
    bool essential = false;
    // Quillen poset of Aut_E(Q)/Aut_{T n Q}(Q); only computed for centric Q.
    std::optional<Connectivity> quillen;
};
EssentialInfo essential_info(const FusionSystem& E, SubId Q);
bool is_radical(const FusionSystem& E, SubId Q);
bool is_essential(const FusionSystem& E, SubId Q);
// Includes every Q containing T (so S itself), ascending SubId.
std::vector<SubId> essential_subgroups(const FusionSystem& E);

struct AlperinStep {
    SubId Q = 0;
    Table phi;  // automorphism of Q
};

struct AlperinChain {
    SubId P0 = 0;
    std::vector<AlperinStep> steps;
    // Steps with Q != S.
    std::size_t length(const SubgroupLattice& L) const;
};

// Composite of the chain on P0; nullopt if some running image leaves its Q.
std::optional<Table> recompose(const SubgroupLattice& L, const AlperinChain& c);

struct ChainCheck {
    bool valid = true;       // containments hold and every step is in Aut_E(Q)
    bool recomposes = true;  // composite equals phi
    bool essential = true;
    bool fully_normalized = true;
    std::string reason;
};
ChainCheck check_chain(const FusionSystem& E, const AlperinChain& c, const FusionMorphism& phi);

// Chain with every Q essential and fully normalized in E, following the
// inductive proof of the relative fusion theorem. E must be a saturated
// T-subsystem (E = F allowed). Throws NotSaturated when a search fails.
AlperinChain alperin_decompose(const FusionSystem& E, const FusionMorphism& phi);
AlperinChain refine_to_essential(const FusionSystem& E, const AlperinChain& c);

enum class AlpVariant { open, closed, essential };
const char* to_string(AlpVariant v);

struct AlpResult {
    std::optional<std::size_t> length;  // nullopt: no chain
    AlperinChain chain;                  // a shortest chain
    std::size_t states = 0;
};
// Minimum chain length by 0/1-BFS over maps out of P; steps on S cost 0.
// For finite S every subgroup is open, so open and closed coincide.
AlpResult alp_length(const FusionSystem& F, const FusionMorphism& phi, AlpVariant v);

// Products. `factors[k]` is the realized system of factor k of Fp's ambient
// product group, on the matching factor of Fp's Sylow subgroup.
SubId product_subgroup_local(const RealizedSystem& Fp, const std::vector<const RealizedSystem*>& factors,
                             const std::vector<SubId>& parts);
FusionMorphism product_morphism(const RealizedSystem& Fp,
                                const std::vector<const RealizedSystem*>& factors,
                                const std::vector<FusionMorphism>& phis);
SubId project_to_factor(const RealizedSystem& Fp, const RealizedSystem& Fk, std::size_t k, SubId P);

// O_p(N_G(P)) = P in the ambient group.
bool is_group_radical(const RealizedSystem& F, SubId P);

struct ProductSplitReport {
    SubId P = 0, Q = 0, R = 0;  // Q, R in the factor lattices
    bool is_product = false;
    bool radical = false;
    bool factors_radical = false;
    bool essential = false;
    bool factors_essential = false;
    bool p_divides_both = false;
    bool one_factor_sylow = false;
    bool holds = true;
};
ProductSplitReport product_radical_split(const RealizedSystem& Fp, const RealizedSystem& FA,
                                         const RealizedSystem& FB, SubId P);

struct ProductLengthReport {
    std::vector<std::size_t> alp, alp_ess;  // per factor
    std::optional<std::size_t> alp_prod;   // skipped when the open sweep is off
    std::size_t alp_ess_prod = 0;
    bool sum_bound = true;   // sum >= Alp(prod) >= sup
    bool closed_is_sup = true;
    bool ess_is_sum = true;
    bool holds() const { return sum_bound && closed_is_sup && ess_is_sum; }
};
ProductLengthReport product_length_laws(const RealizedSystem& Fp,
                                        const std::vector<const RealizedSystem*>& factors,
                                        const std::vector<FusionMorphism>& phis, bool open_variant);

}  // namespace profusion
