#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "profusion/fusion.hpp"

namespace profusion {

// Aut_F(Q) as a permutation group on the positions of Q's sorted elements.
// Element i of `group` is tables[i] (both orders are lexicographic).
struct AutGroup {
    SubId Q = 0;
    std::vector<Table> tables;
    GroupPtr group;

    Elem index_of(const Table& t) const;
    std::optional<Elem> find(const Table& t) const;
    std::vector<Table> tables_of(const Subgroup& K) const;
};
using AutPtr = std::shared_ptr<const AutGroup>;

AutPtr aut_group(const FusionSystem& F, SubId Q);
std::vector<Table> conjugate_tables(const SubgroupLattice& L, SubId Q, const std::vector<Table>& K,
                                    const Table& phi);

// All saturation notions are relative to T = F.T(); for an ordinary fusion
// system T = S and they are the absolute ones.
SubId N_T(const FusionSystem& F, SubId Q);        // N_T(Q)
SubId N_T_Q(const FusionSystem& F, SubId Q);      // N_T(Q)Q
Subgroup aut_T(const FusionSystem& F, const AutGroup& A);
Subgroup aut_T_K(const FusionSystem& F, const AutGroup& A, const Subgroup& K);
SubId N_T_K(const FusionSystem& F, SubId Q, const std::vector<Table>& K);
SubId N_T_K(const FusionSystem& F, const AutGroup& A, const Subgroup& K);

// N_phi^T for an isomorphism phi: R -> Q of F.
SubId compute_N_phi(const FusionSystem& F, SubId R, const Table& phi);

// An extension of the isomorphism phi: R -> Q to N_phi with image in
// N_T(Q)Q, first in the order of Emb(N_phi).
std::optional<FusionMorphism> receptive_extension(const FusionSystem& F, SubId R, const Table& phi);

struct NphiWitness {
    FusionMorphism phi;
    SubId N_phi = 0;
    std::optional<FusionMorphism> extension;
};

struct ReceptiveReport {
    bool receptive = true;
    std::size_t checked = 0;
    std::vector<NphiWitness> witnesses;  // filled when requested
    std::optional<NphiWitness> failure;
};
ReceptiveReport is_receptive(const FusionSystem& F, SubId Q, bool keep_witnesses = false);

bool is_fully_K_automized(const FusionSystem& F, const AutGroup& A, const Subgroup& K);
bool is_fully_K_normalized(const FusionSystem& F, const AutGroup& A, const Subgroup& K);
bool is_fully_normalized(const FusionSystem& F, SubId Q);
bool is_fully_centralized(const FusionSystem& F, SubId Q);

// Memoized saturation queries on one system.
class SaturationCache {
public:
    explicit SaturationCache(const FusionSystem& F) : F_(F) {}
    const FusionSystem& system() const { return F_; }
    AutPtr aut(SubId Q) const;
    bool fully_normalized(SubId Q) const;

private:
    const FusionSystem& F_;
    mutable std::mutex mu_;
    mutable std::map<SubId, AutPtr> aut_;
    mutable std::map<SubId, bool> fn_;
};

struct Representative {
    SubId R = 0;
    FusionMorphism psi;  // P -> R
};
// Class member that is fully normalized, preferring P itself, then the
// largest N_T(R)R, then the smallest canonical key. Throws NotFound if the
// class has none.
Representative fully_normalized_representative(const FusionSystem& F, SubId P,
                                               const SaturationCache* cache = nullptr);

struct ClassReport {
    std::vector<SubId> members;
    std::optional<SubId> fully_normalized;
};
struct SaturationReport {
    bool saturated = true;
    std::vector<ClassReport> classes;
    std::vector<std::size_t> failing_classes;
};
// F-isomorphism classes, in order of their smallest member.
std::vector<std::vector<SubId>> iso_classes(const FusionSystem& F);
SaturationReport is_saturated(const FusionSystem& F, const SaturationCache* cache = nullptr);
// Only the classes inside `family`, which must be a union of classes.
SaturationReport is_saturated_on(const FusionSystem& F, const std::function<bool(SubId)>& family,
                                 const SaturationCache* cache = nullptr);

struct KNormalReport {
    bool applicable = false;  // the class has a fully normalized member
    bool normalized = false;  // Q fully K-normalized
    bool surjective = false;  // phi(N^K(Q)) = N^{phi K}(phi Q) for all phi on N^K(Q)Q
    bool maximal = false;     // |N^K(Q)Q/Q| maximal in the class
    bool agree() const { return !applicable || (normalized == surjective && surjective == maximal); }
};
KNormalReport check_k_normalized(const FusionSystem& F, const AutGroup& A, const Subgroup& K);

// Given Q fully K-automized and L <= K, some kappa in K with Q fully
// kappa L kappa^-1 -automized (index into A.group).
std::optional<Elem> k_automizer_search(const FusionSystem& F, const AutGroup& A, const Subgroup& K,
                                   const Subgroup& Lsub);

// Given Q fully K-normalized and phi: R -> Q, a morphism psi on
// N_T^{phi^-1 K}(R)R into N_T^K(Q)Q and chi in K with psi|_R = chi phi.
struct EquivFnormWitness {
    FusionMorphism psi;
    Table chi;
};
std::optional<EquivFnormWitness> equiv_fnorm_search(const FusionSystem& F, const AutGroup& A,
                                                    const Subgroup& K, SubId R, const Table& phi);

// For Q fully K-normalized: every phi on N_T^K(Q)Q sends Q to a fully
// (phi K)-normalized subgroup. Returns the number of maps checked, or nullopt
// with a failure.
std::optional<std::size_t> k_normal_image_check(const FusionSystem& F, const AutGroup& A,
                                         const Subgroup& K);

struct QuotientReport {
    bool images_fully_normalized = true;
    bool quotient_saturated = true;
    std::size_t checked = 0;
};
QuotientReport quotient_preserves(const FusionSystem& F, SubId N);

// Subgroups of A.group used for K-sweeps: 1, Aut_T(Q), Aut_F(Q), and one
// intermediate subgroup chosen with the given seed when one exists.
std::vector<std::pair<std::string, Subgroup>> k_sweep(const FusionSystem& F, const AutGroup& A,
                                                      std::uint64_t seed, bool intermediate);

}  // namespace profusion
