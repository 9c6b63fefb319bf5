#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "profusion/group.hpp"
#include "profusion/lattice.hpp"

namespace profusion {

// An injective homomorphism from `domain` into `codomain`, both subgroups of S.
// Two morphisms are equal iff domain, codomain and table agree.
struct FusionMorphism {
    SubId domain = 0;
    SubId codomain = 0;
    Table table;

    friend bool operator==(const FusionMorphism&, const FusionMorphism&) = default;
    friend auto operator<=>(const FusionMorphism&, const FusionMorphism&) = default;
};

enum class SystemKind { realized, relative, generated, quotient, explicit_maps, limit };
const char* to_string(SystemKind k);

// All morphisms out of one subgroup P, as maps into S, sorted by table.
struct Embeddings {
    std::vector<Table> maps;
    std::vector<SubId> images;
};

// A fusion system on a finite p-group S. Morphism sets are represented by
// Emb(P) = Hom(P, S) for every P; Hom(P, Q) is the part of Emb(P) with image
// inside Q, tagged with codomain Q.
//
// T is the strongly closed subgroup a subsystem is relative to; for an
// ordinary fusion system T = S and all relative notions reduce to the
// absolute ones.
class FusionSystem {
public:
    FusionSystem(LatticePtr L, SystemKind kind, SubId T, std::string name);
    virtual ~FusionSystem() = default;
    FusionSystem(const FusionSystem&) = delete;
    FusionSystem& operator=(const FusionSystem&) = delete;

    const SubgroupLattice& lattice() const { return *L_; }
    const LatticePtr& lattice_ptr() const { return L_; }
    const FiniteGroup& S() const { return L_->group(); }
    unsigned prime() const { return L_->prime(); }
    SystemKind kind() const { return kind_; }
    SubId T() const { return T_; }
    const std::string& name() const { return name_; }

    // Memoized Emb(P). The fill is idempotent, so concurrent callers see the
    // same result.
    const Embeddings& embeddings(SubId P) const;
    // Emb(P) without storing it (uses the memo if already present).
    Embeddings embeddings_uncached(SubId P) const;
    bool has_map(SubId P, const Table& t) const;
    bool contains(const FusionMorphism& f) const;

    std::vector<FusionMorphism> hom_set(SubId P, SubId Q) const;
    std::vector<FusionMorphism> iso_set(SubId P, SubId Q) const;
    std::vector<Table> automorphisms(SubId Q) const;
    std::vector<SubId> iso_class(SubId P) const;
    std::size_t morphism_count() const;

protected:
    virtual Embeddings compute_embeddings(SubId P) const = 0;
    void set_T(SubId T) { T_ = T; }

private:
    LatticePtr L_;
    SystemKind kind_;
    SubId T_;
    std::string name_;
    mutable std::mutex mu_;
    mutable std::vector<std::shared_ptr<const Embeddings>> cache_;
};

using SystemPtr = std::shared_ptr<const FusionSystem>;

// F_S(G), or E_S(H) for H normal in G.
class RealizedSystem : public FusionSystem {
public:
    RealizedSystem(GroupPtr G, Subgroup S, std::optional<Subgroup> H, unsigned p, LatticePtr L);

    const GroupPtr& ambient() const { return G_; }
    const Subgroup& sylow() const { return Sg_; }
    const std::optional<Subgroup>& conjugating_subgroup() const { return H_; }
    Elem global(Elem local) const { return Sg_.members()[local]; }
    std::optional<Elem> local(Elem global) const;
    // Conjugation by g in G, restricted to P; nullopt if gPg^-1 is not in S.
    std::optional<Table> conjugation(Elem g, SubId P) const;
    // Emb(P) restricted to maps with image exactly Q.
    std::vector<Table> maps_onto(SubId P, SubId Q) const;

protected:
    Embeddings compute_embeddings(SubId P) const override;

private:
    std::vector<std::vector<Elem>> conjugation_images(SubId P, const Subgroup& target) const;

    GroupPtr G_;
    Subgroup Sg_;
    std::optional<Subgroup> H_;
    // Per-factor candidate conjugators (factor-local indices) when the
    // conjugating set is a product of per-factor sets; otherwise `flat_`.
    std::vector<std::vector<Elem>> cand_;
    std::vector<Elem> flat_;
    bool use_flat_ = false;
    // prefix_[k] = first k+1 coordinates (as a mixed-radix number) of members of S.
    std::vector<std::unordered_set<std::uint64_t>> prefix_;
    std::vector<std::uint64_t> radix_, stride_;
};

// A system whose morphisms are given explicitly for every subgroup.
class ExplicitSystem : public FusionSystem {
public:
    ExplicitSystem(LatticePtr L, SystemKind kind, SubId T, std::vector<std::vector<Table>> maps,
                   std::string name);

protected:
    Embeddings compute_embeddings(SubId P) const override;

private:
    std::vector<std::vector<Table>> maps_;
};

std::shared_ptr<const RealizedSystem> realize(const GroupPtr& G, const Subgroup& S, unsigned p);
std::shared_ptr<const RealizedSystem> realize_subsystem(const GroupPtr& G, const Subgroup& S,
                                                        const Subgroup& H, unsigned p);
// Lattice reuse: realized systems on the same S may share one lattice.
std::shared_ptr<const RealizedSystem> realize(const GroupPtr& G, const Subgroup& S, unsigned p,
                                              LatticePtr L);
std::shared_ptr<const RealizedSystem> realize_subsystem(const GroupPtr& G, const Subgroup& S,
                                                        const Subgroup& H, unsigned p,
                                                        LatticePtr L);

// Snapshot of all morphism sets, as an explicit system.
std::vector<std::vector<Table>> all_maps(const FusionSystem& F);
std::shared_ptr<const ExplicitSystem> explicit_system(LatticePtr L, SubId T,
                                                      std::vector<std::vector<Table>> maps,
                                                      std::string name);

std::shared_ptr<const ExplicitSystem> generated_system(LatticePtr L,
                                                       const std::vector<FusionMorphism>& gens,
                                                       std::string name = "generated");

bool is_strongly_closed(const FusionSystem& F, SubId Q);
std::vector<SubId> strongly_closed_subgroups(const FusionSystem& F);
// For every x in S, the set of images of x under morphisms of F (sorted).
std::vector<std::vector<Elem>> element_fusion_orbits(const FusionSystem& F);

// S/N with its lattice and the projection S -> S/N in local indices.
struct QuotientContext {
    LatticePtr lattice;
    std::vector<Elem> projection;
    SubId N = 0;
};
QuotientContext quotient_context(const FusionSystem& F, SubId N);

// F/N: maps of S/N induced by morphisms defined on subgroups containing N.
std::shared_ptr<const ExplicitSystem> quotient_system(const FusionSystem& F, const QuotientContext& q);
std::shared_ptr<const ExplicitSystem> quotient_system(const FusionSystem& F, SubId N);
// The system on S/N generated by the maps induced by all morphisms of F.
std::shared_ptr<const ExplicitSystem> induced_image_system(const FusionSystem& F,
                                                           const QuotientContext& q);
std::shared_ptr<const ExplicitSystem> induced_image_system(const FusionSystem& F, SubId N);

FusionMorphism extend_over_N(const FusionSystem& F, const FusionMorphism& phi, SubId N);

// Morphism algebra on tables.
// outer is defined on Q, which must contain the image of inner.
Table compose(const SubgroupLattice& L, SubId Q, const Table& outer, const Table& inner);
Table restrict_table(const SubgroupLattice& L, SubId P, const Table& t, SubId R);
Table invert_table(const SubgroupLattice& L, SubId P, const Table& t);
bool is_homomorphism(const SubgroupLattice& L, SubId P, const Table& t);
bool is_injective(const Table& t);
FusionMorphism compose(const SubgroupLattice& L, const FusionMorphism& psi, const FusionMorphism& phi);
FusionMorphism inverse(const SubgroupLattice& L, const FusionMorphism& phi);
FusionMorphism restrict_to(const SubgroupLattice& L, const FusionMorphism& phi, SubId R);
FusionMorphism inclusion(const SubgroupLattice& L, SubId P, SubId Q);
SubId image_of(const SubgroupLattice& L, const FusionMorphism& phi);

struct Factorization {
    FusionMorphism iso;
    FusionMorphism incl;
};
Factorization factorize(const SubgroupLattice& L, const FusionMorphism& phi);

// For alpha: S1 -> S2 (local indices) and phi defined on P <= S1, the map
// alpha(u) -> alpha(phi(u)) on alpha(P); nullopt if ill defined or not injective.
std::optional<std::pair<SubId, Table>> induced_map(const SubgroupLattice& L1,
                                                   const SubgroupLattice& L2,
                                                   const std::vector<Elem>& alpha, SubId P,
                                                   const Table& phi);

struct FunctorCheck {
    bool ok = true;
    std::string reason;
    std::optional<FusionMorphism> witness;
    std::size_t checked = 0;
    // functor[P][i] = index in Emb_{F2}(alpha(P)) of A(i-th map of Emb_{F1}(P)).
    std::vector<std::vector<std::uint32_t>> functor;
};
FunctorCheck verify_system_morphism(const std::vector<Elem>& alpha, const FusionSystem& F1,
                                    const FusionSystem& F2, bool keep_table = true);

// Equality of all morphism sets of two systems on the same group.
bool same_morphisms(const FusionSystem& A, const FusionSystem& B, std::string* diff = nullptr);

}  // namespace profusion
