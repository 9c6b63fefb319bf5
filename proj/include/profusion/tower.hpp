#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "profusion/alperin.hpp"
#include "profusion/config.hpp"
#include "profusion/fusion.hpp"
#include "profusion/saturation.hpp"

namespace profusion {

// No level i admits a factoring map for some target level (the input was not a
// morphism of towers).
class NoFactoring : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

class StageFailure : public IntegrityError {
public:
    StageFailure(std::size_t stage, const std::string& what)
        : IntegrityError("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
    std::size_t stage() const { return stage_; }

private:
    std::size_t stage_;
};

// A finite inverse system F_1 <- F_2 <- ... <- F_d. Levels are 0-based in
// code. At finite depth the thread group of S_1 x ... x S_d is identified with
// S_d (a thread is determined by its top coordinate), so the limit lattice is
// the top lattice and N_{d-1} = 1.
struct Tower {
    std::vector<SystemPtr> levels;
    // Ambient groups and S_i -> G_i for realized towers (empty otherwise).
    std::vector<GroupPtr> groups;
    std::vector<GroupMap> group_maps;  // G_{i+1} -> G_i, when known
    // conn[i][j] : S_j -> S_i for j >= i, local indices; conn[i][i] = id.
    std::vector<std::vector<std::vector<Elem>>> conn;
    std::vector<SubId> kernels;  // N_i = ker(S_d -> S_i), in the top lattice
    std::string name;

    std::size_t depth() const { return levels.size(); }
    const FusionSystem& level(std::size_t i) const { return *levels[i]; }
    const FusionSystem& top() const { return *levels.back(); }
    const SubgroupLattice& limit_lattice() const { return top().lattice(); }
    const std::vector<Elem>& to_level(std::size_t i) const { return conn[i].back(); }
    // f_i(P) for P in the top lattice.
    SubId project(std::size_t i, SubId P) const;
};

// maps[i] : S_{i+1} -> S_i. Checks that each map is a homomorphism; with
// `verify` also that it is a morphism of fusion systems.
Tower make_tower(std::vector<SystemPtr> levels, const std::vector<std::vector<Elem>>& maps,
                 std::string name = "tower", bool verify = true);

// Levels F_{S/S n N_i}(G/N_i) for N_0 >= N_1 >= ... >= N_{d-1} = 1, all normal
// in G. When G is a product and every N_i is a product of whole and trivial
// factors, G/N_i is taken to be the product of the remaining factors.
Tower tower_from_group(const GroupPtr& G, const Subgroup& S, unsigned p,
                       const std::vector<Subgroup>& normals, std::string name = "tower");
// The tower of (G_0 x ... x G_{n-1}) with level i the product of the first i+1
// factors.
Tower product_tower(const std::vector<GroupPtr>& factors, const std::vector<Subgroup>& sylows,
                    unsigned p);

// Morphisms of F_j induced into level i; nullopt when not well defined.
std::optional<FusionMorphism> push_down(const Tower& T, std::size_t i, std::size_t j,
                                        const FusionMorphism& phi);

// A compatible family phi_0, ..., phi_{d-1} with phi_i in F_i.
struct ProMorphism {
    std::vector<FusionMorphism> levels;
    const FusionMorphism& limit() const { return levels.back(); }
    friend bool operator==(const ProMorphism&, const ProMorphism&) = default;
    friend auto operator<=>(const ProMorphism&, const ProMorphism&) = default;
};
// Threads out of P (top lattice) into the limit S, by fiber products from
// level 0 upward. Sorted by limit table.
std::vector<ProMorphism> pro_emb(const Tower& T, SubId P);
std::vector<ProMorphism> pro_hom(const Tower& T, SubId P, SubId Q);
// Same set by enumerating all tuples of level maps.
std::vector<ProMorphism> pro_hom_brute(const Tower& T, SubId P, SubId Q);
ProMorphism thread_of(const Tower& T, const FusionMorphism& top);
bool is_thread(const Tower& T, const ProMorphism& f);

// The limit system: Emb(P) = limit coordinates of pro_emb(T, P). Lazy.
SystemPtr limit_system(const Tower& T);

struct TowerMorphism {
    const Tower* source = nullptr;
    const Tower* target = nullptr;
    std::vector<Elem> alpha;  // limit S -> limit S'
};
struct ContinuityReport {
    std::vector<std::size_t> level_for;          // target level j -> source level i
    std::vector<std::vector<Elem>> factoring;    // A_{i,j} : S_i -> S'_j
};
// Throws NoFactoring if some target level has no factoring map.
ContinuityReport check_continuity(const TowerMorphism& phi);

// Generated system on S_i of the maps of F_j pushed down to level i.
SystemPtr image_system(const Tower& T, std::size_t i, std::size_t j);
// Least j >= i with F_{i,j}(F_j) = F_{i,k}(F_k) for all j <= k < d.
std::size_t stable_image(const Tower& T, std::size_t i);
bool is_pro_saturated(const Tower& T);

struct QuotientCheck {
    SubId N = 0;
    bool generated_is_quotient = false;  // <F-bar_N> = F/N
    std::optional<FusionMorphism> witness;
};
struct OscReport {
    std::vector<QuotientCheck> quotients;
    bool reconstructs = false;
    std::string diff;
    bool all_generated_equal() const;
};
// Strongly closed N of the limit containing some N_i.
OscReport osc_quotient_tower(const Tower& T);

struct LevelSaturation {
    std::size_t level = 0;
    SubId N = 0;
    bool saturated = false;  // on classes of subgroups containing N_i
};
struct DepthSaturationReport {
    std::vector<LevelSaturation> open;
    bool open_ok = false;
    bool all_ok = false;
};
DepthSaturationReport saturation_at_depth(const Tower& T);

struct SylowLimitReport {
    bool compatible = false;
    std::vector<bool> level_sylow;
    bool limit_sylow = false;
};
// Needs a realized tower (groups present); `group_maps[i]` : G_{i+1} -> G_i.
SylowLimitReport sylow_limit_check(const Tower& T, const std::vector<GroupMap>& group_maps);

// Subsystems E^0 >= E^1 >= ... of the limit system, on the limit lattice.
struct SubsystemSequence {
    std::vector<SystemPtr> systems;
};

struct Stage {
    std::size_t level = 0;      // kernel index used, N = N_level
    SubId N = 0;
    FusionMorphism psi;         // extension in E^i, restricted to the current domain
    AlperinChain chain;         // in E^i, for psi
    FusionMorphism residual;    // theta_{i+1}
    bool residual_in_next = false;
    bool residual_mod_T = false;  // theta_{i+1}(u) u^-1 in T^{i+1}
};
struct StagedChain {
    std::vector<Stage> stages;
    AlperinChain chain;  // concatenation
    bool final_is_inclusion = false;
    bool recomposes = false;
};
StagedChain convergent_alperin(const Tower& T, const SubsystemSequence& seq, const FusionMorphism& phi);

// Least i such that every theta in Hom_{E^i}(P, S) is the identity modulo N.
std::optional<std::size_t> trivial_mod_index(const SubsystemSequence& seq, SubId P, SubId N);

struct LimitLengthReport {
    std::vector<std::size_t> per_level;
    std::size_t sup = 0;
    std::size_t limit = 0;
    bool bound = false;          // limit <= sup
    bool nondecreasing = false;
};
LimitLengthReport limitlength_check(const Tower& T, const ProMorphism& phi);

}  // namespace profusion
