#pragma once
// Spec-file ingestion and JSON/TSV reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "profusion/alperin.hpp"
#include "profusion/fusion.hpp"
#include "profusion/tower.hpp"

namespace profusion {

using ojson = nlohmann::ordered_json;

// { "name", "degree", "prime", "generators": [[cycles]], optional "sylow" }
// or { "name", "prime", "product": [group specs] } for direct products.
struct GroupSpec {
    std::string name;
    unsigned p = 2;
    GroupPtr G;
    Subgroup S;
    std::vector<GroupSpec> factors;  // product specs only
};

// P by generators; then either a conjugating element g, or an index into
// Emb(P) in canonical (sorted table) order. Optional "P'" generators are
// checked against the image.
struct MorphismSelector {
    std::vector<Permutation> P;
    std::vector<Permutation> P_image;
    std::optional<Permutation> g;
    std::size_t index = 0;
};

struct TowerSpec {
    GroupSpec group;
    std::vector<std::vector<Permutation>> normals;     // descending, last trivial
    std::vector<std::vector<Permutation>> subsystems;  // generators of H_i
    std::optional<MorphismSelector> morphism;
};

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);
std::uint64_t table_hash(const Table& t);

std::string read_file(const std::string& path);
// Parse errors name the offending field, e.g. "generators[1][0]".
GroupSpec parse_group_spec(const ojson& j, const std::string& where = "");
std::optional<MorphismSelector> parse_morphism(const ojson& j, std::size_t degree, const std::string& where);
TowerSpec parse_tower_spec(const ojson& j);
ojson parse_json_text(const std::string& text, const std::string& path);

// Elements of a permutation list inside G (InputError if not in G).
std::vector<Elem> elements_of(const GroupPtr& G, const std::vector<Permutation>& perms, const std::string& what);
Subgroup subgroup_of(const GroupPtr& G, const std::vector<Permutation>& gens, const std::string& what);
FusionMorphism select_morphism(const RealizedSystem& F, const MorphismSelector& sel);

ojson subgroup_json(const SubgroupLattice& L, SubId P);
ojson table_json(const Table& t);
ojson chain_json(const FusionSystem& E, const AlperinChain& c, const FusionMorphism& phi);

ojson group_report(const GroupSpec& g);
ojson fusion_report(const FusionSystem& F);
ojson saturation_report(const FusionSystem& F, std::uint64_t seed);
ojson essentials_report(const FusionSystem& F);
ojson decompose_report(const FusionSystem& F, const FusionMorphism& phi);
ojson length_report(const FusionSystem& F, const FusionMorphism& phi, AlpVariant v);
ojson product_report(const std::vector<GroupSpec>& specs, const std::vector<MorphismSelector>& sels,
                     bool open_variant);
ojson tower_report(const TowerSpec& spec);

// One row per subgroup (fusion, essentials) or per class (saturation).
std::string fusion_tsv(const FusionSystem& F);
std::string saturation_tsv(const FusionSystem& F);
std::string essentials_tsv(const FusionSystem& F);

}  // namespace profusion
