#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "profusion/elemset.hpp"
#include "profusion/permutation.hpp"

namespace profusion {

using Elem = std::uint32_t;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// A finite permutation group with canonically indexed elements: index order is
// lexicographic order of image arrays, so the identity is always index 0.
//
// A group is either plain (all elements stored) or a direct product of plain
// factors acting on consecutive blocks of points. For a product the index of an
// element is the mixed-radix number formed from its factor indices, first
// factor most significant; this coincides with lexicographic order on the
// concatenated image arrays, so both representations share one canonical order.
class FiniteGroup : public std::enable_shared_from_this<FiniteGroup> {
public:
    static GroupPtr from_generators(std::size_t degree, std::vector<Permutation> gens,
                                    std::string name = {});
    // `elements` must be closed under composition; they are sorted here.
    static GroupPtr from_elements(std::size_t degree, std::vector<Permutation> elements,
                                  std::vector<Permutation> gens = {}, std::string name = {});
    static GroupPtr product(const std::vector<GroupPtr>& groups, std::string name = {});

    const std::string& name() const { return name_; }
    std::size_t degree() const { return degree_; }
    std::uint64_t order() const { return order_; }

    bool is_product() const { return !factors_.empty(); }
    std::size_t factor_count() const { return factors_.empty() ? 1 : factors_.size(); }
    GroupPtr factor(std::size_t k) const;
    std::size_t factor_offset(std::size_t k) const { return factors_.empty() ? 0 : offsets_[k]; }
    Elem coord(Elem x, std::size_t k) const;
    Elem from_coords(const std::vector<Elem>& coords) const;

    static constexpr Elem identity() { return 0; }
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }
    Elem pow(Elem a, std::uint64_t n) const;
    std::uint64_t element_order(Elem a) const;

    Permutation element(Elem a) const;
    std::optional<Elem> find(const Permutation& p) const;
    Elem index_of(const Permutation& p) const;

    const std::vector<Permutation>& generators() const { return gens_; }
    std::vector<Elem> generator_indices() const;

private:
    FiniteGroup() = default;
    void build_plain(std::vector<Permutation> elements);

    std::string name_;
    std::size_t degree_ = 1;
    std::uint64_t order_ = 1;
    std::vector<Permutation> gens_;

    // plain representation
    std::vector<Permutation> elems_;
    std::unordered_map<Permutation, Elem, PermutationHash> index_;
    std::vector<Elem> inverse_;
    std::vector<Elem> table_;

    // product representation
    std::vector<GroupPtr> factors_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint64_t> strides_;
};

// A subgroup of a FiniteGroup, stored as the sorted list of member indices.
class Subgroup {
public:
    Subgroup() = default;
    // `members` must be a subgroup; it is sorted here. `gens` may be empty, in
    // which case a small generating set is computed.
    Subgroup(GroupPtr parent, std::vector<Elem> members, std::vector<Elem> gens = {});

    const GroupPtr& parent() const { return parent_; }
    const FiniteGroup& group() const { return *parent_; }
    std::uint64_t order() const { return members_.size(); }
    const std::vector<Elem>& members() const { return members_; }
    const std::vector<Elem>& generators() const { return gens_; }
    bool contains(Elem x) const;
    bool is_subgroup_of(const Subgroup& o) const;
    std::uint64_t key() const { return key_; }
    std::string key_hex() const;

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.parent_ == b.parent_ && a.members_ == b.members_;
    }

private:
    GroupPtr parent_;
    std::vector<Elem> members_;
    std::vector<Elem> gens_;
    std::uint64_t key_ = 0;
};

// A homomorphism between FiniteGroups (not necessarily injective).
class GroupMap {
public:
    GroupMap() = default;
    GroupMap(GroupPtr src, GroupPtr dst, std::function<Elem(Elem)> fn)
        : src_(std::move(src)), dst_(std::move(dst)), fn_(std::move(fn)) {}
    Elem operator()(Elem x) const { return fn_(x); }
    const GroupPtr& source() const { return src_; }
    const GroupPtr& target() const { return dst_; }

private:
    GroupPtr src_, dst_;
    std::function<Elem(Elem)> fn_;
};

std::uint64_t p_part(std::uint64_t n, unsigned p);
bool is_prime(unsigned p);
bool is_power_of(std::uint64_t n, unsigned p);

Subgroup subgroup_generated(const GroupPtr& G, const std::vector<Elem>& elems);
Subgroup whole_group(const GroupPtr& G);
Subgroup trivial_subgroup(const GroupPtr& G);
Subgroup intersection(const Subgroup& A, const Subgroup& B);
Subgroup image(const GroupMap& f, const Subgroup& P);
Subgroup kernel(const GroupMap& f);

Subgroup normalizer(const GroupPtr& G, const Subgroup& P);
Subgroup centralizer(const GroupPtr& G, const Subgroup& P);
// {g in G : g P g^-1 <= Q}, ascending.
std::vector<Elem> transporter(const GroupPtr& G, const Subgroup& P, const Subgroup& Q);
bool is_normal(const GroupPtr& G, const Subgroup& N);

Subgroup sylow_p(const GroupPtr& G, unsigned p);

// Complete list of subgroups, ordered by (order, member list). Accepts p-groups
// up to Caps::p_group_order and other groups up to Caps::general_lattice_order.
std::vector<Subgroup> all_subgroups(const Subgroup& P);
// All p-subgroups of G (including the trivial one), same ordering.
std::vector<Subgroup> p_subgroups(const GroupPtr& G, unsigned p);

struct ProductGroup {
    GroupPtr group;
    std::vector<GroupMap> projections;
    std::vector<GroupMap> embeddings;
};
ProductGroup direct_product(const std::vector<GroupPtr>& groups);

struct QuotientGroup {
    GroupPtr group;
    GroupMap projection;
};
QuotientGroup quotient_group(const GroupPtr& G, const Subgroup& N);

enum class Connectivity { connected, disconnected, empty };
const char* to_string(Connectivity c);
Connectivity quillen_poset_connected(const GroupPtr& G, unsigned p);

namespace detail {
// Lattice enumeration on a group small enough for ElemSets over all elements.
std::vector<ElemSet> enumerate_p_subgroups(const FiniteGroup& G, unsigned p,
                                           std::vector<std::vector<Elem>>* gens_out = nullptr);
std::vector<ElemSet> enumerate_subgroups(const FiniteGroup& G);
ElemSet closure(const FiniteGroup& G, const std::vector<Elem>& gens);
void sort_lattice(std::vector<ElemSet>& sets, std::vector<std::vector<Elem>>* gens);
std::uint64_t hash_members(const std::vector<Elem>& members);
}  // namespace detail

}  // namespace profusion
