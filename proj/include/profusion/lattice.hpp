#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "profusion/group.hpp"

namespace profusion {

using SubId = std::uint32_t;

// Element images of a homomorphism out of a subgroup P of S: entry i is the
// image of the i-th smallest element of P, as an index into S.
using Table = std::vector<std::uint16_t>;

// The complete subgroup lattice of a finite p-group S (a plain FiniteGroup),
// with ids in the canonical (order, member list) order: id 0 is the trivial
// subgroup and the last id is S itself.
class SubgroupLattice {
public:
    SubgroupLattice(GroupPtr S, unsigned p);

    const GroupPtr& group_ptr() const { return S_; }
    const FiniteGroup& group() const { return *S_; }
    unsigned prime() const { return p_; }
    std::size_t size() const { return sets_.size(); }
    SubId trivial() const { return 0; }
    SubId whole() const { return static_cast<SubId>(sets_.size() - 1); }

    const ElemSet& set(SubId P) const { return sets_[P]; }
    const std::vector<Elem>& elements(SubId P) const { return elems_[P]; }
    const std::vector<Elem>& generators(SubId P) const { return gens_[P]; }
    std::size_t order(SubId P) const { return elems_[P].size(); }
    std::uint64_t key(SubId P) const { return keys_[P]; }
    std::string key_hex(SubId P) const;

    std::optional<SubId> find(const ElemSet& s) const;
    SubId id_of(const ElemSet& s) const;
    SubId id_of_elements(const std::vector<Elem>& xs) const;
    SubId generated(const std::vector<Elem>& xs) const;
    std::size_t position(SubId P, Elem x) const;

    bool leq(SubId a, SubId b) const { return sets_[a].subset_of(sets_[b]); }
    bool contains(SubId P, Elem x) const { return sets_[P].test(x); }
    SubId join(SubId a, SubId b) const;
    SubId meet(SubId a, SubId b) const;
    SubId conjugate(Elem s, SubId P) const;
    SubId normalizer(SubId P) const;
    SubId centralizer(SubId P) const;
    SubId center(SubId P) const;
    bool is_normal_in_S(SubId P) const;
    const std::vector<SubId>& maximal_subgroups(SubId P) const;
    std::vector<SubId> subgroups_of(SubId P) const;
    std::vector<SubId> supergroups_of(SubId P) const;
    const std::vector<SubId>& of_order(std::size_t n) const;

    // Extends images of generators(P) to a full table (no homomorphism check).
    Table spread(SubId P, const std::vector<Elem>& gen_images) const;
    // Image subgroup of a table defined on P.
    SubId image(const Table& t) const;
    Elem apply(SubId P, const Table& t, Elem x) const { return t[position(P, x)]; }
    Table identity_table(SubId P) const;
    Table conjugation_table(Elem s, SubId P) const;

private:
    struct SpreadStep {
        std::uint32_t pos, parent;
        std::uint16_t gen;
    };
    const std::vector<SpreadStep>& spread_steps(SubId P) const;

    GroupPtr S_;
    unsigned p_;
    std::vector<ElemSet> sets_;
    std::vector<std::vector<Elem>> elems_;
    std::vector<std::vector<Elem>> gens_;
    std::vector<std::uint64_t> keys_;
    std::unordered_map<ElemSet, SubId, ElemSetHash> index_;
    std::unordered_map<std::size_t, std::vector<SubId>> by_order_;

    mutable std::mutex mu_;
    mutable std::vector<SubId> normalizer_, centralizer_;
    mutable std::vector<std::unique_ptr<std::vector<SubId>>> maximal_;
    mutable std::vector<std::unique_ptr<std::vector<SpreadStep>>> spread_;
};

using LatticePtr = std::shared_ptr<const SubgroupLattice>;

// Lattice of a subgroup S of some group, built on a standalone copy of S whose
// element i is S.members()[i].
LatticePtr make_lattice(const Subgroup& S, unsigned p);

}  // namespace profusion
