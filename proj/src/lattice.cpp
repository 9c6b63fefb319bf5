#include "profusion/lattice.hpp"

#include <algorithm>
#include <cstdio>

#include "profusion/config.hpp"

namespace profusion {

static constexpr SubId kUnset = static_cast<SubId>(-1);

SubgroupLattice::SubgroupLattice(GroupPtr S, unsigned p) : S_(std::move(S)), p_(p) {
    if (S_->is_product()) throw InputError("lattice group must be a plain group");
    if (!is_power_of(S_->order(), p))
        throw InputError("lattice group is not a " + std::to_string(p) + "-group");
    if (S_->order() > caps().p_group_order)
        throw CapExceeded("p-group order " + std::to_string(S_->order()) + " exceeds cap " +
                          std::to_string(caps().p_group_order));
    if (S_->order() > 65536) throw CapExceeded("p-group too large for 16-bit tables");
    sets_ = detail::enumerate_p_subgroups(*S_, p, &gens_);
    elems_.reserve(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        elems_.push_back(sets_[i].elements());
        keys_.push_back(detail::hash_members(elems_.back()));
        index_.emplace(sets_[i], static_cast<SubId>(i));
        by_order_[elems_.back().size()].push_back(static_cast<SubId>(i));
    }
    normalizer_.assign(sets_.size(), kUnset);
    centralizer_.assign(sets_.size(), kUnset);
    maximal_.resize(sets_.size());
    spread_.resize(sets_.size());
}

std::string SubgroupLattice::key_hex(SubId P) const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(keys_[P]));
    return buf;
}

std::optional<SubId> SubgroupLattice::find(const ElemSet& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SubId SubgroupLattice::id_of(const ElemSet& s) const {
    auto r = find(s);
    if (!r) throw IntegrityError("element set is not a subgroup of S");
    return *r;
}

SubId SubgroupLattice::id_of_elements(const std::vector<Elem>& xs) const {
    ElemSet s(S_->order());
    for (Elem x : xs) s.set(x);
    return id_of(s);
}

SubId SubgroupLattice::generated(const std::vector<Elem>& xs) const {
    return id_of(detail::closure(*S_, xs));
}

std::size_t SubgroupLattice::position(SubId P, Elem x) const {
    const auto& e = elems_[P];
    auto it = std::lower_bound(e.begin(), e.end(), x);
    if (it == e.end() || *it != x) throw IntegrityError("element outside subgroup");
    return static_cast<std::size_t>(it - e.begin());
}

SubId SubgroupLattice::join(SubId a, SubId b) const {
    if (leq(a, b)) return b;
    if (leq(b, a)) return a;
    std::vector<Elem> g = gens_[a];
    g.insert(g.end(), gens_[b].begin(), gens_[b].end());
    return generated(g);
}

SubId SubgroupLattice::meet(SubId a, SubId b) const { return id_of(sets_[a] & sets_[b]); }

SubId SubgroupLattice::conjugate(Elem s, SubId P) const {
    ElemSet r(S_->order());
    for (Elem x : elems_[P]) r.set(S_->conj(s, x));
    return id_of(r);
}

SubId SubgroupLattice::normalizer(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (normalizer_[P] != kUnset) return normalizer_[P];
    }
    ElemSet r(S_->order());
    for (Elem s = 0; s < S_->order(); ++s) {
        bool ok = true;
        for (Elem g : gens_[P])
            if (!sets_[P].test(S_->conj(s, g))) {
                ok = false;
                break;
            }
        if (ok) r.set(s);
    }
    SubId id = id_of(r);
    std::lock_guard<std::mutex> lk(mu_);
    return normalizer_[P] = id;
}

SubId SubgroupLattice::centralizer(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (centralizer_[P] != kUnset) return centralizer_[P];
    }
    ElemSet r(S_->order());
    for (Elem s = 0; s < S_->order(); ++s) {
        bool ok = true;
        for (Elem g : gens_[P])
            if (S_->mul(s, g) != S_->mul(g, s)) {
                ok = false;
                break;
            }
        if (ok) r.set(s);
    }
    SubId id = id_of(r);
    std::lock_guard<std::mutex> lk(mu_);
    return centralizer_[P] = id;
}

SubId SubgroupLattice::center(SubId P) const { return meet(P, centralizer(P)); }

bool SubgroupLattice::is_normal_in_S(SubId P) const { return normalizer(P) == whole(); }

const std::vector<SubId>& SubgroupLattice::of_order(std::size_t n) const {
    static const std::vector<SubId> none;
    auto it = by_order_.find(n);
    return it == by_order_.end() ? none : it->second;
}

const std::vector<SubId>& SubgroupLattice::maximal_subgroups(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (maximal_[P]) return *maximal_[P];
    }
    auto v = std::make_unique<std::vector<SubId>>();
    if (order(P) > 1)
        for (SubId R : of_order(order(P) / p_))
            if (leq(R, P)) v->push_back(R);
    std::lock_guard<std::mutex> lk(mu_);
    if (!maximal_[P]) maximal_[P] = std::move(v);
    return *maximal_[P];
}

std::vector<SubId> SubgroupLattice::subgroups_of(SubId P) const {
    std::vector<SubId> out;
    for (SubId R = 0; R < size() && order(R) <= order(P); ++R)
        if (leq(R, P)) out.push_back(R);
    return out;
}

std::vector<SubId> SubgroupLattice::supergroups_of(SubId P) const {
    std::vector<SubId> out;
    for (SubId R = 0; R < size(); ++R)
        if (order(R) >= order(P) && leq(P, R)) out.push_back(R);
    return out;
}

const std::vector<SubgroupLattice::SpreadStep>& SubgroupLattice::spread_steps(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (spread_[P]) return *spread_[P];
    }
    auto steps = std::make_unique<std::vector<SpreadStep>>();
    const auto& e = elems_[P];
    std::vector<char> seen(e.size(), 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t k = 0; k < queue.size(); ++k)
        for (std::size_t g = 0; g < gens_[P].size(); ++g) {
            Elem y = S_->mul(e[queue[k]], gens_[P][g]);
            auto pos = static_cast<std::uint32_t>(position(P, y));
            if (!seen[pos]) {
                seen[pos] = 1;
                queue.push_back(pos);
                steps->push_back({pos, queue[k], static_cast<std::uint16_t>(g)});
            }
        }
    std::lock_guard<std::mutex> lk(mu_);
    if (!spread_[P]) spread_[P] = std::move(steps);
    return *spread_[P];
}

Table SubgroupLattice::spread(SubId P, const std::vector<Elem>& gen_images) const {
    Table t(order(P), 0);
    for (const auto& st : spread_steps(P))
        t[st.pos] = static_cast<std::uint16_t>(S_->mul(t[st.parent], gen_images[st.gen]));
    return t;
}

SubId SubgroupLattice::image(const Table& t) const {
    ElemSet r(S_->order());
    for (auto x : t) r.set(x);
    return id_of(r);
}

Table SubgroupLattice::identity_table(SubId P) const {
    Table t;
    t.reserve(order(P));
    for (Elem x : elems_[P]) t.push_back(static_cast<std::uint16_t>(x));
    return t;
}

Table SubgroupLattice::conjugation_table(Elem s, SubId P) const {
    Table t;
    t.reserve(order(P));
    for (Elem x : elems_[P]) t.push_back(static_cast<std::uint16_t>(S_->conj(s, x)));
    return t;
}

LatticePtr make_lattice(const Subgroup& S, unsigned p) {
    std::vector<Permutation> el, gens;
    for (Elem x : S.members()) el.push_back(S.group().element(x));
    for (Elem x : S.generators()) gens.push_back(S.group().element(x));
    GroupPtr H = FiniteGroup::from_elements(S.group().degree(), std::move(el), std::move(gens), "S");
    return std::make_shared<SubgroupLattice>(H, p);
}

}  // namespace profusion
