#include "profusion/alperin.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "profusion/config.hpp"

namespace profusion {

// ---------------------------------------------------------------------------
// Centric, radical, essential

bool is_centric(const FusionSystem& E, SubId Q) {
    const SubgroupLattice& L = E.lattice();
    for (SubId X : E.iso_class(Q))
        if (!L.leq(L.meet(E.T(), L.centralizer(X)), X)) return false;
    return true;
}

Subgroup aut_T_cap_Q(const FusionSystem& E, const AutGroup& A) {
    const SubgroupLattice& L = E.lattice();
    std::set<Elem> m;
    for (Elem x : L.elements(L.meet(E.T(), A.Q))) m.insert(A.index_of(L.conjugation_table(x, A.Q)));
    return Subgroup(A.group, std::vector<Elem>(m.begin(), m.end()));
}

Subgroup o_p(const GroupPtr& G, unsigned p) {
    const Subgroup P = sylow_p(G, p);
    std::vector<Elem> cur = P.members();
    for (Elem g = 0; g < G->order() && cur.size() > 1; ++g) {
        std::vector<Elem> next;
        for (Elem x : cur)
            if (P.contains(G->conj(g, x))) next.push_back(x);
        cur = std::move(next);
    }
    return Subgroup(G, cur);
}

EssentialInfo essential_info(const FusionSystem& E, SubId Q) {
    const SubgroupLattice& L = E.lattice();
    EssentialInfo r;
    r.Q = Q;
    r.contains_T = L.leq(E.T(), Q);
    auto A = aut_group(E, Q);
    const Subgroup I0 = aut_T_cap_Q(E, *A);
    r.radical = o_p(A->group, E.prime()) == I0;
    r.centric = is_centric(E, Q);
    if (r.centric) {
        GroupPtr quo = I0.order() == 1 ? A->group : quotient_group(A->group, I0).group;
        r.quillen = quillen_poset_connected(quo, E.prime());
    }
    r.essential = r.contains_T || (r.centric && *r.quillen != Connectivity::connected);
    return r;
}

bool is_radical(const FusionSystem& E, SubId Q) { return essential_info(E, Q).radical; }
bool is_essential(const FusionSystem& E, SubId Q) { return essential_info(E, Q).essential; }

std::vector<SubId> essential_subgroups(const FusionSystem& E) {
    const SubgroupLattice& L = E.lattice();
    std::vector<SubId> out;
    for (SubId Q = 0; Q < L.size(); ++Q) {
        if (L.leq(E.T(), Q)) {
            out.push_back(Q);
            continue;
        }
        // cheap necessary condition before the class scan
        if (!L.leq(L.meet(E.T(), L.centralizer(Q)), Q)) continue;
        if (essential_info(E, Q).essential) out.push_back(Q);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chains

std::size_t AlperinChain::length(const SubgroupLattice& L) const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.Q != L.whole();
    return n;
}

std::optional<Table> recompose(const SubgroupLattice& L, const AlperinChain& c) {
    Table r = L.identity_table(c.P0);
    for (const auto& s : c.steps) {
        for (auto& x : r) {
            if (!L.contains(s.Q, x)) return std::nullopt;
            x = s.phi[L.position(s.Q, x)];
        }
    }
    return r;
}

ChainCheck check_chain(const FusionSystem& E, const AlperinChain& c, const FusionMorphism& phi) {
    const SubgroupLattice& L = E.lattice();
    ChainCheck r;
    SaturationCache C(E);
    if (c.P0 != phi.domain) {
        r.valid = false;
        r.reason = "chain starts at the wrong subgroup";
    }
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        if (L.image(s.phi) != s.Q || !E.has_map(s.Q, s.phi)) {
            r.valid = false;
            r.reason = "step " + std::to_string(i) + " is not an automorphism in E";
        }
        if (!essential_info(E, s.Q).essential) r.essential = false;
        if (!C.fully_normalized(s.Q)) r.fully_normalized = false;
    }
    auto t = recompose(L, c);
    if (!t) {
        r.valid = false;
        if (r.reason.empty()) r.reason = "running image leaves some Q_i";
        r.recomposes = false;
    } else if (*t != phi.table) {
        r.recomposes = false;
        if (r.reason.empty()) r.reason = "composite differs from phi";
    }
    return r;
}

namespace {

using Steps = std::vector<AlperinStep>;

void append(Steps& a, Steps b) {
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
}

// The recursion of the fusion theorem's proof. Every call on a subgroup of
// index i only recurses on strictly smaller index or, once, on a fully
// normalized subgroup of the same index.
class Decomposer {
public:
    explicit Decomposer(const FusionSystem& E) : E_(E), L_(E.lattice()), C_(E) {}

    // t: P -> S injective, in E.
    Steps decompose(SubId P, const Table& t) {
        if (P == L_.whole()) return {{P, t}};
        const SubId X = L_.image(t);
        if (C_.fully_normalized(X)) return to_fully_normalized(P, t);
        Representative rep;
        try {
            rep = fully_normalized_representative(E_, P, &C_);
        } catch (const NotFound& e) {
            throw NotSaturated(std::string("alperin_decompose: ") + e.what());
        }
        Steps a = to_fully_normalized(P, rep.psi.table);
        // psi phi^-1 on X
        const Table inv = invert_table(L_, P, t);
        Table u(inv.size());
        for (std::size_t j = 0; j < inv.size(); ++j) u[j] = rep.psi.table[L_.position(P, inv[j])];
        Steps b = to_fully_normalized(X, u);
        for (auto it = b.rbegin(); it != b.rend(); ++it)
            a.push_back({it->Q, invert_table(L_, it->Q, it->phi)});
        return a;
    }

    // t: P -> X with X fully normalized.
    Steps to_fully_normalized(SubId P, const Table& t) {
        if (P == L_.whole()) return {{P, t}};
        const SubId X = L_.image(t);
        auto A = C_.aut(X);
        auto w = equiv_fnorm_search(E_, *A, whole_group(A->group), P, t);
        if (!w) throw NotSaturated("alperin_decompose: no extension to N_T(P)P for " + L_.key_hex(P));
        const SubId D = w->psi.domain;
        if (D == P) {
            // N_T(P) <= P, so T <= P and t moves elements inside T-cosets
            if (X != P) throw IntegrityError("alperin_decompose: T <= P but t(P) != P");
            return {{P, t}};
        }
        Steps s = decompose(D, w->psi.table);
        append(s, decompose_aut(X, invert_table(L_, X, w->chi)));
        return s;
    }

    // chi in Aut_E(P), P fully normalized.
    Steps decompose_aut(SubId P, const Table& chi) {
        if (P == L_.whole()) return {{P, chi}};
        if (chi == L_.identity_table(P)) return {};
        if (compute_N_phi(E_, P, chi) != P) return extend_and_decompose(P, chi);
        const EssentialInfo info = essential_info(E_, P);
        if (info.essential) return {{P, chi}};
        if (!info.centric) throw IntegrityError("alperin_decompose: non-centric P with N_chi = P");
        return quillen_path(P, chi);
    }

private:
    Steps extend_and_decompose(SubId P, const Table& chi) {
        auto ext = receptive_extension(E_, P, chi);
        if (!ext) throw NotSaturated("alperin_decompose: " + L_.key_hex(P) + " is not receptive");
        return decompose(ext->domain, ext->table);
    }

    // P centric, fully normalized, not essential: walk Sylow subgroups of
    // Aut_E(P) from U = Aut_T(P) to chi U chi^-1, consecutive ones meeting
    // in more than Aut_{T n P}(P).
    Steps quillen_path(SubId P, const Table& chi) {
        auto A = C_.aut(P);
        const auto& tabs = A->tables;
        const Subgroup U = aut_T(E_, *A);
        const std::size_t floor = aut_T_cap_Q(E_, *A).order();

        auto conj_set = [&](const Table& g) {
            const Table gi = invert_table(L_, P, g);
            std::vector<Elem> v;
            for (Elem u : U.members())
                v.push_back(A->index_of(compose(L_, P, g, compose(L_, P, tabs[u], gi))));
            std::sort(v.begin(), v.end());
            return v;
        };
        std::vector<std::vector<Elem>> sylows;
        std::vector<Elem> conjugator;
        std::map<std::vector<Elem>, std::size_t> index;
        for (Elem g = 0; g < tabs.size(); ++g) {
            auto v = conj_set(tabs[g]);
            if (index.emplace(v, sylows.size()).second) {
                sylows.push_back(std::move(v));
                conjugator.push_back(g);
            }
        }
        const std::size_t target = index.at(conj_set(chi));
        auto meet_size = [&](std::size_t a, std::size_t b) {
            std::vector<Elem> r;
            std::set_intersection(sylows[a].begin(), sylows[a].end(), sylows[b].begin(),
                                  sylows[b].end(), std::back_inserter(r));
            return r.size();
        };
        std::vector<std::ptrdiff_t> prev(sylows.size(), -1);
        std::deque<std::size_t> q{0};
        prev[0] = 0;
        while (!q.empty() && prev[target] < 0) {
            std::size_t a = q.front();
            q.pop_front();
            for (std::size_t b = 0; b < sylows.size(); ++b)
                if (prev[b] < 0 && meet_size(a, b) > floor) {
                    prev[b] = static_cast<std::ptrdiff_t>(a);
                    q.push_back(b);
                }
        }
        if (prev[target] < 0)
            throw IntegrityError("alperin_decompose: Quillen poset disconnected for a non-essential subgroup");
        std::vector<std::size_t> path{target};
        while (path.back() != 0) path.push_back(static_cast<std::size_t>(prev[path.back()]));
        std::reverse(path.begin(), path.end());

        std::vector<Table> chis;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) chis.push_back(tabs[conjugator[path[i]]]);
        chis[0] = L_.identity_table(P);
        chis.push_back(chi);
        Steps out;
        for (std::size_t i = 1; i < chis.size(); ++i) {
            const Table theta = compose(L_, P, chis[i], invert_table(L_, P, chis[i - 1]));
            if (theta == L_.identity_table(P)) continue;
            if (compute_N_phi(E_, P, theta) == P)
                throw IntegrityError("alperin_decompose: N_theta does not grow along the Quillen path");
            append(out, extend_and_decompose(P, theta));
        }
        return out;
    }

    const FusionSystem& E_;
    const SubgroupLattice& L_;
    SaturationCache C_;
};

}  // namespace

AlperinChain alperin_decompose(const FusionSystem& E, const FusionMorphism& phi) {
    Decomposer d(E);
    return {phi.domain, d.decompose(phi.domain, phi.table)};
}

AlperinChain refine_to_essential(const FusionSystem& E, const AlperinChain& c) {
    const SubgroupLattice& L = E.lattice();
    SaturationCache C(E);
    AlperinChain out{c.P0, {}};
    for (const auto& s : c.steps) {
        if (s.Q == L.whole() || (C.fully_normalized(s.Q) && essential_info(E, s.Q).essential)) {
            out.steps.push_back(s);
            continue;
        }
        Decomposer d(E);
        append(out.steps, d.decompose(s.Q, s.phi));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Alperin length

const char* to_string(AlpVariant v) {
    switch (v) {
        case AlpVariant::open: return "open";
        case AlpVariant::closed: return "closed";
        case AlpVariant::essential: return "essential";
    }
    return "?";
}

namespace {

AlpResult alp_bfs(const FusionSystem& F, const FusionMorphism& phi, const std::vector<SubId>& allowed) {
    const SubgroupLattice& L = F.lattice();
    const SubId P = phi.domain;
    struct Node {
        std::size_t dist;
        Table prev;
        SubId Q;
        std::uint32_t aut;
    };
    std::map<Table, Node> seen;
    std::map<SubId, std::vector<SubId>> above;
    std::deque<Table> dq;
    const Table start = L.identity_table(P);
    seen.emplace(start, Node{0, {}, 0, 0});
    dq.push_back(start);
    std::set<Table> done;
    AlpResult res;
    while (!dq.empty()) {
        Table cur = dq.front();
        dq.pop_front();
        if (!done.insert(cur).second) continue;
        const std::size_t d = seen.at(cur).dist;
        if (cur == phi.table) {
            res.length = d;
            break;
        }
        const SubId X = L.image(cur);
        auto it = above.find(X);
        if (it == above.end()) {
            std::vector<SubId> qs;
            for (SubId Q : allowed)
                if (L.leq(X, Q)) qs.push_back(Q);
            it = above.emplace(X, std::move(qs)).first;
        }
        for (SubId Q : it->second) {
            const std::size_t cost = Q == L.whole() ? 0 : 1;
            const auto auts = F.automorphisms(Q);
            for (std::uint32_t a = 0; a < auts.size(); ++a) {
                Table nxt(cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) nxt[i] = auts[a][L.position(Q, cur[i])];
                auto [pos, fresh] = seen.try_emplace(nxt, Node{d + cost, cur, Q, a});
                if (!fresh) {
                    if (pos->second.dist <= d + cost) continue;
                    pos->second = Node{d + cost, cur, Q, a};
                }
                if (cost == 0)
                    dq.push_front(std::move(nxt));
                else
                    dq.push_back(std::move(nxt));
            }
        }
    }
    res.states = seen.size();
    res.chain.P0 = P;
    if (!res.length) return res;
    for (Table t = phi.table; t != start;) {
        const Node& n = seen.at(t);
        res.chain.steps.push_back({n.Q, F.automorphisms(n.Q)[n.aut]});
        t = n.prev;
    }
    std::reverse(res.chain.steps.begin(), res.chain.steps.end());
    return res;
}

}  // namespace

AlpResult alp_length(const FusionSystem& F, const FusionMorphism& phi, AlpVariant v) {
    const SubgroupLattice& L = F.lattice();
    std::vector<SubId> allowed;
    if (v == AlpVariant::essential) {
        allowed = essential_subgroups(F);
    } else {
        allowed.resize(L.size());
        for (SubId Q = 0; Q < L.size(); ++Q) allowed[Q] = Q;
    }
    return alp_bfs(F, phi, allowed);
}

// ---------------------------------------------------------------------------
// Products

SubId product_subgroup_local(const RealizedSystem& Fp, const std::vector<const RealizedSystem*>& factors,
                             const std::vector<SubId>& parts) {
    const FiniteGroup& G = *Fp.ambient();
    std::vector<std::vector<Elem>> coords;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        std::vector<Elem> c;
        for (Elem x : factors[k]->lattice().elements(parts[k])) c.push_back(factors[k]->global(x));
        coords.push_back(std::move(c));
    }
    std::vector<Elem> out;
    std::vector<std::size_t> idx(factors.size(), 0);
    std::vector<Elem> tuple(factors.size());
    while (true) {
        for (std::size_t k = 0; k < factors.size(); ++k) tuple[k] = coords[k][idx[k]];
        auto loc = Fp.local(G.from_coords(tuple));
        if (!loc) throw InputError("product_subgroup_local: element outside the product Sylow");
        out.push_back(*loc);
        std::size_t k = factors.size();
        while (k > 0) {
            --k;
            if (++idx[k] < coords[k].size()) break;
            idx[k] = 0;
            if (k == 0) return Fp.lattice().id_of_elements(out);
        }
    }
}

FusionMorphism product_morphism(const RealizedSystem& Fp,
                                const std::vector<const RealizedSystem*>& factors,
                                const std::vector<FusionMorphism>& phis) {
    const SubgroupLattice& L = Fp.lattice();
    const FiniteGroup& G = *Fp.ambient();
    if (G.factor_count() != factors.size() || phis.size() != factors.size())
        throw InputError("product_morphism: factor count mismatch");
    std::vector<SubId> parts;
    for (const auto& f : phis) parts.push_back(f.domain);
    const SubId P = product_subgroup_local(Fp, factors, parts);
    Table t;
    std::vector<Elem> tuple(factors.size());
    for (Elem x : L.elements(P)) {
        const Elem g = Fp.global(x);
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const auto& Lk = factors[k]->lattice();
            const Elem xk = *factors[k]->local(G.coord(g, k));
            tuple[k] = factors[k]->global(phis[k].table[Lk.position(phis[k].domain, xk)]);
        }
        t.push_back(static_cast<std::uint16_t>(*Fp.local(G.from_coords(tuple))));
    }
    return {P, L.image(t), t};
}

SubId project_to_factor(const RealizedSystem& Fp, const RealizedSystem& Fk, std::size_t k, SubId P) {
    const FiniteGroup& G = *Fp.ambient();
    std::vector<Elem> v;
    for (Elem x : Fp.lattice().elements(P)) v.push_back(*Fk.local(G.coord(Fp.global(x), k)));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return Fk.lattice().id_of_elements(v);
}

bool is_group_radical(const RealizedSystem& F, SubId P) {
    const SubgroupLattice& L = F.lattice();
    const GroupPtr& G = F.ambient();
    // O_p(N_G(P)) is the core of any Sylow subgroup of N_G(P); for P fully
    // normalized N_S(P) is one. Radicality is invariant under G-conjugation.
    const SubId R = fully_normalized_representative(F, P).R;
    std::vector<Elem> pg;
    for (Elem x : L.elements(R)) pg.push_back(F.global(x));
    const Subgroup N = normalizer(G, Subgroup(G, pg));
    std::vector<Elem> core;
    for (Elem x : L.elements(L.normalizer(R))) core.push_back(F.global(x));
    std::set<Elem> syl(core.begin(), core.end());
    for (Elem h : N.members()) {
        std::vector<Elem> next;
        for (Elem x : core)
            if (syl.count(G->conj(h, x))) next.push_back(x);
        core = std::move(next);
        if (core.size() == pg.size()) break;
    }
    return core.size() == pg.size();
}

ProductSplitReport product_radical_split(const RealizedSystem& Fp, const RealizedSystem& FA,
                                         const RealizedSystem& FB, SubId P) {
    const SubgroupLattice& L = Fp.lattice();
    const SubgroupLattice& LA = FA.lattice();
    const SubgroupLattice& LB = FB.lattice();
    const unsigned p = Fp.prime();
    ProductSplitReport r;
    r.P = P;
    r.Q = project_to_factor(Fp, FA, 0, P);
    r.R = project_to_factor(Fp, FB, 1, P);
    r.is_product = L.order(P) == LA.order(r.Q) * LB.order(r.R);
    r.radical = is_group_radical(Fp, P);
    r.essential = is_essential(Fp, P);
    if (r.is_product) {
        r.factors_radical = is_group_radical(FA, r.Q) && is_group_radical(FB, r.R);
        r.factors_essential = is_essential(FA, r.Q) && is_essential(FB, r.R);
        auto n_over = [p](const RealizedSystem& F, SubId Q) {
            std::vector<Elem> g;
            for (Elem x : F.lattice().elements(Q)) g.push_back(F.global(x));
            const Subgroup N = normalizer(F.ambient(), Subgroup(F.ambient(), g));
            return p_part(N.order() / g.size(), p) > 1;
        };
        r.p_divides_both = n_over(FA, r.Q) && n_over(FB, r.R);
        r.one_factor_sylow = r.Q == LA.whole() || r.R == LB.whole();
    }
    if (r.radical && !(r.is_product && r.factors_radical)) r.holds = false;
    if (r.essential && !(r.is_product && r.factors_essential && !r.p_divides_both && r.one_factor_sylow))
        r.holds = false;
    return r;
}

ProductLengthReport product_length_laws(const RealizedSystem& Fp,
                                        const std::vector<const RealizedSystem*>& factors,
                                        const std::vector<FusionMorphism>& phis, bool open_variant) {
    ProductLengthReport r;
    std::size_t sum = 0, sup = 0, sum_ess = 0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto a = alp_length(*factors[k], phis[k], AlpVariant::open).length;
        const auto e = alp_length(*factors[k], phis[k], AlpVariant::essential).length;
        if (!a || !e) throw IntegrityError("product_length_laws: factor morphism has no chain");
        r.alp.push_back(*a);
        r.alp_ess.push_back(*e);
        sum += *a;
        sup = std::max(sup, *a);
        sum_ess += *e;
    }
    const FusionMorphism prod = product_morphism(Fp, factors, phis);
    const auto e = alp_length(Fp, prod, AlpVariant::essential).length;
    if (!e) throw IntegrityError("product_length_laws: product morphism has no essential chain");
    r.alp_ess_prod = *e;
    r.ess_is_sum = *e == sum_ess;
    if (open_variant) {
        r.alp_prod = alp_length(Fp, prod, AlpVariant::open).length;
        if (!r.alp_prod) throw IntegrityError("product_length_laws: product morphism has no chain");
        r.sum_bound = sum >= *r.alp_prod && *r.alp_prod >= sup;
        // every subgroup of a finite S is open, so the closed length is this one
        r.closed_is_sup = *r.alp_prod == sup;
    }
    return r;
}

}  // namespace profusion
