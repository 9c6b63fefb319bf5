#include "profusion/fusion.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

#include "profusion/config.hpp"

namespace profusion {

const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::realized: return "realized";
        case SystemKind::relative: return "relative";
        case SystemKind::generated: return "generated";
        case SystemKind::quotient: return "quotient";
        case SystemKind::explicit_maps: return "explicit";
        case SystemKind::limit: return "limit";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Table algebra

Table compose(const SubgroupLattice& L, SubId Q, const Table& outer, const Table& inner) {
    Table r(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer[L.position(Q, inner[i])];
    return r;
}

Table restrict_table(const SubgroupLattice& L, SubId P, const Table& t, SubId R) {
    Table r;
    r.reserve(L.order(R));
    for (Elem x : L.elements(R)) r.push_back(t[L.position(P, x)]);
    return r;
}

Table invert_table(const SubgroupLattice& L, SubId P, const Table& t) {
    const SubId I = L.image(t);
    Table r(t.size());
    const auto& e = L.elements(P);
    for (std::size_t i = 0; i < t.size(); ++i)
        r[L.position(I, t[i])] = static_cast<std::uint16_t>(e[i]);
    return r;
}

bool is_injective(const Table& t) {
    Table s = t;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_homomorphism(const SubgroupLattice& L, SubId P, const Table& t) {
    const auto& e = L.elements(P);
    const FiniteGroup& S = L.group();
    if (t.size() != e.size()) return false;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e.size(); ++j)
            if (t[L.position(P, S.mul(e[i], e[j]))] != S.mul(t[i], t[j])) return false;
    return true;
}

SubId image_of(const SubgroupLattice& L, const FusionMorphism& phi) { return L.image(phi.table); }

FusionMorphism compose(const SubgroupLattice& L, const FusionMorphism& psi,
                       const FusionMorphism& phi) {
    if (!L.leq(image_of(L, phi), psi.domain))
        throw InputError("compose: image of the inner map is not in the outer domain");
    return {phi.domain, psi.codomain, compose(L, psi.domain, psi.table, phi.table)};
}

FusionMorphism inverse(const SubgroupLattice& L, const FusionMorphism& phi) {
    const SubId I = image_of(L, phi);
    return {I, phi.domain, invert_table(L, phi.domain, phi.table)};
}

FusionMorphism restrict_to(const SubgroupLattice& L, const FusionMorphism& phi, SubId R) {
    if (!L.leq(R, phi.domain)) throw InputError("restrict_to: not a subgroup of the domain");
    return {R, phi.codomain, restrict_table(L, phi.domain, phi.table, R)};
}

FusionMorphism inclusion(const SubgroupLattice& L, SubId P, SubId Q) {
    if (!L.leq(P, Q)) throw InputError("inclusion: P is not contained in Q");
    return {P, Q, L.identity_table(P)};
}

Factorization factorize(const SubgroupLattice& L, const FusionMorphism& phi) {
    const SubId I = image_of(L, phi);
    return {{phi.domain, I, phi.table}, inclusion(L, I, phi.codomain)};
}

// ---------------------------------------------------------------------------
// FusionSystem

FusionSystem::FusionSystem(LatticePtr L, SystemKind kind, SubId T, std::string name)
    : L_(std::move(L)), kind_(kind), T_(T), name_(std::move(name)) {
    cache_.resize(L_->size());
}

const Embeddings& FusionSystem::embeddings(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (cache_[P]) return *cache_[P];
    }
    auto e = std::make_shared<const Embeddings>(compute_embeddings(P));
    std::lock_guard<std::mutex> lk(mu_);
    if (!cache_[P]) cache_[P] = std::move(e);
    return *cache_[P];
}

Embeddings FusionSystem::embeddings_uncached(SubId P) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (cache_[P]) return *cache_[P];
    }
    return compute_embeddings(P);
}

bool FusionSystem::has_map(SubId P, const Table& t) const {
    const auto& m = embeddings(P).maps;
    return std::binary_search(m.begin(), m.end(), t);
}

bool FusionSystem::contains(const FusionMorphism& f) const {
    if (f.table.size() != L_->order(f.domain)) return false;
    if (!has_map(f.domain, f.table)) return false;
    for (auto x : f.table)
        if (!L_->contains(f.codomain, x)) return false;
    return true;
}

std::vector<FusionMorphism> FusionSystem::hom_set(SubId P, SubId Q) const {
    std::vector<FusionMorphism> out;
    if (L_->order(P) > L_->order(Q)) return out;
    const auto& e = embeddings(P);
    for (std::size_t i = 0; i < e.maps.size(); ++i)
        if (L_->leq(e.images[i], Q)) out.push_back({P, Q, e.maps[i]});
    return out;
}

std::vector<FusionMorphism> FusionSystem::iso_set(SubId P, SubId Q) const {
    std::vector<FusionMorphism> out;
    const auto& e = embeddings(P);
    for (std::size_t i = 0; i < e.maps.size(); ++i)
        if (e.images[i] == Q) out.push_back({P, Q, e.maps[i]});
    return out;
}

std::vector<Table> FusionSystem::automorphisms(SubId Q) const {
    std::vector<Table> out;
    const auto& e = embeddings(Q);
    for (std::size_t i = 0; i < e.maps.size(); ++i)
        if (e.images[i] == Q) out.push_back(e.maps[i]);
    return out;
}

std::vector<SubId> FusionSystem::iso_class(SubId P) const {
    std::vector<SubId> out = embeddings(P).images;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t FusionSystem::morphism_count() const {
    std::size_t n = 0;
    for (SubId P = 0; P < L_->size(); ++P) n += embeddings(P).maps.size();
    return n;
}

namespace {

Embeddings finish(const SubgroupLattice& L, std::vector<Table> maps) {
    std::sort(maps.begin(), maps.end());
    maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
    Embeddings e;
    e.images.reserve(maps.size());
    for (const auto& t : maps) e.images.push_back(L.image(t));
    e.maps = std::move(maps);
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// RealizedSystem

RealizedSystem::RealizedSystem(GroupPtr G, Subgroup S, std::optional<Subgroup> H, unsigned p,
                               LatticePtr L)
    : FusionSystem(L, H ? SystemKind::relative : SystemKind::realized, L->whole(),
                   (H ? "E_S(H) in " : "F_S(") + G->name() + (H ? "" : ")")),
      G_(std::move(G)),
      Sg_(std::move(S)),
      H_(std::move(H)) {
    if (Sg_.order() != p_part(G_->order(), p) || !is_power_of(Sg_.order(), p))
        throw InputError("S is not a Sylow " + std::to_string(p) + "-subgroup of " + G_->name());
    if (L->order(L->whole()) != Sg_.order()) throw InputError("lattice does not match S");
    const std::size_t m = G_->factor_count();
    cand_.resize(m);
    if (!H_) {
        for (std::size_t k = 0; k < m; ++k) {
            cand_[k].resize(G_->factor(k)->order());
            for (Elem x = 0; x < cand_[k].size(); ++x) cand_[k][x] = x;
        }
    } else {
        if (H_->parent() != G_) throw InputError("H is not a subgroup of G");
        if (!is_normal(G_, *H_)) throw InputError("H is not normal in G");
        std::vector<std::set<Elem>> proj(m);
        for (Elem h : H_->members())
            for (std::size_t k = 0; k < m; ++k) proj[k].insert(G_->coord(h, k));
        std::uint64_t prod = 1;
        for (std::size_t k = 0; k < m; ++k) {
            prod *= proj[k].size();
            cand_[k].assign(proj[k].begin(), proj[k].end());
        }
        if (prod != H_->order()) {
            use_flat_ = true;
            flat_ = H_->members();
            cand_.clear();
        }
        std::vector<Elem> t;
        for (std::size_t i = 0; i < Sg_.members().size(); ++i)
            if (H_->contains(Sg_.members()[i])) t.push_back(static_cast<Elem>(i));
        set_T(L->id_of_elements(t));
    }
    radix_.resize(m);
    stride_.assign(m, 1);
    for (std::size_t k = 0; k < m; ++k) radix_[k] = G_->factor(k)->order();
    for (std::size_t k = m - 1; k-- > 0;) stride_[k] = stride_[k + 1] * radix_[k + 1];
    prefix_.resize(m);
    for (std::size_t k = 0; k + 1 < m; ++k)
        for (Elem s : Sg_.members()) prefix_[k].insert(s / stride_[k]);
}

std::optional<Elem> RealizedSystem::local(Elem global) const {
    const auto& m = Sg_.members();
    auto it = std::lower_bound(m.begin(), m.end(), global);
    if (it == m.end() || *it != global) return std::nullopt;
    return static_cast<Elem>(it - m.begin());
}

std::optional<Table> RealizedSystem::conjugation(Elem g, SubId P) const {
    Table t;
    t.reserve(lattice().order(P));
    for (Elem x : lattice().elements(P)) {
        auto y = local(G_->conj(g, global(x)));
        if (!y) return std::nullopt;
        t.push_back(static_cast<std::uint16_t>(*y));
    }
    return t;
}

std::vector<Table> RealizedSystem::maps_onto(SubId P, SubId Q) const {
    std::vector<Table> out;
    const auto& e = embeddings(P);
    for (std::size_t i = 0; i < e.maps.size(); ++i)
        if (e.images[i] == Q) out.push_back(e.maps[i]);
    return out;
}

Embeddings RealizedSystem::compute_embeddings(SubId P) const {
    const SubgroupLattice& L = lattice();
    const auto& lg = L.generators(P);
    if (lg.empty()) return finish(L, {L.identity_table(P)});
    std::vector<Elem> xs;
    for (Elem x : lg) xs.push_back(global(x));
    const std::size_t ng = xs.size();
    std::vector<Table> maps;
    std::set<std::vector<Elem>> seen;

    auto emit = [&](const std::vector<Elem>& img) {
        std::vector<Elem> loc(ng);
        for (std::size_t j = 0; j < ng; ++j) {
            auto y = local(img[j]);
            if (!y) return;
            loc[j] = *y;
        }
        if (!seen.insert(loc).second) return;
        maps.push_back(L.spread(P, loc));
    };

    if (use_flat_) {
        std::vector<Elem> img(ng);
        for (Elem h : flat_) {
            for (std::size_t j = 0; j < ng; ++j) img[j] = G_->conj(h, xs[j]);
            emit(img);
        }
        return finish(L, std::move(maps));
    }

    // Distinct per-factor images of the generator tuple; the full image tuples
    // are the products of these, filtered by membership in S.
    const std::size_t m = G_->factor_count();
    std::vector<std::vector<std::vector<Elem>>> level(m);
    for (std::size_t k = 0; k < m; ++k) {
        const FiniteGroup& F = *G_->factor(k);
        std::vector<Elem> xk(ng);
        for (std::size_t j = 0; j < ng; ++j) xk[j] = G_->coord(xs[j], k);
        std::set<std::vector<Elem>> tuples;
        std::vector<Elem> img(ng);
        for (Elem g : cand_[k]) {
            for (std::size_t j = 0; j < ng; ++j) img[j] = F.conj(g, xk[j]);
            tuples.insert(img);
        }
        level[k].assign(tuples.begin(), tuples.end());
    }
    if (m == 1) {
        for (const auto& t : level[0]) emit(t);
        return finish(L, std::move(maps));
    }
    std::vector<std::vector<std::uint64_t>> pre(m + 1, std::vector<std::uint64_t>(ng, 0));
    std::vector<Elem> img(ng);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == m) {
            for (std::size_t j = 0; j < ng; ++j) img[j] = static_cast<Elem>(pre[m][j]);
            emit(img);
            return;
        }
        for (const auto& t : level[k]) {
            bool ok = true;
            for (std::size_t j = 0; j < ng && ok; ++j) {
                pre[k + 1][j] = pre[k][j] * radix_[k] + t[j];
                if (k + 1 < m) ok = prefix_[k].count(pre[k + 1][j]) > 0;
            }
            if (ok) rec(k + 1);
        }
    };
    rec(0);
    return finish(L, std::move(maps));
}

namespace {

Subgroup check_sylow(const GroupPtr& G, const Subgroup& S, unsigned p) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (S.parent() != G) throw InputError("S is not a subgroup of G");
    return S;
}

}  // namespace

std::shared_ptr<const RealizedSystem> realize(const GroupPtr& G, const Subgroup& S, unsigned p,
                                              LatticePtr L) {
    check_sylow(G, S, p);
    if (!L) L = make_lattice(S, p);
    return std::make_shared<RealizedSystem>(G, S, std::nullopt, p, std::move(L));
}

std::shared_ptr<const RealizedSystem> realize(const GroupPtr& G, const Subgroup& S, unsigned p) {
    return realize(G, S, p, nullptr);
}

std::shared_ptr<const RealizedSystem> realize_subsystem(const GroupPtr& G, const Subgroup& S,
                                                        const Subgroup& H, unsigned p,
                                                        LatticePtr L) {
    check_sylow(G, S, p);
    if (!L) L = make_lattice(S, p);
    return std::make_shared<RealizedSystem>(G, S, H, p, std::move(L));
}

std::shared_ptr<const RealizedSystem> realize_subsystem(const GroupPtr& G, const Subgroup& S,
                                                        const Subgroup& H, unsigned p) {
    return realize_subsystem(G, S, H, p, nullptr);
}

// ---------------------------------------------------------------------------
// Explicit and generated systems

ExplicitSystem::ExplicitSystem(LatticePtr L, SystemKind kind, SubId T,
                               std::vector<std::vector<Table>> maps, std::string name)
    : FusionSystem(L, kind, T, std::move(name)), maps_(std::move(maps)) {
    if (maps_.size() != L->size()) throw InputError("explicit system: one map list per subgroup");
    for (auto& m : maps_) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
    }
}

Embeddings ExplicitSystem::compute_embeddings(SubId P) const {
    return finish(lattice(), maps_[P]);
}

std::vector<std::vector<Table>> all_maps(const FusionSystem& F) {
    std::vector<std::vector<Table>> out(F.lattice().size());
    for (SubId P = 0; P < out.size(); ++P) out[P] = F.embeddings(P).maps;
    return out;
}

std::shared_ptr<const ExplicitSystem> explicit_system(LatticePtr L, SubId T,
                                                      std::vector<std::vector<Table>> maps,
                                                      std::string name) {
    return std::make_shared<ExplicitSystem>(std::move(L), SystemKind::explicit_maps, T,
                                            std::move(maps), std::move(name));
}

namespace {

// Worklist closure of a set of maps under inversion, composition and
// restriction. Everything is an isomorphism onto its image, so composition
// only needs to be applied at matching image/domain pairs.
std::vector<std::vector<Table>> close_maps(const SubgroupLattice& L,
                                           std::vector<std::pair<SubId, Table>> seeds) {
    std::vector<std::set<Table>> M(L.size());
    std::deque<std::pair<SubId, Table>> work;
    auto add = [&](SubId P, Table t) {
        if (M[P].insert(t).second) work.emplace_back(P, std::move(t));
    };
    for (auto& [P, t] : seeds) add(P, std::move(t));
    while (!work.empty()) {
        auto [P, t] = std::move(work.front());
        work.pop_front();
        const SubId X = L.image(t);
        add(X, invert_table(L, P, t));
        std::vector<Table> psis(M[X].begin(), M[X].end());
        for (const auto& psi : psis) add(P, compose(L, X, psi, t));
        std::vector<Table> omegas(M[P].begin(), M[P].end());
        for (const auto& om : omegas) {
            const SubId Y = L.image(om);
            add(Y, compose(L, P, t, invert_table(L, P, om)));
        }
        for (SubId R : L.maximal_subgroups(P)) add(R, restrict_table(L, P, t, R));
    }
    std::vector<std::vector<Table>> out(L.size());
    for (SubId P = 0; P < L.size(); ++P) out[P].assign(M[P].begin(), M[P].end());
    return out;
}

}  // namespace

std::shared_ptr<const ExplicitSystem> generated_system(LatticePtr L,
                                                       const std::vector<FusionMorphism>& gens,
                                                       std::string name) {
    std::vector<std::pair<SubId, Table>> seeds;
    const SubId S = L->whole();
    for (Elem s = 0; s < L->group().order(); ++s) seeds.emplace_back(S, L->conjugation_table(s, S));
    for (const auto& f : gens) {
        if (f.table.size() != L->order(f.domain) || !is_injective(f.table) ||
            !is_homomorphism(*L, f.domain, f.table))
            throw InputError("generator is not an injective homomorphism");
        seeds.emplace_back(f.domain, f.table);
    }
    auto maps = close_maps(*L, std::move(seeds));
    return std::make_shared<ExplicitSystem>(L, SystemKind::generated, S, std::move(maps),
                                            std::move(name));
}

// ---------------------------------------------------------------------------
// Strong closure

std::vector<std::vector<Elem>> element_fusion_orbits(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    const std::size_t n = L.group().order();
    std::vector<std::vector<Elem>> orb(n);
    for (Elem x = 0; x < n; ++x) {
        const SubId C = L.generated({x});
        const std::size_t pos = L.position(C, x);
        std::set<Elem> s;
        for (const auto& t : F.embeddings(C).maps) s.insert(t[pos]);
        orb[x].assign(s.begin(), s.end());
    }
    return orb;
}

namespace {
bool closed_under(const SubgroupLattice& L, SubId Q, const std::vector<std::vector<Elem>>& orb) {
    for (Elem x : L.elements(Q))
        for (Elem y : orb[x])
            if (!L.contains(Q, y)) return false;
    return true;
}
}  // namespace

bool is_strongly_closed(const FusionSystem& F, SubId Q) {
    const SubgroupLattice& L = F.lattice();
    for (Elem x : L.elements(Q)) {
        const SubId C = L.generated({x});
        const std::size_t pos = L.position(C, x);
        for (const auto& t : F.embeddings(C).maps)
            if (!L.contains(Q, t[pos])) return false;
    }
    return true;
}

std::vector<SubId> strongly_closed_subgroups(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    auto orb = element_fusion_orbits(F);
    std::vector<SubId> out;
    for (SubId Q = 0; Q < L.size(); ++Q)
        if (closed_under(L, Q, orb)) out.push_back(Q);
    return out;
}

// ---------------------------------------------------------------------------
// Quotients

QuotientContext quotient_context(const FusionSystem& F, SubId N) {
    const SubgroupLattice& L = F.lattice();
    if (!is_strongly_closed(F, N)) throw InputError("N is not strongly closed");
    QuotientContext q;
    q.N = N;
    const GroupPtr& S = L.group_ptr();
    Subgroup Ns(S, L.elements(N), L.generators(N));
    auto qg = quotient_group(S, Ns);
    q.projection.resize(S->order());
    for (Elem x = 0; x < S->order(); ++x) q.projection[x] = qg.projection(x);
    q.lattice = (qg.group == S) ? F.lattice_ptr()
                                : std::make_shared<const SubgroupLattice>(qg.group, L.prime());
    return q;
}

namespace {

// PN for P a subgroup of S/N.
SubId preimage(const SubgroupLattice& L, const QuotientContext& q, SubId Pbar) {
    const SubgroupLattice& Lq = *q.lattice;
    std::vector<Elem> xs;
    for (Elem x = 0; x < L.group().order(); ++x)
        if (Lq.contains(Pbar, q.projection[x])) xs.push_back(x);
    return L.id_of_elements(xs);
}

// The map of S/N induced by t on P (N strongly closed), as a table on PN/N.
Table induced_on_quotient(const SubgroupLattice& L, const QuotientContext& q, SubId P,
                          const Table& t, SubId* Pbar_out) {
    const SubgroupLattice& Lq = *q.lattice;
    std::vector<Elem> imgs;
    for (Elem x : L.elements(P)) imgs.push_back(q.projection[x]);
    const SubId Pbar = Lq.id_of_elements(imgs);
    Table r(Lq.order(Pbar));
    const auto& e = L.elements(P);
    for (std::size_t i = 0; i < e.size(); ++i)
        r[Lq.position(Pbar, q.projection[e[i]])] = static_cast<std::uint16_t>(q.projection[t[i]]);
    *Pbar_out = Pbar;
    return r;
}

}  // namespace

std::shared_ptr<const ExplicitSystem> quotient_system(const FusionSystem& F,
                                                      const QuotientContext& q) {
    const SubgroupLattice& L = F.lattice();
    const SubgroupLattice& Lq = *q.lattice;
    std::vector<std::vector<Table>> maps(Lq.size());
    for (SubId Pb = 0; Pb < Lq.size(); ++Pb) {
        const SubId PN = preimage(L, q, Pb);
        for (const auto& t : F.embeddings(PN).maps) {
            SubId chk;
            maps[Pb].push_back(induced_on_quotient(L, q, PN, t, &chk));
        }
    }
    return std::make_shared<ExplicitSystem>(q.lattice, SystemKind::quotient, Lq.whole(),
                                            std::move(maps), F.name() + "/N");
}

std::shared_ptr<const ExplicitSystem> quotient_system(const FusionSystem& F, SubId N) {
    return quotient_system(F, quotient_context(F, N));
}

std::shared_ptr<const ExplicitSystem> induced_image_system(const FusionSystem& F,
                                                           const QuotientContext& q) {
    const SubgroupLattice& L = F.lattice();
    const SubgroupLattice& Lq = *q.lattice;
    std::vector<std::set<Table>> gens(Lq.size());
    for (SubId P = 0; P < L.size(); ++P)
        for (const auto& t : F.embeddings(P).maps) {
            SubId Pb;
            Table r = induced_on_quotient(L, q, P, t, &Pb);
            gens[Pb].insert(std::move(r));
        }
    std::vector<std::pair<SubId, Table>> seeds;
    for (SubId Pb = 0; Pb < Lq.size(); ++Pb)
        for (const auto& t : gens[Pb]) seeds.emplace_back(Pb, t);
    auto maps = close_maps(Lq, std::move(seeds));
    return std::make_shared<ExplicitSystem>(q.lattice, SystemKind::generated, Lq.whole(),
                                            std::move(maps), "<" + F.name() + " mod N>");
}

std::shared_ptr<const ExplicitSystem> induced_image_system(const FusionSystem& F, SubId N) {
    return induced_image_system(F, quotient_context(F, N));
}

FusionMorphism extend_over_N(const FusionSystem& F, const FusionMorphism& phi, SubId N) {
    const SubgroupLattice& L = F.lattice();
    if (L.order(N) == 1) return phi;
    const SubId PN = L.join(phi.domain, N);
    const SubId QN = L.join(phi.codomain, N);
    const FiniteGroup& S = L.group();
    const auto& pe = L.elements(phi.domain);
    for (const auto& t : F.embeddings(PN).maps) {
        bool ok = true;
        for (Elem x : t)
            if (!L.contains(QN, x)) {
                ok = false;
                break;
            }
        for (std::size_t i = 0; i < pe.size() && ok; ++i) {
            Elem y = t[L.position(PN, pe[i])];
            ok = L.contains(N, S.mul(S.inv(phi.table[i]), y));
        }
        if (ok) return {PN, QN, t};
    }
    throw NotFound("extend_over_N: no morphism on PN inducing phi modulo N");
}

// ---------------------------------------------------------------------------
// Morphisms of fusion systems

std::optional<std::pair<SubId, Table>> induced_map(const SubgroupLattice& L1,
                                                   const SubgroupLattice& L2,
                                                   const std::vector<Elem>& alpha, SubId P,
                                                   const Table& phi) {
    std::vector<Elem> imgs;
    const auto& e = L1.elements(P);
    for (Elem x : e) imgs.push_back(alpha[x]);
    const SubId AP = L2.id_of_elements(imgs);
    Table r(L2.order(AP));
    std::vector<char> set(r.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::size_t pos = L2.position(AP, alpha[e[i]]);
        const auto v = static_cast<std::uint16_t>(alpha[phi[i]]);
        if (set[pos] && r[pos] != v) return std::nullopt;
        set[pos] = 1;
        r[pos] = v;
    }
    if (!is_injective(r)) return std::nullopt;
    return std::make_pair(AP, std::move(r));
}

FunctorCheck verify_system_morphism(const std::vector<Elem>& alpha, const FusionSystem& F1,
                                    const FusionSystem& F2, bool keep_table) {
    const SubgroupLattice& L1 = F1.lattice();
    const SubgroupLattice& L2 = F2.lattice();
    FunctorCheck r;
    const FiniteGroup& S1 = L1.group();
    const FiniteGroup& S2 = L2.group();
    if (alpha.size() != S1.order()) {
        r.ok = false;
        r.reason = "alpha has the wrong size";
        return r;
    }
    for (Elem x = 0; x < S1.order(); ++x)
        for (Elem g : S1.generator_indices())
            if (alpha[S1.mul(x, g)] != S2.mul(alpha[x], alpha[g])) {
                r.ok = false;
                r.reason = "alpha is not a homomorphism";
                return r;
            }
    if (keep_table) r.functor.resize(L1.size());
    for (SubId P = 0; P < L1.size(); ++P) {
        const Embeddings e = F1.embeddings_uncached(P);
        for (const auto& t : e.maps) {
            ++r.checked;
            auto im = induced_map(L1, L2, alpha, P, t);
            std::optional<std::uint32_t> idx;
            if (im) {
                const auto& m2 = F2.embeddings(im->first).maps;
                auto it = std::lower_bound(m2.begin(), m2.end(), im->second);
                if (it != m2.end() && *it == im->second)
                    idx = static_cast<std::uint32_t>(it - m2.begin());
            }
            if (!idx) {
                r.ok = false;
                r.reason = im ? "induced map is not a morphism of the target"
                              : "induced map is not well defined";
                r.witness = FusionMorphism{P, L1.whole(), t};
                r.functor.clear();
                return r;
            }
            if (keep_table) r.functor[P].push_back(*idx);
        }
    }
    return r;
}

bool same_morphisms(const FusionSystem& A, const FusionSystem& B, std::string* diff) {
    const SubgroupLattice& La = A.lattice();
    const SubgroupLattice& Lb = B.lattice();
    auto fail = [&](const std::string& why) {
        if (diff) *diff = why;
        return false;
    };
    if (La.size() != Lb.size() || La.group().order() != Lb.group().order())
        return fail("different lattices");
    if (&La != &Lb)
        for (Elem x = 0; x < La.group().order(); ++x)
            if (La.group().element(x) != Lb.group().element(x)) return fail("different groups");
    for (SubId P = 0; P < La.size(); ++P)
        if (A.embeddings(P).maps != B.embeddings(P).maps)
            return fail("morphisms differ on subgroup " + La.key_hex(P));
    return true;
}

}  // namespace profusion
