#include "profusion/saturation.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "profusion/config.hpp"

namespace profusion {

// ---------------------------------------------------------------------------
// Automorphism groups

std::optional<Elem> AutGroup::find(const Table& t) const {
    auto it = std::lower_bound(tables.begin(), tables.end(), t);
    if (it == tables.end() || *it != t) return std::nullopt;
    return static_cast<Elem>(it - tables.begin());
}

Elem AutGroup::index_of(const Table& t) const {
    auto r = find(t);
    if (!r) throw IntegrityError("map is not an automorphism in the system");
    return *r;
}

std::vector<Table> AutGroup::tables_of(const Subgroup& K) const {
    std::vector<Table> out;
    out.reserve(K.order());
    for (Elem k : K.members()) out.push_back(tables[k]);
    return out;
}

AutPtr aut_group(const FusionSystem& F, SubId Q) {
    const SubgroupLattice& L = F.lattice();
    auto A = std::make_shared<AutGroup>();
    A->Q = Q;
    A->tables = F.automorphisms(Q);
    std::vector<Permutation> perms;
    perms.reserve(A->tables.size());
    const std::size_t n = L.order(Q);
    for (const auto& t : A->tables) {
        std::vector<Point> img(n);
        for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>(L.position(Q, t[i]));
        perms.emplace_back(std::move(img));
    }
    A->group = FiniteGroup::from_elements(n, std::move(perms), {}, "Aut(Q)");
    return A;
}

std::vector<Table> conjugate_tables(const SubgroupLattice& L, SubId Q, const std::vector<Table>& K,
                                    const Table& phi) {
    const Table inv = invert_table(L, Q, phi);
    std::vector<Table> out;
    out.reserve(K.size());
    for (const auto& k : K) {
        Table r(inv.size());
        for (std::size_t j = 0; j < inv.size(); ++j)
            r[j] = phi[L.position(Q, k[L.position(Q, inv[j])])];
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end());
    return out;
}

SubId N_T(const FusionSystem& F, SubId Q) {
    const SubgroupLattice& L = F.lattice();
    return L.meet(F.T(), L.normalizer(Q));
}

SubId N_T_Q(const FusionSystem& F, SubId Q) { return F.lattice().join(N_T(F, Q), Q); }

Subgroup aut_T(const FusionSystem& F, const AutGroup& A) {
    const SubgroupLattice& L = F.lattice();
    std::set<Elem> m;
    for (Elem x : L.elements(N_T(F, A.Q))) m.insert(A.index_of(L.conjugation_table(x, A.Q)));
    return Subgroup(A.group, std::vector<Elem>(m.begin(), m.end()));
}

Subgroup aut_T_K(const FusionSystem& F, const AutGroup& A, const Subgroup& K) {
    return intersection(aut_T(F, A), K);
}

SubId N_T_K(const FusionSystem& F, SubId Q, const std::vector<Table>& K) {
    const SubgroupLattice& L = F.lattice();
    std::vector<Elem> xs;
    for (Elem x : L.elements(N_T(F, Q)))
        if (std::binary_search(K.begin(), K.end(), L.conjugation_table(x, Q))) xs.push_back(x);
    return L.id_of_elements(xs);
}

SubId N_T_K(const FusionSystem& F, const AutGroup& A, const Subgroup& K) {
    return N_T_K(F, A.Q, A.tables_of(K));
}

// ---------------------------------------------------------------------------
// Receptive, automized, normalized

SubId compute_N_phi(const FusionSystem& F, SubId R, const Table& phi) {
    const SubgroupLattice& L = F.lattice();
    const FiniteGroup& S = L.group();
    const SubId Q = L.image(phi);
    std::set<Table> inner;
    for (Elem y : L.elements(N_T_Q(F, Q))) inner.insert(L.conjugation_table(y, Q));
    const Table inv = invert_table(L, R, phi);
    std::vector<Elem> xs;
    Table t(inv.size());
    for (Elem x : L.elements(N_T_Q(F, R))) {
        for (std::size_t j = 0; j < inv.size(); ++j) t[j] = phi[L.position(R, S.conj(x, inv[j]))];
        if (inner.count(t)) xs.push_back(x);
    }
    return L.id_of_elements(xs);
}

namespace {

std::optional<FusionMorphism> find_extension(const FusionSystem& F, SubId R, const Table& phi,
                                             SubId N, SubId target) {
    const SubgroupLattice& L = F.lattice();
    std::vector<std::size_t> pos;
    for (Elem x : L.elements(R)) pos.push_back(L.position(N, x));
    const auto& e = F.embeddings(N);
    for (std::size_t i = 0; i < e.maps.size(); ++i) {
        if (!L.leq(e.images[i], target)) continue;
        const auto& t = e.maps[i];
        bool ok = true;
        for (std::size_t j = 0; j < pos.size() && ok; ++j) ok = t[pos[j]] == phi[j];
        if (ok) return FusionMorphism{N, target, t};
    }
    return std::nullopt;
}

}  // namespace

std::optional<FusionMorphism> receptive_extension(const FusionSystem& F, SubId R, const Table& phi) {
    const SubgroupLattice& L = F.lattice();
    return find_extension(F, R, phi, compute_N_phi(F, R, phi), N_T_Q(F, L.image(phi)));
}

ReceptiveReport is_receptive(const FusionSystem& F, SubId Q, bool keep_witnesses) {
    ReceptiveReport rep;
    const SubId target = N_T_Q(F, Q);
    for (SubId R : F.iso_class(Q)) {
        const auto& e = F.embeddings(R);
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            if (e.images[i] != Q) continue;
            ++rep.checked;
            NphiWitness w;
            w.phi = {R, Q, e.maps[i]};
            w.N_phi = compute_N_phi(F, R, e.maps[i]);
            w.extension = find_extension(F, R, e.maps[i], w.N_phi, target);
            if (!w.extension) {
                rep.receptive = false;
                rep.failure = std::move(w);
                return rep;
            }
            if (keep_witnesses) rep.witnesses.push_back(std::move(w));
        }
    }
    return rep;
}

bool is_fully_K_automized(const FusionSystem& F, const AutGroup& A, const Subgroup& K) {
    return aut_T_K(F, A, K).order() == p_part(K.order(), F.prime());
}

bool is_fully_K_normalized(const FusionSystem& F, const AutGroup& A, const Subgroup& K) {
    return is_fully_K_automized(F, A, K) && is_receptive(F, A.Q).receptive;
}

bool is_fully_normalized(const FusionSystem& F, SubId Q) {
    auto A = aut_group(F, Q);
    return is_fully_K_normalized(F, *A, whole_group(A->group));
}

bool is_fully_centralized(const FusionSystem& F, SubId Q) {
    auto A = aut_group(F, Q);
    return is_fully_K_normalized(F, *A, trivial_subgroup(A->group));
}

AutPtr SaturationCache::aut(SubId Q) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = aut_.find(Q);
        if (it != aut_.end()) return it->second;
    }
    AutPtr A = aut_group(F_, Q);
    std::lock_guard<std::mutex> lk(mu_);
    return aut_.emplace(Q, A).first->second;
}

bool SaturationCache::fully_normalized(SubId Q) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = fn_.find(Q);
        if (it != fn_.end()) return it->second;
    }
    AutPtr A = aut(Q);
    bool r = is_fully_K_normalized(F_, *A, whole_group(A->group));
    std::lock_guard<std::mutex> lk(mu_);
    fn_[Q] = r;
    return r;
}

// ---------------------------------------------------------------------------
// Saturation

std::vector<std::vector<SubId>> iso_classes(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    std::vector<char> seen(L.size(), 0);
    std::vector<std::vector<SubId>> out;
    for (SubId P = 0; P < L.size(); ++P) {
        if (seen[P]) continue;
        auto c = F.iso_class(P);
        for (SubId R : c) seen[R] = 1;
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

std::vector<SubId> candidate_order(const FusionSystem& F, std::vector<SubId> members) {
    const SubgroupLattice& L = F.lattice();
    std::stable_sort(members.begin(), members.end(), [&](SubId a, SubId b) {
        const std::size_t na = L.order(N_T_Q(F, a)), nb = L.order(N_T_Q(F, b));
        if (na != nb) return na > nb;
        return L.key(a) < L.key(b);
    });
    return members;
}

}  // namespace

Representative fully_normalized_representative(const FusionSystem& F, SubId P,
                                               const SaturationCache* cache) {
    const SubgroupLattice& L = F.lattice();
    SaturationCache local(F);
    const SaturationCache& C = cache ? *cache : local;
    if (C.fully_normalized(P)) return {P, {P, P, L.identity_table(P)}};
    for (SubId R : candidate_order(F, F.iso_class(P)))
        if (R != P && C.fully_normalized(R)) {
            const auto& e = F.embeddings(P);
            for (std::size_t i = 0; i < e.maps.size(); ++i)
                if (e.images[i] == R) return {R, {P, R, e.maps[i]}};
        }
    throw NotFound("no fully normalized subgroup in the class of " + L.key_hex(P));
}

SaturationReport is_saturated(const FusionSystem& F, const SaturationCache* cache) {
    return is_saturated_on(F, [](SubId) { return true; }, cache);
}

SaturationReport is_saturated_on(const FusionSystem& F, const std::function<bool(SubId)>& family,
                                 const SaturationCache* cache) {
    SaturationCache local(F);
    const SaturationCache& C = cache ? *cache : local;
    SaturationReport rep;
    for (auto& members : iso_classes(F)) {
        if (!family(members.front())) continue;
        ClassReport cr;
        for (SubId R : candidate_order(F, members))
            if (C.fully_normalized(R)) {
                cr.fully_normalized = R;
                break;
            }
        cr.members = std::move(members);
        if (!cr.fully_normalized) {
            rep.saturated = false;
            rep.failing_classes.push_back(rep.classes.size());
        }
        rep.classes.push_back(std::move(cr));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// K-normalization checks

KNormalReport check_k_normalized(const FusionSystem& F, const AutGroup& A, const Subgroup& K) {
    const SubgroupLattice& L = F.lattice();
    const SubId Q = A.Q;
    KNormalReport r;
    SaturationCache C(F);
    for (SubId R : F.iso_class(Q))
        if (C.fully_normalized(R)) {
            r.applicable = true;
            break;
        }
    r.normalized = is_fully_K_normalized(F, A, K);

    const std::vector<Table> Kt = A.tables_of(K);
    const SubId NK = N_T_K(F, Q, Kt);
    const SubId D = L.join(NK, Q);
    r.surjective = true;
    for (const auto& phi : F.embeddings(D).maps) {
        const Table onQ = restrict_table(L, D, phi, Q);
        const SubId X = L.image(onQ);
        const auto phiK = conjugate_tables(L, Q, Kt, onQ);
        if (L.image(restrict_table(L, D, phi, NK)) != N_T_K(F, X, phiK)) {
            r.surjective = false;
            break;
        }
    }

    auto value = [&](SubId X, const std::vector<Table>& KX) {
        return L.order(L.join(N_T_K(F, X, KX), X)) / L.order(X);
    };
    const std::size_t mine = value(Q, Kt);
    r.maximal = true;
    for (const auto& chi : F.embeddings(Q).maps)
        if (value(L.image(chi), conjugate_tables(L, Q, Kt, chi)) > mine) {
            r.maximal = false;
            break;
        }
    return r;
}

std::optional<Elem> k_automizer_search(const FusionSystem& F, const AutGroup& A, const Subgroup& K,
                                   const Subgroup& Lsub) {
    const FiniteGroup& Aut = *A.group;
    const Subgroup U = aut_T(F, A);
    const std::uint64_t target = p_part(Lsub.order(), F.prime());
    for (Elem kappa : K.members()) {
        std::size_t n = 0;
        for (Elem l : Lsub.members())
            if (U.contains(Aut.conj(kappa, l))) ++n;
        if (n == target) return kappa;
    }
    return std::nullopt;
}

std::optional<EquivFnormWitness> equiv_fnorm_search(const FusionSystem& F, const AutGroup& A,
                                                    const Subgroup& K, SubId R, const Table& phi) {
    const SubgroupLattice& L = F.lattice();
    const SubId Q = A.Q;
    const std::vector<Table> Kt = A.tables_of(K);
    const Table inv = invert_table(L, R, phi);
    const auto Kr = conjugate_tables(L, Q, Kt, inv);
    const SubId D = L.join(N_T_K(F, R, Kr), R);
    const SubId target = L.join(N_T_K(F, Q, Kt), Q);
    const auto& e = F.embeddings(D);
    for (std::size_t i = 0; i < e.maps.size(); ++i) {
        if (!L.leq(e.images[i], target)) continue;
        const Table onR = restrict_table(L, D, e.maps[i], R);
        if (L.image(onR) != Q) continue;
        Table chi(inv.size());
        for (std::size_t j = 0; j < inv.size(); ++j) chi[j] = onR[L.position(R, inv[j])];
        if (std::binary_search(Kt.begin(), Kt.end(), chi))
            return EquivFnormWitness{{D, target, e.maps[i]}, chi};
    }
    return std::nullopt;
}

std::optional<std::size_t> k_normal_image_check(const FusionSystem& F, const AutGroup& A,
                                         const Subgroup& K) {
    const SubgroupLattice& L = F.lattice();
    const SubId Q = A.Q;
    const std::vector<Table> Kt = A.tables_of(K);
    const SubId D = L.join(N_T_K(F, Q, Kt), Q);
    std::size_t n = 0;
    for (const auto& phi : F.embeddings(D).maps) {
        const Table onQ = restrict_table(L, D, phi, Q);
        const SubId X = L.image(onQ);
        auto AX = aut_group(F, X);
        std::vector<Elem> idx;
        for (const auto& t : conjugate_tables(L, Q, Kt, onQ)) idx.push_back(AX->index_of(t));
        if (!is_fully_K_normalized(F, *AX, Subgroup(AX->group, idx))) return std::nullopt;
        ++n;
    }
    return n;
}

QuotientReport quotient_preserves(const FusionSystem& F, SubId N) {
    const SubgroupLattice& L = F.lattice();
    QuotientReport rep;
    auto q = quotient_context(F, N);
    auto FN = quotient_system(F, q);
    SaturationCache C(F), CN(*FN);
    for (SubId Q = 0; Q < L.size(); ++Q) {
        if (!L.leq(N, Q) || !C.fully_normalized(Q)) continue;
        ++rep.checked;
        std::vector<Elem> img;
        for (Elem x : L.elements(Q)) img.push_back(q.projection[x]);
        if (!CN.fully_normalized(q.lattice->id_of_elements(img))) rep.images_fully_normalized = false;
    }
    rep.quotient_saturated = is_saturated(*FN, &CN).saturated;
    return rep;
}

std::vector<std::pair<std::string, Subgroup>> k_sweep(const FusionSystem& F, const AutGroup& A,
                                                      std::uint64_t seed, bool intermediate) {
    std::vector<std::pair<std::string, Subgroup>> out;
    out.emplace_back("1", trivial_subgroup(A.group));
    out.emplace_back("Aut_T", aut_T(F, A));
    out.emplace_back("Aut_F", whole_group(A.group));
    if (!intermediate || A.group->order() > caps().aut_order) return out;
    std::vector<Subgroup> mids;
    try {
        for (auto& H : all_subgroups(whole_group(A.group))) {
            bool dup = false;
            for (const auto& o : out) dup = dup || H == o.second;
            if (!dup) mids.push_back(std::move(H));
        }
    } catch (const CapExceeded&) {
        return out;
    }
    if (mids.empty()) return out;
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (A.Q + 1)));
    out.emplace_back("random", mids[rng() % mids.size()]);
    return out;
}

}  // namespace profusion
