#include "profusion/subsystems.hpp"

#include "profusion/config.hpp"
#include "profusion/saturation.hpp"

namespace profusion {

namespace {

SubsystemCheck fail(SubsystemCheck r, char axiom, std::string why, std::optional<FusionMorphism> w) {
    r.ok = false;
    r.axiom = axiom;
    r.reason = std::move(why);
    r.witness = std::move(w);
    return r;
}

// phi psi phi^-1 on phi(P), for phi on Q and psi on P with P, psi(P) <= Q.
Table conjugate_map(const SubgroupLattice& L, SubId Q, const Table& phi, const Table& phi_inv,
                    SubId phiQ, SubId P, const Table& psi, SubId phiP) {
    const auto& e = L.elements(phiP);
    Table r(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        const Elem u = phi_inv[L.position(phiQ, e[j])];
        r[j] = phi[L.position(Q, psi[L.position(P, u)])];
    }
    return r;
}

// Axiom (c) for one F-morphism phi on Q, over all P <= Q and all psi in E on P
// with psi(P) <= Q. When `only_J` is set, only pairs with <P, psi(P)> = Q.
std::optional<FusionMorphism> check_c_at(const FusionSystem& E, SubId Q, const Table& phi,
                                         bool only_J) {
    const SubgroupLattice& L = E.lattice();
    const SubId phiQ = L.image(phi);
    const Table inv = invert_table(L, Q, phi);
    for (SubId P : L.subgroups_of(Q)) {
        const auto& e = E.embeddings(P);
        std::optional<SubId> phiP;
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            if (!L.leq(e.images[i], Q)) continue;
            if (only_J && L.join(P, e.images[i]) != Q) continue;
            if (!phiP) phiP = L.image(restrict_table(L, Q, phi, P));
            Table chi = conjugate_map(L, Q, phi, inv, phiQ, P, e.maps[i], *phiP);
            if (!E.has_map(*phiP, chi)) return FusionMorphism{P, e.images[i], e.maps[i]};
        }
    }
    return std::nullopt;
}

}  // namespace

SubsystemCheck is_T_subsystem(const FusionSystem& E, const FusionSystem& F, AxiomCMode mode) {
    const SubgroupLattice& L = E.lattice();
    if (&L != &F.lattice()) throw InputError("subsystem and ambient system must share a lattice");
    const FiniteGroup& S = L.group();
    const SubId T = E.T();
    SubsystemCheck r;
    r.mode_used = mode;

    if (!is_strongly_closed(F, T)) return fail(r, 'T', "T is not strongly closed in F", std::nullopt);

    for (SubId P = 0; P < L.size(); ++P) {
        const auto& e = E.embeddings(P);
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            const FusionMorphism m{P, e.images[i], e.maps[i]};
            if (!F.has_map(P, e.maps[i])) return fail(r, 's', "morphism of E not in F", m);
            const auto& pe = L.elements(P);
            for (std::size_t j = 0; j < pe.size(); ++j)
                if (!L.contains(T, S.mul(e.maps[i][j], S.inv(pe[j]))))
                    return fail(r, 'd', "psi(u)u^-1 outside T", m);
        }
    }

    for (SubId P = 0; P < L.size(); ++P)
        for (Elem x : L.elements(T)) {
            Table c = L.conjugation_table(x, P);
            if (!E.has_map(P, c)) return fail(r, 'a', "missing T-conjugation", FusionMorphism{P, L.image(c), c});
        }

    // Subcategory closed under composition, inverses of isomorphisms and
    // restriction; with maps stored as embeddings this is (b).
    for (SubId P = 0; P < L.size(); ++P) {
        const auto& e = E.embeddings(P);
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            const auto& t = e.maps[i];
            const SubId X = e.images[i];
            const FusionMorphism m{P, X, t};
            if (!E.has_map(X, invert_table(L, P, t))) return fail(r, 'b', "inverse missing", m);
            for (SubId R : L.maximal_subgroups(P))
                if (!E.has_map(R, restrict_table(L, P, t, R))) return fail(r, 'b', "restriction missing", m);
            for (const auto& psi : E.embeddings(X).maps)
                if (!E.has_map(P, compose(L, X, psi, t))) return fail(r, 'b', "composite missing", m);
        }
    }

    if (mode == AxiomCMode::generators && !is_saturated(F).saturated) r.mode_used = AxiomCMode::full;

    if (r.mode_used == AxiomCMode::full) {
        for (SubId Q = 0; Q < L.size(); ++Q) {
            for (const auto& phi : F.embeddings_uncached(Q).maps) {
                ++r.phi_checked;
                if (auto w = check_c_at(E, Q, phi, true)) {
                    r.phi = FusionMorphism{Q, L.image(phi), phi};
                    return fail(r, 'c', "conjugate of an E-morphism by phi is not in E", w);
                }
            }
        }
        return r;
    }

    SaturationCache C(F);
    const auto rep = is_saturated(F, &C);
    for (const auto& cls : rep.classes) {
        const SubId Q = *cls.fully_normalized;
        auto A = C.aut(Q);
        const Subgroup all = whole_group(A->group);
        for (Elem g : all.generators()) {
            ++r.phi_checked;
            const Table& phi = A->tables[g];
            if (auto w = check_c_at(E, Q, phi, false)) {
                r.phi = FusionMorphism{Q, Q, phi};
                return fail(r, 'c', "conjugate of an E-morphism by phi is not in E", w);
            }
        }
    }
    return r;
}

bool is_saturated_subsystem(const FusionSystem& E) { return is_saturated(E).saturated; }

SubId recover_T(const FusionSystem& E) {
    const SubgroupLattice& L = E.lattice();
    std::vector<Elem> xs;
    for (Elem x : L.elements(L.whole()))
        if (E.has_map(L.whole(), L.conjugation_table(x, L.whole()))) xs.push_back(x);
    return L.id_of_elements(xs);
}

void verify_T(const FusionSystem& E) {
    const SubgroupLattice& L = E.lattice();
    const SubId R = recover_T(E);
    const SubId want = L.join(E.T(), L.center(L.whole()));
    if (R != want)
        throw IntegrityError("recovered T " + L.key_hex(R) + " differs from TZ(S) " + L.key_hex(want));
}

FusionMorphism extend_over_N_relative(const FusionSystem& E, const FusionMorphism& phi, SubId N) {
    if (!E.lattice().leq(N, E.T())) throw InputError("N must lie in T");
    return extend_over_N(E, phi, N);
}

}  // namespace profusion
