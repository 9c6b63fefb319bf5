#include "doctest.h"
#include "oracles.hpp"
#include "systems.hpp"

#include "profusion/config.hpp"
#include "profusion/saturation.hpp"

using namespace profusion;
using fixtures::Named;

namespace {

std::vector<Elem> global_members(const RealizedSystem& F, SubId Q) {
    std::vector<Elem> out;
    for (Elem x : F.lattice().elements(Q)) out.push_back(F.global(x));
    return out;
}

// In F_S(G): Q is fully normalized iff N_S(Q) is Sylow in N_G(Q), and fully
// centralized iff C_S(Q) is Sylow in C_G(Q).
void check_against_group(const Named& n) {
    const auto& F = *n.F;
    const auto& L = F.lattice();
    for (SubId Q = 0; Q < L.size(); ++Q) {
        auto q = global_members(F, Q);
        auto NG = oracle::transporter(*n.G, q, q);
        auto CG = oracle::centralizer(*n.G, q);
        CHECK(is_fully_normalized(F, Q) == (L.order(L.normalizer(Q)) == p_part(NG.size(), n.p)));
        CHECK(is_fully_centralized(F, Q) == (L.order(L.centralizer(Q)) == p_part(CG.size(), n.p)));
    }
}

std::vector<Named> catalog_systems() {
    return {fixtures::d8_inner(), fixtures::s4(), fixtures::sl2_3(), fixtures::gl3(),
            fixtures::realized("A4", catalog::alternating(4), 2), fixtures::realized("S3 at 3", catalog::symmetric(3), 3)};
}

}  // namespace

TEST_CASE("Aut_F(Q) group indices follow table order") {
    auto n = fixtures::gl3();
    const auto& L = n.F->lattice();
    auto A = aut_group(*n.F, L.whole());
    REQUIRE(A->group->order() == A->tables.size());
    for (Elem i = 0; i < A->tables.size(); ++i) {
        auto perm = A->group->element(i);
        for (std::size_t j = 0; j < A->tables[i].size(); ++j)
            CHECK(L.elements(L.whole())[perm[j]] == A->tables[i][j]);
        CHECK(A->index_of(A->tables[i]) == i);
    }
    CHECK(aut_T(*n.F, *A).order() == 4);  // S/Z(S)
}

TEST_CASE("Aut_S(V) in S4 has order 2 and V is fully normalized") {
    auto n = fixtures::s4();
    const auto& L = n.F->lattice();
    for (SubId Q : L.of_order(4)) {
        auto A = aut_group(*n.F, Q);
        if (A->tables.size() != 6) continue;
        CHECK(aut_T(*n.F, *A).order() == 2);
        CHECK(is_fully_normalized(*n.F, Q));
    }
}

TEST_CASE("fully normalized and centralized agree with group scans") {
    for (const auto& n : catalog_systems()) {
        INFO(n.name);
        check_against_group(n);
    }
}

TEST_CASE("realized systems are saturated") {
    for (const auto& n : catalog_systems()) {
        INFO(n.name);
        auto r = is_saturated(*n.F);
        CHECK(r.saturated);
        CHECK(r.classes.size() == iso_classes(*n.F).size());
        for (SubId P = 0; P < n.F->lattice().size(); ++P) {
            auto rep = fully_normalized_representative(*n.F, P);
            CHECK(n.F->contains(rep.psi));
            CHECK(is_fully_normalized(*n.F, rep.R));
        }
    }
    auto gg = fixtures::gl3_squared();
    CHECK(is_saturated(*gg.F).saturated);
}

TEST_CASE("relative subsystems of normal subgroups are saturated") {
    auto s4 = fixtures::s4();
    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    auto EA = realize_subsystem(s4.G, s4.S, A4, 2, s4.F->lattice_ptr());
    CHECK(is_saturated(*EA).saturated);

    auto gg = fixtures::gl3_squared();
    auto G1 = catalog::gl3_2();
    auto H = catalog::product_subgroup(gg.G, {trivial_subgroup(G1), whole_group(G1)});
    auto EH = realize_subsystem(gg.G, gg.S, H, 2, gg.F->lattice_ptr());
    CHECK(is_saturated(*EH).saturated);
}

TEST_CASE("the D8 counterexample is not saturated") {
    auto ce = fixtures::d8_counterexample();
    const auto& L = *ce.L;
    auto r = is_saturated(*ce.F);
    CHECK_FALSE(r.saturated);
    REQUIRE(r.failing_classes.size() == 1);
    const auto& bad = r.classes[r.failing_classes[0]].members;
    CHECK(bad.size() == 4);
    for (SubId R : bad) CHECK(L.order(R) == 2);
    auto rec = is_receptive(*ce.F, ce.phi.codomain);
    CHECK_FALSE(rec.receptive);
    REQUIRE(rec.failure);
    CHECK(L.order(rec.failure->N_phi) == 4);
    CHECK_THROWS_AS(fully_normalized_representative(*ce.F, ce.phi.domain), NotFound);
}

TEST_CASE("N_phi") {
    auto n = fixtures::s4();
    const auto& F = *n.F;
    const auto& L = F.lattice();
    // identity: N_phi is N_S(R)R
    for (SubId R = 0; R < L.size(); ++R)
        CHECK(compute_N_phi(F, R, L.identity_table(R)) == N_T_Q(F, R));
    // N_phi always contains R and sits in N_S(R)
    for (SubId R = 0; R < L.size(); ++R)
        for (const auto& t : F.embeddings(R).maps) {
            SubId N = compute_N_phi(F, R, t);
            CHECK(L.leq(R, N));
            CHECK(L.leq(N, N_T_Q(F, R)));
        }
    auto rep = is_receptive(F, L.whole(), true);
    CHECK(rep.receptive);
    CHECK(rep.witnesses.size() == F.automorphisms(L.whole()).size());
}

TEST_CASE("K-normalized characterizations agree") {
    std::uint64_t seed = 7;
    auto systems = catalog_systems();
    systems.push_back(fixtures::gl3_squared());
    for (const auto& n : systems) {
        INFO(n.name);
        const auto& F = *n.F;
        const auto& L = F.lattice();
        std::size_t step = L.size() > 200 ? 13 : 1;
        for (SubId Q = 0; Q < L.size(); Q += step) {
            auto A = aut_group(F, Q);
            for (const auto& [label, K] : k_sweep(F, *A, seed, true)) {
                INFO(label);
                auto r = check_k_normalized(F, *A, K);
                CHECK(r.applicable);
                CHECK(r.agree());
                if (r.normalized) {
                    CHECK(k_normal_image_check(F, *A, K).has_value());
                    for (SubId R : F.iso_class(Q))
                        for (const auto& phi : F.iso_set(R, Q))
                            CHECK(equiv_fnorm_search(F, *A, K, R, phi.table).has_value());
                }
                if (is_fully_K_automized(F, *A, K))
                    for (const auto& [l2, Lsub] : k_sweep(F, *A, seed + 1, true))
                        if (Lsub.is_subgroup_of(K)) CHECK(k_automizer_search(F, *A, K, Lsub).has_value());
            }
        }
    }
}

TEST_CASE("quotients by normal subgroups preserve saturation") {
    auto n = fixtures::s4();
    const auto& L = n.F->lattice();
    for (SubId N = 0; N < L.size(); ++N) {
        if (!is_strongly_closed(*n.F, N)) continue;
        auto r = quotient_preserves(*n.F, N);
        CHECK(r.images_fully_normalized);
        CHECK(r.quotient_saturated);
    }
    auto gg = fixtures::gl3_squared();
    const auto& LL = gg.F->lattice();
    auto G1 = catalog::gl3_2();
    auto S1 = catalog::product_subgroup(gg.G, {sylow_p(G1, 2), trivial_subgroup(G1)});
    std::vector<Elem> loc;
    for (Elem x : S1.members()) loc.push_back(*gg.F->local(x));
    SubId N = LL.id_of_elements(loc);
    auto r = quotient_preserves(*gg.F, N);
    CHECK(r.checked > 0);
    CHECK(r.images_fully_normalized);
    CHECK(r.quotient_saturated);
}
