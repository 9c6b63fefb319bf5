#include "doctest.h"
#include "oracles.hpp"
#include "systems.hpp"

#include <set>

#include "profusion/config.hpp"
#include "profusion/fusion.hpp"

using namespace profusion;
using fixtures::Named;

namespace {

// Category axioms, checked by brute force over all maps.
void check_axioms(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    for (SubId P = 0; P < L.size(); ++P) {
        const auto& e = F.embeddings(P);
        for (Elem s : L.elements(F.T())) CHECK(F.has_map(P, L.conjugation_table(s, P)));
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            const auto& t = e.maps[i];
            CHECK(is_injective(t));
            CHECK(L.order(e.images[i]) == L.order(P));
            for (const auto& psi : F.embeddings(e.images[i]).maps)
                CHECK(F.has_map(P, compose(L, e.images[i], psi, t)));
            CHECK(F.has_map(e.images[i], invert_table(L, P, t)));
            for (SubId R : L.maximal_subgroups(P)) CHECK(F.has_map(R, restrict_table(L, P, t, R)));
        }
    }
}

// |Hom(P,Q)| = |T_G(P,Q)| / |C_G(P)| by raw scans.
void check_realized_counts(const Named& n) {
    const auto& F = *n.F;
    const SubgroupLattice& L = F.lattice();
    for (SubId P = 0; P < L.size(); ++P) {
        std::vector<Elem> pg;
        for (Elem x : L.elements(P)) pg.push_back(F.global(x));
        auto C = oracle::centralizer(*n.G, pg);
        for (SubId Q = 0; Q < L.size(); ++Q) {
            std::vector<Elem> qg;
            for (Elem x : L.elements(Q)) qg.push_back(F.global(x));
            auto T = oracle::transporter(*n.G, pg, qg);
            CHECK(F.hom_set(P, Q).size() * C.size() == T.size());
        }
    }
}

}  // namespace

TEST_CASE("inner system hom sets are coset counts") {
    auto n = fixtures::d8_inner();
    const auto& L = n.F->lattice();
    CHECK(L.size() == 10);
    CHECK(n.F->hom_set(0, 0).size() == 1);
    check_realized_counts(n);
    check_axioms(*n.F);
}

TEST_CASE("realized systems match transporter counts") {
    for (auto n : {fixtures::s4(), fixtures::sl2_3(), fixtures::gl3()}) {
        INFO(n.name);
        check_realized_counts(n);
        check_axioms(*n.F);
    }
}

TEST_CASE("automorphisms of S in GL3(2) and of V in S4") {
    auto n = fixtures::gl3();
    const auto& L = n.F->lattice();
    auto N = oracle::transporter(*n.G, n.S.members(), n.S.members());
    auto C = oracle::centralizer(*n.G, n.S.members());
    CHECK(n.F->automorphisms(L.whole()).size() == N.size() / C.size());

    auto s4 = fixtures::s4();
    const auto& L4 = s4.F->lattice();
    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    std::vector<Elem> v;
    for (std::size_t i = 0; i < s4.S.members().size(); ++i)
        if (A4.contains(s4.S.members()[i])) v.push_back(static_cast<Elem>(i));
    SubId V = L4.id_of_elements(v);
    CHECK(L4.order(V) == 4);
    CHECK(s4.F->hom_set(V, V).size() == 6);
}

TEST_CASE("the GL3(2) example morphism is in F") {
    auto ex = catalog::gl3_example();
    auto F = realize(ex.G, ex.S, 2);
    const auto& L = F->lattice();
    std::vector<Elem> p, p2;
    for (Elem x : ex.P.members()) p.push_back(*F->local(x));
    for (Elem x : ex.P2.members()) p2.push_back(*F->local(x));
    SubId P = L.id_of_elements(p), P2 = L.id_of_elements(p2);
    CHECK(!F->hom_set(P, P2).empty());
    auto cg = F->conjugation(ex.g, P);
    REQUIRE(cg);
    CHECK(F->contains({P, P2, *cg}));
}

TEST_CASE("relative subsystems") {
    auto s4 = fixtures::s4();
    auto E = realize_subsystem(s4.G, s4.S, whole_group(s4.G), 2, s4.F->lattice_ptr());
    CHECK(same_morphisms(*E, *s4.F));
    auto E1 = realize_subsystem(s4.G, s4.S, trivial_subgroup(s4.G), 2, s4.F->lattice_ptr());
    const auto& L = E1->lattice();
    CHECK(E1->T() == 0);
    for (SubId P = 0; P < L.size(); ++P) {
        CHECK(E1->embeddings(P).maps.size() == 1);
        CHECK(E1->embeddings(P).maps[0] == L.identity_table(P));
    }
    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    auto EA = realize_subsystem(s4.G, s4.S, A4, 2, s4.F->lattice_ptr());
    CHECK(L.order(EA->T()) == 4);
    check_axioms(*EA);

    auto gg = fixtures::gl3_squared();
    auto G1 = catalog::gl3_2();
    auto H = catalog::product_subgroup(gg.G, {trivial_subgroup(G1), whole_group(G1)});
    auto EH = realize_subsystem(gg.G, gg.S, H, 2, gg.F->lattice_ptr());
    const auto& LL = EH->lattice();
    for (SubId P = 0; P < LL.size(); P += 7)
        for (const auto& t : EH->embeddings(P).maps)
            for (std::size_t i = 0; i < t.size(); ++i) {
                Elem a = EH->global(LL.elements(P)[i]), b = EH->global(t[i]);
                CHECK(gg.G->coord(a, 0) == gg.G->coord(b, 0));
            }
    CHECK_THROWS_AS(realize_subsystem(s4.G, s4.S, fixtures::embedded(s4.G, catalog::symmetric(3)), 2),
                    InputError);
}

TEST_CASE("generated systems") {
    auto n = fixtures::d8_inner();
    auto L = n.F->lattice_ptr();
    auto G0 = generated_system(L, {});
    CHECK(same_morphisms(*G0, *n.F));

    auto gl = fixtures::gl3();
    std::vector<FusionMorphism> all;
    const auto& Lg = gl.F->lattice();
    for (SubId P = 0; P < Lg.size(); ++P)
        for (const auto& t : gl.F->embeddings(P).maps) all.push_back({P, Lg.whole(), t});
    auto Gall = generated_system(gl.F->lattice_ptr(), all);
    CHECK(same_morphisms(*Gall, *gl.F));

    // An order-3 automorphism of a Klein four subgroup of D8.
    const FiniteGroup& S = L->group();
    SubId V = 0;
    for (SubId Q : L->of_order(4))
        if (L->generators(Q).size() == 2 && S.element_order(L->elements(Q)[1]) == 2 &&
            S.element_order(L->elements(Q)[2]) == 2 && S.element_order(L->elements(Q)[3]) == 2)
            V = Q;
    REQUIRE(V != 0);
    const auto& v = L->elements(V);
    Table rot{0, static_cast<std::uint16_t>(v[2]), static_cast<std::uint16_t>(v[3]),
              static_cast<std::uint16_t>(v[1])};
    REQUIRE(is_homomorphism(*L, V, rot));
    auto G3 = generated_system(L, {{V, V, rot}});
    CHECK(G3->automorphisms(V).size() >= 3 * n.F->automorphisms(V).size());
    check_axioms(*G3);
    CHECK_THROWS_AS(generated_system(L, {{V, V, Table{0, 0, 0, 0}}}), InputError);
}

TEST_CASE("strong closure") {
    auto s4 = fixtures::s4();
    const auto& L = s4.F->lattice();
    CHECK(is_strongly_closed(*s4.F, L.whole()));
    CHECK(is_strongly_closed(*s4.F, 0));
    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    std::vector<Elem> v;
    for (std::size_t i = 0; i < s4.S.members().size(); ++i)
        if (A4.contains(s4.S.members()[i])) v.push_back(static_cast<Elem>(i));
    SubId V = L.id_of_elements(v);
    CHECK(is_strongly_closed(*s4.F, V));
    // <(0 1)(2 3)> is fused to the other double transpositions.
    Elem x = *s4.F->local(s4.G->index_of(Permutation::from_cycles(4, {{0, 1}, {2, 3}})));
    CHECK(!is_strongly_closed(*s4.F, L.generated({x})));
    // Oracle: the definition, over all R <= Q and all maps out of R.
    auto sc = strongly_closed_subgroups(*s4.F);
    for (SubId Q = 0; Q < L.size(); ++Q) {
        bool ok = true;
        for (SubId R : L.subgroups_of(Q))
            for (SubId I : s4.F->embeddings(R).images) ok = ok && L.leq(I, Q);
        CHECK(ok == std::binary_search(sc.begin(), sc.end(), Q));
    }
}

TEST_CASE("quotient systems") {
    auto s4 = fixtures::s4();
    const auto& L = s4.F->lattice();
    auto top = quotient_system(*s4.F, L.whole());
    CHECK(top->lattice().size() == 1);
    auto same = quotient_system(*s4.F, 0);
    CHECK(same_morphisms(*same, *s4.F));

    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    std::vector<Elem> v;
    for (std::size_t i = 0; i < s4.S.members().size(); ++i)
        if (A4.contains(s4.S.members()[i])) v.push_back(static_cast<Elem>(i));
    SubId V = L.id_of_elements(v);
    auto q = quotient_context(*s4.F, V);
    auto FV = quotient_system(*s4.F, q);
    CHECK(FV->lattice().group().order() == 2);
    CHECK(same_morphisms(*FV, *induced_image_system(*s4.F, q)));
    auto chk = verify_system_morphism(q.projection, *s4.F, *FV);
    CHECK(chk.ok);
    CHECK(chk.checked == s4.F->morphism_count());

    Elem x = *s4.F->local(s4.G->index_of(Permutation::from_cycles(4, {{0, 1}, {2, 3}})));
    CHECK_THROWS_AS(quotient_system(*s4.F, L.generated({x})), InputError);

    // extend_over_N by exhaustive scan
    for (SubId P = 0; P < L.size(); ++P)
        for (const auto& t : s4.F->embeddings(P).maps) {
            FusionMorphism phi{P, L.whole(), t};
            auto ext = extend_over_N(*s4.F, phi, V);
            CHECK(L.leq(V, ext.domain));
            CHECK(s4.F->contains(ext));
            for (std::size_t i = 0; i < t.size(); ++i) {
                Elem y = ext.table[L.position(ext.domain, L.elements(P)[i])];
                CHECK(L.contains(V, L.group().mul(L.group().inv(t[i]), y)));
            }
            CHECK(extend_over_N(*s4.F, phi, 0) == phi);
        }
}

TEST_CASE("non-saturated counterexample: induced images differ from F/N") {
    auto c = fixtures::d8_counterexample();
    check_axioms(*c.F);
    CHECK(c.F->embeddings(c.phi.domain).maps.size() == 4);
    CHECK(is_strongly_closed(*c.F, c.Z));
    auto q = quotient_context(*c.F, c.Z);
    auto FN = quotient_system(*c.F, q);
    auto IN = induced_image_system(*c.F, q);
    CHECK(!same_morphisms(*FN, *IN));
    CHECK(FN->morphism_count() < IN->morphism_count());
    auto chk = verify_system_morphism(q.projection, *c.F, *FN);
    CHECK(!chk.ok);
    CHECK(chk.witness.has_value());
    CHECK_THROWS_AS(extend_over_N(*c.F, c.phi, c.Z), NotFound);
    CHECK(verify_system_morphism(q.projection, *c.F, *IN).ok);
}

TEST_CASE("identity system morphism and factorization") {
    auto s4 = fixtures::s4();
    const auto& L = s4.F->lattice();
    std::vector<Elem> id(L.group().order());
    for (Elem x = 0; x < id.size(); ++x) id[x] = x;
    auto chk = verify_system_morphism(id, *s4.F, *s4.F);
    CHECK(chk.ok);
    for (SubId P = 0; P < L.size(); ++P)
        for (std::size_t i = 0; i < chk.functor[P].size(); ++i) CHECK(chk.functor[P][i] == i);

    for (SubId P = 0; P < L.size(); ++P)
        for (const auto& f : s4.F->hom_set(P, L.whole())) {
            auto fz = factorize(L, f);
            CHECK(fz.iso.codomain == image_of(L, f));
            CHECK(compose(L, fz.incl, fz.iso) == f);
        }
    auto inc = inclusion(L, 0, L.whole());
    CHECK(factorize(L, inc).iso.table == inc.table);
}
