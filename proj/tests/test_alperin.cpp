#include "doctest.h"
#include "naive_chains.hpp"
#include "oracles.hpp"
#include "systems.hpp"

#include <set>

#include "profusion/alperin.hpp"
#include "profusion/config.hpp"

using namespace profusion;
using fixtures::Named;

namespace {

using oracle::all_isos;
using oracle::naive_length;

void check_full_sweep(const FusionSystem& E) {
    for (const auto& phi : all_isos(E)) {
        auto c = refine_to_essential(E, alperin_decompose(E, phi));
        auto r = check_chain(E, c, phi);
        INFO(r.reason);
        CHECK(r.valid);
        CHECK(r.recomposes);
        CHECK(r.essential);
        CHECK(r.fully_normalized);
    }
}

std::vector<Named> small_systems() {
    return {fixtures::d8_inner(), fixtures::s4(), fixtures::sl2_3(), fixtures::gl3(),
            fixtures::realized("A4", catalog::alternating(4), 2)};
}

}  // namespace

TEST_CASE("essential subgroups of GL3(2) are S and the two Klein fours") {
    auto n = fixtures::gl3();
    const auto& F = *n.F;
    const auto& L = F.lattice();
    auto ess = essential_subgroups(F);
    REQUIRE(ess.size() == 3);
    CHECK(std::count(ess.begin(), ess.end(), L.whole()) == 1);
    for (SubId Q : ess) {
        if (Q == L.whole()) continue;
        CHECK(L.order(Q) == 4);
        for (Elem x : L.elements(Q)) CHECK(L.group().element_order(x) <= 2);
        auto info = essential_info(F, Q);
        CHECK(info.centric);
        CHECK(info.radical);
        CHECK(info.quillen == Connectivity::disconnected);
        CHECK(F.automorphisms(Q).size() == 6);
    }
    for (SubId Q = 0; Q < L.size(); ++Q)
        CHECK(is_essential(F, Q) == (std::find(ess.begin(), ess.end(), Q) != ess.end()));
}

TEST_CASE("essential implies radical; inner systems have only S") {
    for (const auto& n : small_systems()) {
        INFO(n.name);
        const auto& L = n.F->lattice();
        for (SubId Q = 0; Q < L.size(); ++Q) {
            auto info = essential_info(*n.F, Q);
            if (info.essential) CHECK(info.radical);
        }
    }
    auto d8 = fixtures::d8_inner();
    auto ess = essential_subgroups(*d8.F);
    CHECK(ess == std::vector<SubId>{d8.F->lattice().whole()});
    const auto& L = d8.F->lattice();
    CHECK_FALSE(is_centric(*d8.F, 0));
    CHECK(is_centric(*d8.F, L.whole()));
    // Z(S) is central, hence not centric and not essential
    CHECK_FALSE(is_essential(*d8.F, L.center(L.whole())));
}

TEST_CASE("O_p of small groups") {
    CHECK(o_p(catalog::symmetric(3), 2).order() == 1);
    CHECK(o_p(catalog::symmetric(3), 3).order() == 3);
    CHECK(o_p(catalog::symmetric(4), 2).order() == 4);
    CHECK(o_p(catalog::dihedral(4), 2).order() == 8);
    CHECK(o_p(catalog::gl3_2(), 2).order() == 1);
}

TEST_CASE("decomposition of every isomorphism in GL3(2) and S4") {
    check_full_sweep(*fixtures::gl3().F);
    check_full_sweep(*fixtures::s4().F);
    check_full_sweep(*fixtures::sl2_3().F);
    check_full_sweep(*fixtures::d8_inner().F);
}

TEST_CASE("relative decomposition") {
    auto s4 = fixtures::s4();
    auto A4 = fixtures::embedded(s4.G, catalog::alternating(4));
    auto E = realize_subsystem(s4.G, s4.S, A4, 2, s4.F->lattice_ptr());
    check_full_sweep(*E);

    auto gg = fixtures::gl3_squared();
    auto G1 = catalog::gl3_2();
    auto H = catalog::product_subgroup(gg.G, {trivial_subgroup(G1), whole_group(G1)});
    auto EH = realize_subsystem(gg.G, gg.S, H, 2, gg.F->lattice_ptr());
    const auto& L = EH->lattice();
    std::size_t n = 0;
    for (SubId P = 0; P < L.size(); P += 5) {
        const auto& e = EH->embeddings(P);
        for (std::size_t i = 0; i < e.maps.size(); ++i) {
            FusionMorphism phi{P, e.images[i], e.maps[i]};
            auto c = alperin_decompose(*EH, phi);
            auto r = check_chain(*EH, c, phi);
            INFO(r.reason);
            CHECK(r.valid);
            CHECK(r.recomposes);
            CHECK(r.essential);
            CHECK(r.fully_normalized);
            ++n;
        }
    }
    CHECK(n > 100);
}

TEST_CASE("decomposition of the counterexample fails") {
    auto ce = fixtures::d8_counterexample();
    CHECK_THROWS_AS(alperin_decompose(*ce.F, ce.phi), NotSaturated);
}

TEST_CASE("the GL3(2) example needs a non-S step") {
    auto ex = catalog::gl3_example();
    const FiniteGroup& G = *ex.G;
    // g P g^-1 = P2
    std::set<Elem> img;
    for (Elem x : ex.P.members()) img.insert(G.conj(ex.g, x));
    CHECK(img == std::set<Elem>(ex.P2.members().begin(), ex.P2.members().end()));
    CHECK(!oracle::transporter(G, ex.P.members(), ex.P2.members()).empty());
    // no element of N_G(S) does it
    for (Elem n : oracle::transporter(G, ex.S.members(), ex.S.members())) {
        std::set<Elem> im;
        for (Elem x : ex.P.members()) im.insert(G.conj(n, x));
        CHECK(im != img);
    }
    auto F = realize(ex.G, ex.S, 2);
    auto phi = fixtures::gl3_example_morphism(*F, ex);
    auto open = alp_length(*F, phi, AlpVariant::open);
    auto ess = alp_length(*F, phi, AlpVariant::essential);
    REQUIRE(open.length);
    REQUIRE(ess.length);
    CHECK(*open.length >= 1);
    CHECK(*ess.length >= *open.length);
    CHECK(naive_length(*F, phi, false, *open.length) == open.length);
    CHECK(naive_length(*F, phi, true, *ess.length) == ess.length);
    CHECK(*open.length == 2);
    CHECK(*ess.length == 2);
    CHECK(check_chain(*F, open.chain, phi).recomposes);
    CHECK(open.chain.length(F->lattice()) == *open.length);
}

TEST_CASE("alp_length agrees with naive chain search") {
    for (const auto& n : small_systems()) {
        INFO(n.name);
        const auto& F = *n.F;
        REQUIRE(F.lattice().size() <= 40);
        for (const auto& phi : all_isos(F)) {
            auto open = alp_length(F, phi, AlpVariant::open);
            auto closed = alp_length(F, phi, AlpVariant::closed);
            auto ess = alp_length(F, phi, AlpVariant::essential);
            REQUIRE(open.length);
            REQUIRE(ess.length);
            CHECK(closed.length == open.length);
            CHECK(*ess.length >= *open.length);
            CHECK(naive_length(F, phi, false, *open.length) == open.length);
            CHECK(naive_length(F, phi, true, *ess.length) == ess.length);
            auto c = check_chain(F, open.chain, phi);
            CHECK(c.valid);
            CHECK(c.recomposes);
            // adding an S-step never changes the length
            AlperinChain padded = open.chain;
            padded.steps.push_back({F.lattice().whole(), F.lattice().identity_table(F.lattice().whole())});
            CHECK(padded.length(F.lattice()) == *open.length);
        }
    }
}

TEST_CASE("refining a shortest chain") {
    auto n = fixtures::s4();
    const auto& F = *n.F;
    std::size_t refined = 0;
    for (const auto& phi : all_isos(F)) {
        auto raw = alp_length(F, phi, AlpVariant::open).chain;
        auto c = refine_to_essential(F, raw);
        auto r = check_chain(F, c, phi);
        CHECK(r.recomposes);
        CHECK(r.essential);
        CHECK(r.fully_normalized);
        // already essential and fully normalized chains are unchanged
        auto again = refine_to_essential(F, c);
        CHECK(again.steps.size() == c.steps.size());
        // one-step chain on a non-essential domain
        if (phi.domain == phi.codomain && !is_essential(F, phi.domain)) {
            AlperinChain one{phi.domain, {{phi.domain, phi.table}}};
            CHECK_FALSE(check_chain(F, one, phi).essential);
            auto r1 = check_chain(F, refine_to_essential(F, one), phi);
            CHECK(r1.recomposes);
            CHECK(r1.essential);
            CHECK(r1.fully_normalized);
            ++refined;
        }
    }
    CHECK(refined > 0);
}

TEST_CASE("essential subgroups of GL3(2)^2 have product shape") {
    auto pw = fixtures::gl3_power(2);
    const auto& Fp = *pw.F;
    const auto& Lp = Fp.lattice();
    const auto& L1 = pw.factor->lattice();
    auto ess1 = essential_subgroups(*pw.factor);
    auto ess = essential_subgroups(Fp);
    CHECK(ess.size() == 2 * (ess1.size() - 1) + 1);
    for (SubId P : ess) {
        auto r = product_radical_split(Fp, *pw.factor, *pw.factor, P);
        CHECK(r.is_product);
        CHECK(r.holds);
        CHECK((r.Q == L1.whole() || r.R == L1.whole()));
        CHECK(std::count(ess1.begin(), ess1.end(), r.Q) == 1);
        CHECK(std::count(ess1.begin(), ess1.end(), r.R) == 1);
    }
    for (SubId P = 0; P < Lp.size(); P += 3) {
        auto r = product_radical_split(Fp, *pw.factor, *pw.factor, P);
        INFO(Lp.key_hex(P));
        CHECK(r.holds);
    }
    // diagonal of V x V
    SubId V = 0;
    for (SubId Q : ess1)
        if (Q != L1.whole()) V = Q;
    std::vector<Elem> diag;
    const auto& G = *Fp.ambient();
    for (Elem x : L1.elements(V)) {
        Elem g = pw.factor->global(x);
        diag.push_back(*Fp.local(G.from_coords({g, g})));
    }
    SubId D = Lp.id_of_elements(diag);
    CHECK_FALSE(is_group_radical(Fp, D));
    CHECK_FALSE(product_radical_split(Fp, *pw.factor, *pw.factor, D).is_product);
}

TEST_CASE("length laws for GL3(2)^2") {
    auto pw = fixtures::gl3_power(2);
    const auto factors = pw.factors();
    auto r = product_length_laws(*pw.F, factors, {pw.phi, pw.phi}, true);
    CHECK(r.holds());
    CHECK(r.alp_ess_prod == 2 * r.alp_ess[0]);
    REQUIRE(r.alp_prod);
    CHECK(*r.alp_prod == r.alp[0]);

    const auto& L1 = pw.factor->lattice();
    FusionMorphism id{L1.whole(), L1.whole(), L1.identity_table(L1.whole())};
    auto r2 = product_length_laws(*pw.F, factors, {pw.phi, id}, false);
    CHECK(r2.alp_ess_prod == r2.alp_ess[0]);
}
