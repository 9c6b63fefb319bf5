#include "doctest.h"
#include "systems.hpp"
#include "towers.hpp"

#include "profusion/config.hpp"
#include "profusion/subsystems.hpp"
#include "profusion/tower.hpp"

using namespace profusion;
using namespace fixtures;

TEST_CASE("single level tower is the realized system") {
    auto n = fixtures::s4();
    auto T = tower_from_group(n.G, n.S, 2, {trivial_subgroup(n.G)});
    CHECK(T.depth() == 1);
    CHECK(same_morphisms(T.top(), *n.F));
    CHECK(T.kernels[0] == 0);
    CHECK(stable_image(T, 0) == 0);
    CHECK(is_pro_saturated(T));
    auto s = saturation_at_depth(T);
    CHECK(s.all_ok);
    CHECK(s.open_ok);
}

TEST_CASE("GL3(2)^2 tower structure") {
    auto t = gl3_tower(2);
    const Tower& T = t.T;
    REQUIRE(T.depth() == 2);
    CHECK(T.level(0).lattice().size() == 10);
    CHECK(T.level(1).lattice().size() == 389);
    CHECK(T.limit_lattice().order(T.kernels[0]) == 8);
    CHECK(T.kernels[1] == 0);
    CHECK(is_strongly_closed(T.top(), T.kernels[0]));
    // f_0 is the first coordinate
    for (Elem x = 0; x < T.limit_lattice().group().order(); ++x) CHECK(T.to_level(0)[x] == coord(t, 0, x));
    CHECK(T.group_maps.size() == 1);
}

TEST_CASE("tower_from_group rejects bad chains") {
    auto n = fixtures::s4();
    auto A4 = fixtures::embedded(n.G, catalog::alternating(4));
    auto V = intersection(A4, n.S);  // the normal Klein four in S4
    REQUIRE(V.order() == 4);
    CHECK_THROWS_AS(tower_from_group(n.G, n.S, 2, {V, A4, trivial_subgroup(n.G)}), InputError);
    CHECK_THROWS_AS(tower_from_group(n.G, n.S, 2, {V}), InputError);
    CHECK_THROWS_AS(tower_from_group(n.G, n.S, 2, {n.S, trivial_subgroup(n.G)}), InputError);

    // a non-product quotient chain S4 -> S3 -> C2; the 2-parts are 8, 2, 2
    auto T = tower_from_group(n.G, n.S, 2, {A4, V, trivial_subgroup(n.G)});
    CHECK(T.depth() == 3);
    CHECK(T.level(0).S().order() == 2);
    CHECK(T.level(1).S().order() == 2);
    CHECK(T.level(2).S().order() == 8);
    CHECK(is_pro_saturated(T));
}

TEST_CASE("pro_hom is the set of threads") {
    auto t = gl3_tower(2);
    const Tower& T = t.T;
    const auto& L = T.limit_lattice();
    CHECK(pro_hom(T, 0, 0).size() == 1);
    for (SubId P = 0; P < L.size(); ++P) {
        auto th = pro_emb(T, P);
        std::vector<Table> lim;
        for (const auto& f : th) {
            CHECK(is_thread(T, f));
            lim.push_back(f.limit().table);
        }
        CHECK(lim == T.top().embeddings(P).maps);
    }
    for (SubId P = 0; P < L.size(); P += 11)
        for (SubId Q : {L.whole(), P, L.normalizer(P)}) {
            auto a = pro_hom(T, P, Q);
            auto b = pro_hom_brute(T, P, Q);
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].limit().table == b[k].limit().table);
            CHECK(a.size() == T.top().hom_set(P, Q).size());
        }
    // Mor of the limit is the limit of the Mor
    CHECK(limit_system(T)->morphism_count() == T.top().morphism_count());
}

TEST_CASE("continuity") {
    auto t = gl3_tower(2);
    const Tower& T = t.T;
    const auto& L = T.limit_lattice();
    std::vector<Elem> id(L.group().order());
    for (Elem x = 0; x < id.size(); ++x) id[x] = x;
    auto r = check_continuity({&T, &T, id});
    CHECK(r.level_for == std::vector<std::size_t>{0, 1});

    // projection onto the second coordinate
    auto one = gl3_tower(1);
    std::vector<Elem> pr;
    for (Elem x = 0; x < id.size(); ++x) pr.push_back(coord(t, 1, x));
    auto r2 = check_continuity({&T, &one.T, pr});
    CHECK(r2.level_for == std::vector<std::size_t>{1});
    // and onto the first
    auto r3 = check_continuity({&T, &one.T, T.to_level(0)});
    CHECK(r3.level_for == std::vector<std::size_t>{0});

    // F -> F/N for N = 1 x S
    auto q = quotient_context(T.top(), T.kernels[0]);
    SystemPtr FN = quotient_system(T.top(), q);
    auto QT = make_tower({FN}, {}, "F/N");
    auto r4 = check_continuity({&T, &QT, q.projection});
    CHECK(r4.level_for == std::vector<std::size_t>{0});

    // identity into the inner system is not a morphism
    SystemPtr inner = generated_system(T.level(0).lattice_ptr(), {}, "inner");
    auto IT = make_tower({inner}, {});
    std::vector<Elem> id0(T.level(0).S().order());
    for (Elem x = 0; x < id0.size(); ++x) id0[x] = x;
    CHECK_THROWS_AS(check_continuity({&one.T, &IT, id0}), NoFactoring);
}

TEST_CASE("stable images") {
    auto t = gl3_tower(2);
    CHECK(stable_image(t.T, 0) == 0);
    CHECK(stable_image(t.T, 1) == 1);

    auto s4 = fixtures::s4();
    const auto& L = s4.F->lattice();
    std::vector<Elem> id(L.group().order());
    for (Elem x = 0; x < id.size(); ++x) id[x] = x;
    auto constant = make_tower({s4.F, s4.F}, {id});
    CHECK(stable_image(constant, 0) == 0);

    // inner fusion on top of S4 fusion: the image shrinks at level 1
    SystemPtr inner = generated_system(s4.F->lattice_ptr(), {}, "inner");
    auto shrinking = make_tower({s4.F, inner}, {id});
    CHECK(stable_image(shrinking, 0) == 1);
    CHECK(is_pro_saturated(shrinking));
    CHECK_THROWS_AS(make_tower({inner, s4.F}, {id}), InputError);
}

TEST_CASE("pro-saturation") {
    CHECK(is_pro_saturated(gl3_tower(2).T));
    auto ce = fixtures::d8_counterexample();
    std::vector<Elem> id(ce.L->group().order());
    for (Elem x = 0; x < id.size(); ++x) id[x] = x;
    auto T = make_tower({ce.F, ce.F}, {id});
    CHECK_FALSE(is_pro_saturated(T));
    CHECK_FALSE(saturation_at_depth(T).all_ok);
}

TEST_CASE("quotient tower reconstruction") {
    auto t = gl3_tower(2);
    auto r = osc_quotient_tower(t.T);
    CHECK(r.quotients.size() == 4);  // 1, 1 x S, S x 1, S x S
    CHECK(r.all_generated_equal());
    CHECK(r.reconstructs);

    auto ce = fixtures::d8_counterexample();
    auto T = make_tower({ce.F}, {});
    auto rc = osc_quotient_tower(T);
    // maps that do not extend over N are lost in F/N
    CHECK_FALSE(rc.reconstructs);
    CHECK_FALSE(rc.all_generated_equal());
    bool witnessed = false;
    for (const auto& q : rc.quotients) witnessed = witnessed || q.witness.has_value();
    CHECK(witnessed);
}

TEST_CASE("saturation at depth") {
    auto s = saturation_at_depth(gl3_tower(2).T);
    CHECK(s.all_ok);
    CHECK(s.open_ok);
    CHECK(s.open.size() == 2);
}

TEST_CASE("Sylow limits") {
    auto t = gl3_tower(2);
    auto r = sylow_limit_check(t.T, t.T.group_maps);
    CHECK(r.compatible);
    CHECK(r.limit_sylow);
    CHECK(r.level_sylow == std::vector<bool>{true, true});
    const auto& G1 = t.T.groups[1];
    std::vector<GroupMap> broken{GroupMap(G1, t.T.groups[0], [](Elem) { return Elem{0}; })};
    CHECK_THROWS_AS(sylow_limit_check(t.T, broken), InputError);
    auto one = gl3_tower(1);
    CHECK(sylow_limit_check(one.T, {}).limit_sylow);
}

TEST_CASE("convergent Alperin on the GL3(2)^2 tower") {
    auto t = gl3_tower(2);
    const Tower& T = t.T;
    const auto& L = T.limit_lattice();
    auto seq = coordinate_sequence(t);
    const FusionMorphism phi = power_of(t, t.phi);
    auto sc = convergent_alperin(T, seq, phi);
    REQUIRE(sc.stages.size() == 2);
    CHECK(sc.final_is_inclusion);
    CHECK(sc.recomposes);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(sc.stages[i].residual_mod_T);
        CHECK(sc.stages[i].residual_in_next);
        CHECK_FALSE(sc.stages[i].chain.steps.empty());
        auto c = check_chain(*seq.systems[i], sc.stages[i].chain, sc.stages[i].psi);
        CHECK(c.valid);
        CHECK(c.recomposes);
        // stage i only moves coordinates >= i
        for (const auto& s : sc.stages[i].chain.steps)
            for (std::size_t a = 0; a < s.phi.size(); ++a)
                for (std::size_t k = 0; k < i; ++k) CHECK(coord(t, k, s.phi[a]) == coord(t, k, L.elements(s.Q)[a]));
    }
    CHECK(sc.stages[0].N == T.kernels[0]);
    CHECK(sc.stages[1].N == T.kernels[1]);

    // already in the last subsystem: only the final stage does anything
    std::vector<FusionMorphism> parts{inclusion(t.factor->lattice(), t.phi.domain, t.phi.domain), t.phi};
    auto last = product_morphism(*t.top, {t.factor, t.factor}, parts);
    auto s2 = convergent_alperin(T, seq, last);
    CHECK(s2.stages[0].chain.steps.empty());
    CHECK_FALSE(s2.stages[1].chain.steps.empty());
    CHECK(s2.final_is_inclusion);
    CHECK(s2.recomposes);

    // trivial-mod index for N = N_0: the first subsystem acting trivially mod N
    const SubId P = phi.domain;
    auto idx = trivial_mod_index(seq, P, T.kernels[0]);
    REQUIRE(idx);
    CHECK(*idx == 1);
    for (const auto& th : seq.systems[*idx]->embeddings(P).maps)
        for (std::size_t a = 0; a < th.size(); ++a) {
            const Elem u = L.elements(P)[a];
            CHECK(L.contains(T.kernels[0], L.group().mul(th[a], L.group().inv(u))));
        }
}

TEST_CASE("convergent Alperin rejects a non-saturated subsystem") {
    auto ce = fixtures::d8_counterexample();
    std::vector<Elem> id(ce.L->group().order());
    for (Elem x = 0; x < id.size(); ++x) id[x] = x;
    auto T = make_tower({ce.F}, {});
    SubsystemSequence seq{{ce.F}};
    try {
        convergent_alperin(T, seq, ce.phi);
        FAIL("expected a stage failure");
    } catch (const StageFailure& e) {
        CHECK(e.stage() == 0);
    }
}

TEST_CASE("limit length") {
    auto t = gl3_tower(2);
    const FusionMorphism phi = power_of(t, t.phi);
    auto r = limitlength_check(t.T, thread_of(t.T, phi));
    CHECK(r.per_level == std::vector<std::size_t>{2, 2});
    CHECK(r.bound);
    CHECK(r.limit == r.sup);
    CHECK(r.nondecreasing);

    const auto& L = t.T.limit_lattice();
    auto idr = limitlength_check(t.T, thread_of(t.T, inclusion(L, phi.domain, phi.domain)));
    CHECK(idr.limit == 0);
    CHECK(idr.sup == 0);
}
