#include "doctest.h"
#include "oracles.hpp"

#include "profusion/catalog.hpp"
#include "profusion/config.hpp"
#include "profusion/group.hpp"

using namespace profusion;

TEST_CASE("closure orders") {
    CHECK(FiniteGroup::from_generators(1, {})->order() == 1);
    auto D8 = catalog::dihedral(4);
    CHECK(D8->order() == 8);
    CHECK(oracle::closure(D8->generators(), 4).size() == 8);
    auto G = catalog::gl3_2();
    CHECK(G->order() == 168);
    CHECK(oracle::closure(G->generators(), 7).size() == 168);
    CHECK(catalog::sl2_3()->order() == 24);
    CHECK(catalog::symmetric(4)->order() == 24);
    CHECK(catalog::alternating(4)->order() == 12);
}

TEST_CASE("canonical element order") {
    auto G = catalog::symmetric(4);
    CHECK(G->element(0).is_identity());
    for (Elem x = 1; x < G->order(); ++x) CHECK(G->element(x - 1) < G->element(x));
    for (Elem x = 0; x < G->order(); ++x)
        for (Elem y = 0; y < G->order(); ++y)
            CHECK(G->element(G->mul(x, y)) == G->element(x) * G->element(y));
}

TEST_CASE("order cap is enforced") {
    Caps c = caps();
    c.group_order = 100;
    CapsOverride o(c);
    CHECK_THROWS_AS(catalog::gl3_2(), CapExceeded);
}

TEST_CASE("subgroup_generated") {
    auto D8 = catalog::dihedral(4);
    CHECK(subgroup_generated(D8, {}).order() == 1);
    Elem r = D8->index_of(Permutation::from_cycles(4, {{0, 1, 2, 3}}));
    auto Z = subgroup_generated(D8, {D8->mul(r, r)});
    CHECK(Z.order() == 2);
    auto ex = catalog::gl3_example();
    CHECK(ex.S.order() == 8);
    CHECK(ex.P.order() == 2);
    CHECK(ex.P2.order() == 2);
}

TEST_CASE("normalizer, centralizer and transporter agree with scans") {
    auto D8 = catalog::dihedral(4);
    auto W = whole_group(D8);
    CHECK(normalizer(D8, W).order() == 8);
    Elem r = D8->index_of(Permutation::from_cycles(4, {{0, 1, 2, 3}}));
    auto Z = subgroup_generated(D8, {D8->mul(r, r)});
    CHECK(centralizer(D8, Z).order() == 8);
    Elem s = D8->index_of(Permutation::from_cycles(4, {{0, 2}}));
    auto R = subgroup_generated(D8, {s});
    CHECK(transporter(D8, R, Z).empty());
    CHECK(oracle::transporter(*D8, R.members(), Z.members()).empty());

    auto ex = catalog::gl3_example();
    auto NS = normalizer(ex.G, ex.S);
    CHECK(NS.members() == oracle::transporter(*ex.G, ex.S.members(), ex.S.members()));
    CHECK(NS.order() == 8);
    auto T = transporter(ex.G, ex.P, ex.P2);
    CHECK(std::find(T.begin(), T.end(), ex.g) != T.end());
    CHECK(T == oracle::transporter(*ex.G, ex.P.members(), ex.P2.members()));
    for (Elem n : NS.members()) CHECK(std::find(T.begin(), T.end(), n) == T.end());
    CHECK(centralizer(ex.G, ex.P).members() == oracle::centralizer(*ex.G, ex.P.members()));

    auto A4 = catalog::alternating(4);
    auto S4 = catalog::symmetric(4);
    std::vector<Elem> a4;
    for (Elem x = 0; x < S4->order(); ++x)
        if (A4->find(S4->element(x))) a4.push_back(x);
    Subgroup H(S4, a4);
    CHECK(is_normal(S4, H));
    CHECK(transporter(S4, H, H).size() == 24);
}

TEST_CASE("product transporter and centralizer match scans") {
    auto D8 = catalog::dihedral(4);
    auto S3 = catalog::symmetric(3);
    auto G = direct_product({D8, S3}).group;
    CHECK(G->order() == 48);
    auto P = subgroup_generated(G, {G->from_coords({1, 0}), G->from_coords({0, 1})});
    auto Q = subgroup_generated(G, {G->from_coords({2, 0}), G->from_coords({0, 2})});
    CHECK(transporter(G, P, Q) == oracle::transporter(*G, P.members(), Q.members()));
    CHECK(transporter(G, P, P) == oracle::transporter(*G, P.members(), P.members()));
    CHECK(centralizer(G, P).members() == oracle::centralizer(*G, P.members()));
    for (Elem x = 0; x < G->order(); ++x)
        for (Elem y = 0; y < G->order(); y += 5)
            CHECK(G->element(G->mul(x, y)) == G->element(x) * G->element(y));
    for (Elem x = 1; x < G->order(); ++x) CHECK(G->element(x - 1) < G->element(x));
}

TEST_CASE("sylow subgroups") {
    auto C2 = catalog::cyclic(2);
    CHECK(sylow_p(C2, 2).order() == 2);
    auto ex = catalog::gl3_example();
    auto S = sylow_p(ex.G, 2);
    CHECK(S.order() == 8);
    CHECK(!transporter(ex.G, S, ex.S).empty());
    CHECK(sylow_p(catalog::symmetric(4), 3).order() == 3);
    auto GG = direct_product({ex.G, ex.G}).group;
    CHECK(GG->order() == 28224);
    CHECK(sylow_p(GG, 2).order() == 64);
    CHECK(sylow_p(catalog::sl2_3(), 3).order() == 3);
    CHECK(sylow_p(catalog::sl2_3(), 2).order() == 8);
}

TEST_CASE("all_subgroups matches the join-closure oracle") {
    auto check = [](const GroupPtr& G) {
        auto subs = all_subgroups(whole_group(G));
        auto ref = oracle::subgroups_by_joins(*G);
        std::set<std::set<Elem>> got;
        for (const auto& H : subs) got.insert(std::set<Elem>(H.members().begin(), H.members().end()));
        CHECK(got.size() == subs.size());
        CHECK(got == ref);
        for (std::size_t i = 1; i < subs.size(); ++i) CHECK(subs[i - 1].order() <= subs[i].order());
        for (const auto& H : subs) CHECK(G->order() % H.order() == 0);
        return subs.size();
    };
    CHECK(check(FiniteGroup::from_generators(1, {})) == 1);
    CHECK(check(catalog::cyclic(2)) == 2);
    CHECK(check(catalog::dihedral(4)) == 10);
    check(catalog::cyclic(8));
    check(direct_product({catalog::cyclic(2), catalog::cyclic(2), catalog::cyclic(2)}).group);
    check(direct_product({catalog::dihedral(4), catalog::cyclic(2)}).group);
    check(Subgroup(sylow_p(catalog::sl2_3(), 2)).parent());
    check(catalog::symmetric(4));
    check(catalog::alternating(4));
    check(catalog::sl2_3());
    auto ex = catalog::gl3_example();
    CHECK(all_subgroups(ex.S).size() == 10);
}

TEST_CASE("all_subgroups of a 2-group of order 64") {
    auto D8 = catalog::dihedral(4);
    auto G = direct_product({D8, D8}).group;
    auto subs = all_subgroups(whole_group(G));
    auto ref = oracle::subgroups_by_joins(*G);
    CHECK(subs.size() == ref.size());
}

TEST_CASE("products and quotients") {
    auto C2 = catalog::cyclic(2);
    auto one = direct_product({C2});
    CHECK(one.group->order() == 2);
    CHECK(one.projections[0](1) == 1);
    auto V = direct_product({C2, C2});
    CHECK(V.group->order() == 4);
    for (Elem x = 0; x < 4; ++x)
        CHECK(V.group->from_coords({V.projections[0](x), V.projections[1](x)}) == x);

    auto D8 = catalog::dihedral(4);
    CHECK(quotient_group(D8, whole_group(D8)).group->order() == 1);
    Elem r = D8->index_of(Permutation::from_cycles(4, {{0, 1, 2, 3}}));
    auto Z = subgroup_generated(D8, {D8->mul(r, r)});
    auto q = quotient_group(D8, Z);
    CHECK(q.group->order() == 4);
    for (Elem x = 0; x < 8; ++x)
        for (Elem y = 0; y < 8; ++y)
            CHECK(q.projection(D8->mul(x, y)) == q.group->mul(q.projection(x), q.projection(y)));
    CHECK(kernel(q.projection) == Z);
    auto C4 = catalog::cyclic(4);
    auto c2 = subgroup_generated(C4, {C4->pow(C4->generator_indices()[0], 2)});
    CHECK(quotient_group(C4, c2).group->order() == 2);
    Elem s = D8->index_of(Permutation::from_cycles(4, {{0, 2}}));
    CHECK_THROWS_AS(quotient_group(D8, subgroup_generated(D8, {s})), InputError);

    auto GG = direct_product({D8, C4}).group;
    auto N = catalog::product_subgroup(GG, {whole_group(D8), trivial_subgroup(C4)});
    auto qq = quotient_group(GG, N);
    CHECK(qq.group->order() == 4);
    CHECK(kernel(qq.projection) == N);
}

TEST_CASE("quillen connectivity") {
    CHECK(quillen_poset_connected(catalog::cyclic(3), 2) == Connectivity::empty);
    CHECK(quillen_poset_connected(catalog::symmetric(3), 3) == Connectivity::connected);
    CHECK(quillen_poset_connected(catalog::symmetric(3), 2) == Connectivity::disconnected);
    auto S4 = catalog::symmetric(4);
    CHECK(quillen_poset_connected(direct_product({S4, S4}).group, 2) == Connectivity::connected);
    for (auto G : {catalog::symmetric(3), catalog::symmetric(4), catalog::alternating(4),
                   catalog::sl2_3(), catalog::dihedral(4), catalog::gl3_2(), catalog::alternating(5)})
        for (unsigned p : {2u, 3u, 5u}) {
            int c = oracle::quillen_components(*G, p);
            auto v = quillen_poset_connected(G, p);
            CHECK(v == (c == 0 ? Connectivity::empty
                               : c == 1 ? Connectivity::connected : Connectivity::disconnected));
        }
}
