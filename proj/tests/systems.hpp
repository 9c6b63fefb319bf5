#pragma once
// Catalog systems shared by the tests and the acceptance binary.

#include <memory>
#include <string>
#include <vector>

#include "profusion/catalog.hpp"
#include "profusion/fusion.hpp"

namespace fixtures {

using namespace profusion;

struct Named {
    std::string name;
    GroupPtr G;
    Subgroup S;
    unsigned p;
    std::shared_ptr<const RealizedSystem> F;
};

inline Named realized(std::string name, GroupPtr G, unsigned p) {
    Subgroup S = sylow_p(G, p);
    auto F = realize(G, S, p);
    return {std::move(name), G, S, p, F};
}

inline Named d8_inner() {
    auto D8 = catalog::dihedral(4);
    return realized("D8 inner", D8, 2);
}
inline Named s4() { return realized("S4", catalog::symmetric(4), 2); }
inline Named sl2_3() { return realized("SL2(3)", catalog::sl2_3(), 3); }
inline Named gl3() {
    auto ex = catalog::gl3_example();
    return {"GL3(2)", ex.G, ex.S, 2, realize(ex.G, ex.S, 2)};
}
inline Named gl3_squared() {
    auto G = catalog::gl3_2();
    return realized("GL3(2)^2", direct_product({G, G}).group, 2);
}

// The elements of H (a group on the same points) inside G.
inline Subgroup embedded(const GroupPtr& G, const GroupPtr& H) {
    std::vector<Elem> m;
    for (Elem x = 0; x < H->order(); ++x) m.push_back(G->index_of(H->element(x)));
    return Subgroup(G, m);
}

// c_g on P for the GL3(2) example, in a system on the example's S.
inline FusionMorphism gl3_example_morphism(const RealizedSystem& F, const catalog::Gl3Example& ex) {
    const auto& L = F.lattice();
    std::vector<Elem> p;
    for (Elem x : ex.P.members()) p.push_back(*F.local(x));
    SubId P = L.id_of_elements(p);
    Table t = *F.conjugation(ex.g, P);
    return {P, L.image(t), t};
}

// GL3(2)^n on S^n for the example's S, with the factor system and the
// example morphism in the factor.
struct Gl3Power {
    catalog::Gl3Example ex;
    std::shared_ptr<const RealizedSystem> factor;
    std::shared_ptr<const RealizedSystem> F;
    FusionMorphism phi;
    std::vector<const RealizedSystem*> factors() const {
        return std::vector<const RealizedSystem*>(F->ambient()->factor_count(), factor.get());
    }
};
inline Gl3Power gl3_power(std::size_t n) {
    Gl3Power r;
    r.ex = catalog::gl3_example();
    r.factor = realize(r.ex.G, r.ex.S, 2);
    auto G = direct_product(std::vector<GroupPtr>(n, r.ex.G)).group;
    auto S = catalog::product_subgroup(G, std::vector<Subgroup>(n, r.ex.S));
    r.F = realize(G, S, 2);
    r.phi = gl3_example_morphism(*r.factor, r.ex);
    return r;
}

// Involutions rs and s of D8 = <r = (0 1 2 3), s = (0 2)>.
struct D8Counterexample {
    LatticePtr L;
    std::shared_ptr<const ExplicitSystem> F;
    SubId Z;
    FusionMorphism phi;
};

// The fusion system on D8 generated by one isomorphism between order-2
// subgroups from the two different classes of non-central involutions. It is
// not saturated: the isomorphism cannot extend to the normalizer.
inline D8Counterexample d8_counterexample() {
    auto D8 = catalog::dihedral(4);
    auto L = make_lattice(whole_group(D8), 2);
    const FiniteGroup& S = L->group();
    Elem r = S.index_of(Permutation::from_cycles(4, {{0, 1, 2, 3}}));
    Elem s = S.index_of(Permutation::from_cycles(4, {{0, 2}}));
    Elem rs = S.mul(r, s);
    SubId A = L->generated({rs});
    SubId B = L->generated({s});
    FusionMorphism phi{A, B, Table{0, static_cast<std::uint16_t>(s)}};
    auto F = generated_system(L, {phi}, "D8 + (rs -> s)");
    return {L, F, L->generated({S.mul(r, r)}), phi};
}

}  // namespace fixtures
