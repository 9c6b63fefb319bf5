#pragma once
// Product towers of the GL3(2) example shared by the tower tests and the
// acceptance binary.

#include <vector>

#include "profusion/subsystems.hpp"
#include "profusion/tower.hpp"
#include "systems.hpp"

namespace fixtures {

struct Gl3Tower {
    catalog::Gl3Example ex;
    Tower T;
    const RealizedSystem* factor = nullptr;
    const RealizedSystem* top = nullptr;
    FusionMorphism phi;  // c_g on P in the factor
};

inline Gl3Tower gl3_tower(std::size_t n) {
    Gl3Tower r{catalog::gl3_example(), {}, nullptr, nullptr, {}};
    r.T = product_tower(std::vector<GroupPtr>(n, r.ex.G), std::vector<Subgroup>(n, r.ex.S), 2);
    r.factor = dynamic_cast<const RealizedSystem*>(r.T.levels[0].get());
    r.top = dynamic_cast<const RealizedSystem*>(r.T.levels.back().get());
    r.phi = fixtures::gl3_example_morphism(*r.factor, r.ex);
    return r;
}

inline FusionMorphism power_of(const Gl3Tower& t, const FusionMorphism& f) {
    const std::size_t n = t.T.depth();
    if (n == 1) return f;
    return product_morphism(*t.top, std::vector<const RealizedSystem*>(n, t.factor),
                            std::vector<FusionMorphism>(n, f));
}

// Coordinate k of x in the top level (factor-local index).
inline Elem coord(const Gl3Tower& t, std::size_t k, Elem x) {
    if (t.T.depth() == 1) return x;
    return *t.factor->local(t.top->ambient()->coord(t.top->global(x), k));
}

inline SubsystemSequence coordinate_sequence(const Gl3Tower& t) {
    const std::size_t n = t.T.depth();
    const auto& G = t.top->ambient();
    SubsystemSequence seq;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            seq.systems.push_back(t.T.levels.back());
            continue;
        }
        std::vector<Subgroup> parts;
        for (std::size_t k = 0; k < n; ++k)
            parts.push_back(k < i ? trivial_subgroup(t.ex.G) : whole_group(t.ex.G));
        seq.systems.push_back(realize_subsystem(G, t.top->sylow(), catalog::product_subgroup(G, parts), 2,
                                                t.top->lattice_ptr()));
    }
    return seq;
}

}  // namespace fixtures
