#pragma once

#include <optional>
#include <string>

#include "profusion/fusion.hpp"

namespace profusion {

// Axiom (c) is checked either for every morphism of F on J = <P, psi(P)>
// (full), or only for generators of Aut_F(Q) at fully normalized Q. The set
// of morphisms satisfying (c) is closed under composition and restriction, so
// the second form is complete when F is saturated; otherwise it falls back to
// the full sweep.
enum class AxiomCMode { generators, full };

struct SubsystemCheck {
    bool ok = true;
    // 's' (E not inside F), 'T' (T not strongly closed), or one of 'a'..'d'.
    char axiom = 0;
    std::string reason;
    std::optional<FusionMorphism> witness;
    std::optional<FusionMorphism> phi;  // the F-morphism for an axiom (c) failure
    std::size_t phi_checked = 0;
    AxiomCMode mode_used = AxiomCMode::full;
};

// E and F share the lattice; T is E.T().
SubsystemCheck is_T_subsystem(const FusionSystem& E, const FusionSystem& F,
                              AxiomCMode mode = AxiomCMode::generators);

// Saturation relative to E.T().
bool is_saturated_subsystem(const FusionSystem& E);

// {x in S : c_x in Aut_E(S)}. This is TZ(S), not T: c_x = c_t on S only
// pins x down modulo Z(S), so T itself is recovered only when Z(S) <= T.
SubId recover_T(const FusionSystem& E);
// Throws IntegrityError if recover_T(E) differs from TZ(S).
void verify_T(const FusionSystem& E);

// A morphism of E on PN into QN agreeing with phi modulo N. Requires N <= T;
// throws NotFound when there is none.
FusionMorphism extend_over_N_relative(const FusionSystem& E, const FusionMorphism& phi, SubId N);

}  // namespace profusion
