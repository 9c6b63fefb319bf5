#pragma once

#include <string>
#include <vector>

#include "profusion/group.hpp"

namespace profusion::catalog {

GroupPtr cyclic(std::size_t n);
// Dihedral group of order 2n acting on the n vertices of a polygon.
GroupPtr dihedral(std::size_t n);
GroupPtr symmetric(std::size_t n);
GroupPtr alternating(std::size_t n);
// SL_2(F_3) acting on the 8 nonzero vectors of F_3^2.
GroupPtr sl2_3();
// GL_3(F_2) acting on the 7 nonzero vectors of F_2^3.
GroupPtr gl3_2();

// Permutation of the nonzero vectors of F_q^n induced by x -> Mx (q prime).
// Vector v is numbered sum_i v_i q^i, minus one.
Permutation matrix_action(const std::vector<std::vector<int>>& M, unsigned q);
// The inverse numbering: coordinates of the nonzero vector with index `idx`.
std::vector<int> vector_of(std::size_t idx, std::size_t n, unsigned q);

// The upper unitriangular example in GL_3(F_2): S the Sylow 2-subgroup of
// upper unitriangular matrices, P = {I + t E12}, P2 = {I + t E23} and the
// cyclic permutation matrix g with g P g^-1 = P2.
struct Gl3Example {
    GroupPtr G;
    Subgroup S, P, P2;
    Elem g = 0;
};
Gl3Example gl3_example();

// Product of subgroups, one per factor, inside a product group.
Subgroup product_subgroup(const GroupPtr& G, const std::vector<Subgroup>& parts);
// Element of a product group from per-factor elements.
Elem product_element(const GroupPtr& G, const std::vector<Elem>& parts);

}  // namespace profusion::catalog
