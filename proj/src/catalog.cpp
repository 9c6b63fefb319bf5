#include "profusion/catalog.hpp"

#include <functional>

#include "profusion/config.hpp"

namespace profusion::catalog {

namespace {

Permutation cycle(std::size_t degree, std::vector<std::size_t> c) {
    return Permutation::from_cycles(degree, {std::move(c)});
}

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace

GroupPtr cyclic(std::size_t n) {
    if (n == 0) throw InputError("cyclic group of order 0");
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    std::vector<Permutation> gens;
    if (n > 1) gens.push_back(cycle(n, c));
    return FiniteGroup::from_generators(n, gens, "C" + std::to_string(n));
}

GroupPtr dihedral(std::size_t n) {
    if (n < 3) throw InputError("dihedral group needs n >= 3");
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    // x -> -x - 2 (mod n); for n = 4 this is (0 2).
    std::vector<Point> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>((2 * n - i - 2) % n);
    return FiniteGroup::from_generators(n, {cycle(n, c), Permutation(img)},
                                        "D" + std::to_string(2 * n));
}

GroupPtr symmetric(std::size_t n) {
    std::vector<Permutation> gens;
    if (n >= 2) {
        std::vector<std::size_t> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = i;
        if (n > 2) gens.push_back(cycle(n, c));
        gens.push_back(cycle(n, {0, 1}));
    }
    return FiniteGroup::from_generators(std::max<std::size_t>(n, 1), gens, "S" + std::to_string(n));
}

GroupPtr alternating(std::size_t n) {
    std::vector<Permutation> gens;
    for (std::size_t k = 2; k < n; ++k) gens.push_back(cycle(n, {0, 1, k}));
    return FiniteGroup::from_generators(std::max<std::size_t>(n, 1), gens, "A" + std::to_string(n));
}

std::vector<int> vector_of(std::size_t idx, std::size_t n, unsigned q) {
    std::vector<int> v(n);
    std::size_t x = idx + 1;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<int>(x % q);
        x /= q;
    }
    return v;
}

Permutation matrix_action(const std::vector<std::vector<int>>& M, unsigned q) {
    const std::size_t n = M.size();
    const std::size_t count = ipow(q, n) - 1;
    std::vector<Point> img(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        auto v = vector_of(idx, n, q);
        std::size_t y = 0, w = 1;
        for (std::size_t i = 0; i < n; ++i, w *= q) {
            int s = 0;
            for (std::size_t j = 0; j < n; ++j) s += M[i][j] * v[j];
            y += static_cast<std::size_t>(((s % static_cast<int>(q)) + static_cast<int>(q)) % q) * w;
        }
        if (y == 0) throw InputError("matrix is singular");
        img[idx] = static_cast<Point>(y - 1);
    }
    return Permutation(std::move(img));
}

GroupPtr sl2_3() {
    auto G = FiniteGroup::from_generators(
        8, {matrix_action({{1, 1}, {0, 1}}, 3), matrix_action({{1, 0}, {1, 1}}, 3)}, "SL2(3)");
    if (G->order() != 24) throw IntegrityError("SL2(3) generators give the wrong order");
    return G;
}

namespace {
const std::vector<std::vector<int>> kE12{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}};
const std::vector<std::vector<int>> kE23{{1, 0, 0}, {0, 1, 1}, {0, 0, 1}};
const std::vector<std::vector<int>> kE13{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}};
const std::vector<std::vector<int>> kCyc{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
}  // namespace

GroupPtr gl3_2() {
    auto G = FiniteGroup::from_generators(7, {matrix_action(kE12, 2), matrix_action(kCyc, 2)},
                                          "GL3(2)");
    if (G->order() != 168) throw IntegrityError("GL3(2) generators give the wrong order");
    return G;
}

Gl3Example gl3_example() {
    Gl3Example ex;
    ex.G = gl3_2();
    const Elem a = ex.G->index_of(matrix_action(kE12, 2));
    const Elem b = ex.G->index_of(matrix_action(kE23, 2));
    const Elem c = ex.G->index_of(matrix_action(kE13, 2));
    ex.S = subgroup_generated(ex.G, {a, b, c});
    ex.P = subgroup_generated(ex.G, {a});
    ex.P2 = subgroup_generated(ex.G, {b});
    ex.g = ex.G->index_of(matrix_action(kCyc, 2));
    return ex;
}

Elem product_element(const GroupPtr& G, const std::vector<Elem>& parts) {
    if (parts.size() != G->factor_count()) throw InputError("wrong number of factor elements");
    return G->from_coords(parts);
}

Subgroup product_subgroup(const GroupPtr& G, const std::vector<Subgroup>& parts) {
    const std::size_t m = G->factor_count();
    if (parts.size() != m) throw InputError("wrong number of factor subgroups");
    std::vector<Elem> out, coords(m), gens;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == m) {
            out.push_back(G->from_coords(coords));
            return;
        }
        for (Elem g : parts[k].members()) {
            coords[k] = g;
            rec(k + 1);
        }
    };
    rec(0);
    for (std::size_t k = 0; k < m; ++k)
        for (Elem g : parts[k].generators()) {
            std::vector<Elem> c(m, 0);
            c[k] = g;
            gens.push_back(G->from_coords(c));
        }
    return Subgroup(G, std::move(out), std::move(gens));
}

}  // namespace profusion::catalog
