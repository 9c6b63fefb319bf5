#include "profusion/group.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "profusion/config.hpp"

namespace profusion {

namespace {

void check_order_cap(std::uint64_t n, const char* what) {
    if (n > caps().group_order)
        throw CapExceeded(std::string(what) + ": order " + std::to_string(n) +
                          " exceeds cap " + std::to_string(caps().group_order));
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteGroup

GroupPtr FiniteGroup::from_generators(std::size_t degree, std::vector<Permutation> gens,
                                      std::string name) {
    Permutation id = Permutation::identity(degree);
    for (const auto& g : gens)
        if (g.degree() != degree) throw InputError("generator degree differs from group degree");

    std::unordered_set<Permutation, PermutationHash> seen{id};
    std::vector<Permutation> all{id};
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (const auto& g : gens) {
            Permutation y = g * all[i];
            if (seen.insert(y).second) {
                all.push_back(std::move(y));
                check_order_cap(all.size(), "group_from_generators");
            }
        }
    }
    std::shared_ptr<FiniteGroup> G(new FiniteGroup());
    G->name_ = std::move(name);
    G->degree_ = degree;
    G->gens_ = std::move(gens);
    std::sort(all.begin(), all.end());
    G->build_plain(std::move(all));
    return G;
}

GroupPtr FiniteGroup::from_elements(std::size_t degree, std::vector<Permutation> elements,
                                    std::vector<Permutation> gens, std::string name) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (elements.empty() || !elements.front().is_identity())
        throw InputError("element list must contain the identity");
    for (const auto& e : elements)
        if (e.degree() != degree) throw InputError("element degree differs from group degree");
    check_order_cap(elements.size(), "from_elements");

    std::shared_ptr<FiniteGroup> G(new FiniteGroup());
    G->name_ = std::move(name);
    G->degree_ = degree;
    if (gens.empty()) {
        // Greedy generating set in canonical order.
        std::unordered_map<Permutation, std::size_t, PermutationHash> pos;
        for (std::size_t i = 0; i < elements.size(); ++i) pos.emplace(elements[i], i);
        std::vector<char> in(elements.size(), 0);
        std::vector<std::size_t> cur{0};
        in[0] = 1;
        for (std::size_t i = 1; i < elements.size(); ++i) {
            if (in[i]) continue;
            gens.push_back(elements[i]);
            for (std::size_t k = 0; k < cur.size(); ++k) {
                for (const auto& g : gens) {
                    auto it = pos.find(elements[cur[k]] * g);
                    if (it == pos.end()) throw InputError("element list is not closed");
                    if (!in[it->second]) {
                        in[it->second] = 1;
                        cur.push_back(it->second);
                    }
                }
            }
        }
    }
    G->gens_ = std::move(gens);
    G->build_plain(std::move(elements));
    return G;
}

void FiniteGroup::build_plain(std::vector<Permutation> elements) {
    elems_ = std::move(elements);
    order_ = elems_.size();
    index_.reserve(elems_.size() * 2);
    for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], static_cast<Elem>(i));
    inverse_.resize(order_);
    for (std::size_t i = 0; i < elems_.size(); ++i) inverse_[i] = index_of(elems_[i].inverse());

    if (order_ > 1 && order_ <= caps().table_order) {
        // Right multiplication by generators, then spread rows along a BFS
        // spanning tree of the Cayley graph: a*(b*s) = (a*b)*s.
        const std::size_t n = order_;
        std::vector<std::vector<Elem>> rmul(gens_.size(), std::vector<Elem>(n));
        for (std::size_t s = 0; s < gens_.size(); ++s)
            for (std::size_t x = 0; x < n; ++x) rmul[s][x] = index_of(elems_[x] * gens_[s]);
        std::vector<Elem> parent(n, 0), via(n, 0), bfs{0};
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        for (std::size_t k = 0; k < bfs.size(); ++k)
            for (std::size_t s = 0; s < gens_.size(); ++s) {
                Elem y = rmul[s][bfs[k]];
                if (!seen[y]) {
                    seen[y] = 1;
                    parent[y] = bfs[k];
                    via[y] = static_cast<Elem>(s);
                    bfs.push_back(y);
                }
            }
        if (bfs.size() != n) throw IntegrityError("generators do not generate the element list");
        table_.assign(n * n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            Elem* row = &table_[a * n];
            row[0] = static_cast<Elem>(a);
            for (std::size_t k = 1; k < n; ++k) {
                Elem b = bfs[k];
                row[b] = rmul[via[b]][row[parent[b]]];
            }
        }
    }
}

GroupPtr FiniteGroup::product(const std::vector<GroupPtr>& groups, std::string name) {
    if (groups.empty()) throw InputError("direct product of an empty list");
    std::vector<GroupPtr> flat;
    for (const auto& g : groups)
        for (std::size_t k = 0; k < g->factor_count(); ++k) flat.push_back(g->factor(k));
    if (flat.size() == 1) return flat.front();

    unsigned __int128 total = 1;
    for (const auto& f : flat) total *= f->order();
    if (total > caps().group_order)
        throw CapExceeded("direct_product: order exceeds cap " + std::to_string(caps().group_order));

    std::shared_ptr<FiniteGroup> G(new FiniteGroup());
    G->name_ = std::move(name);
    G->factors_ = flat;
    G->order_ = static_cast<std::uint64_t>(total);
    G->degree_ = 0;
    for (const auto& f : flat) {
        G->offsets_.push_back(G->degree_);
        G->degree_ += f->degree();
    }
    G->strides_.assign(flat.size(), 1);
    for (std::size_t k = flat.size() - 1; k-- > 0;)
        G->strides_[k] = G->strides_[k + 1] * flat[k + 1]->order();
    for (std::size_t k = 0; k < flat.size(); ++k) {
        for (const auto& g : flat[k]->generators()) {
            std::vector<Point> img(G->degree_);
            std::iota(img.begin(), img.end(), Point{0});
            for (std::size_t i = 0; i < g.degree(); ++i)
                img[G->offsets_[k] + i] = static_cast<Point>(G->offsets_[k] + g[i]);
            G->gens_.emplace_back(std::move(img));
        }
    }
    return G;
}

GroupPtr FiniteGroup::factor(std::size_t k) const {
    if (factors_.empty()) return shared_from_this();
    return factors_.at(k);
}

Elem FiniteGroup::coord(Elem x, std::size_t k) const {
    if (factors_.empty()) return x;
    return static_cast<Elem>((x / strides_[k]) % factors_[k]->order());
}

Elem FiniteGroup::from_coords(const std::vector<Elem>& coords) const {
    if (factors_.empty()) return coords.at(0);
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) x += coords[k] * strides_[k];
    return static_cast<Elem>(x);
}

Elem FiniteGroup::mul(Elem a, Elem b) const {
    if (factors_.empty()) {
        if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
        if (order_ == 1) return 0;
        return index_.at(elems_[a] * elems_[b]);
    }
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        x += factors_[k]->mul(coord(a, k), coord(b, k)) * strides_[k];
    return static_cast<Elem>(x);
}

Elem FiniteGroup::inv(Elem a) const {
    if (factors_.empty()) return inverse_[a];
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        x += factors_[k]->inv(coord(a, k)) * strides_[k];
    return static_cast<Elem>(x);
}

Elem FiniteGroup::pow(Elem a, std::uint64_t n) const {
    Elem r = identity(), b = a;
    while (n) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

std::uint64_t FiniteGroup::element_order(Elem a) const {
    std::uint64_t n = 1;
    for (Elem y = a; y != identity(); y = mul(y, a)) ++n;
    return n;
}

Permutation FiniteGroup::element(Elem a) const {
    if (factors_.empty()) return elems_.at(a);
    std::vector<Point> img(degree_);
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        Permutation f = factors_[k]->element(coord(a, k));
        for (std::size_t i = 0; i < f.degree(); ++i)
            img[offsets_[k] + i] = static_cast<Point>(offsets_[k] + f[i]);
    }
    return Permutation(std::move(img));
}

std::optional<Elem> FiniteGroup::find(const Permutation& p) const {
    if (p.degree() != degree_) return std::nullopt;
    if (factors_.empty()) {
        auto it = index_.find(p);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::vector<Elem> coords(factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        const std::size_t off = offsets_[k], d = factors_[k]->degree();
        std::vector<Point> img(d);
        for (std::size_t i = 0; i < d; ++i) {
            Point y = p[off + i];
            if (y < off || y >= off + d) return std::nullopt;
            img[i] = static_cast<Point>(y - off);
        }
        auto c = factors_[k]->find(Permutation(std::move(img)));
        if (!c) return std::nullopt;
        coords[k] = *c;
    }
    return from_coords(coords);
}

Elem FiniteGroup::index_of(const Permutation& p) const {
    auto r = find(p);
    if (!r) throw InputError("permutation " + p.to_string() + " is not in the group");
    return *r;
}

std::vector<Elem> FiniteGroup::generator_indices() const {
    std::vector<Elem> out;
    for (const auto& g : gens_) out.push_back(index_of(g));
    return out;
}

// ---------------------------------------------------------------------------
// Subgroup

namespace detail {
std::uint64_t hash_members(const std::vector<Elem>& members) {
    std::uint64_t h = 1469598103934665603ull;
    for (Elem x : members) {
        for (int s = 0; s < 32; s += 8) {
            h ^= (x >> s) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}
}  // namespace detail

Subgroup::Subgroup(GroupPtr parent, std::vector<Elem> members, std::vector<Elem> gens)
    : parent_(std::move(parent)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty() || members_.front() != FiniteGroup::identity())
        throw InputError("subgroup must contain the identity");
    key_ = detail::hash_members(members_);
    for (Elem g : gens)
        if (g != FiniteGroup::identity() && std::find(gens_.begin(), gens_.end(), g) == gens_.end())
            gens_.push_back(g);
    if (!gens_.empty() || members_.size() == 1) return;

    const FiniteGroup& G = *parent_;
    auto pos = [&](Elem x) {
        auto it = std::lower_bound(members_.begin(), members_.end(), x);
        if (it == members_.end() || *it != x) throw InputError("member list is not a subgroup");
        return static_cast<std::size_t>(it - members_.begin());
    };
    std::vector<char> in(members_.size(), 0);
    std::vector<Elem> cur{FiniteGroup::identity()};
    in[0] = 1;
    for (std::size_t i = 1; i < members_.size(); ++i) {
        if (in[i]) continue;
        gens_.push_back(members_[i]);
        for (std::size_t k = 0; k < cur.size(); ++k)
            for (Elem g : gens_) {
                Elem y = G.mul(cur[k], g);
                std::size_t p = pos(y);
                if (!in[p]) {
                    in[p] = 1;
                    cur.push_back(y);
                }
            }
    }
}

bool Subgroup::contains(Elem x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
}

bool Subgroup::is_subgroup_of(const Subgroup& o) const {
    return parent_ == o.parent_ &&
           std::includes(o.members_.begin(), o.members_.end(), members_.begin(), members_.end());
}

std::string Subgroup::key_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(key_));
    return buf;
}

// ---------------------------------------------------------------------------
// Basic constructions

std::uint64_t p_part(std::uint64_t n, unsigned p) {
    std::uint64_t r = 1;
    while (n % p == 0) {
        n /= p;
        r *= p;
    }
    return r;
}

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

bool is_power_of(std::uint64_t n, unsigned p) { return n >= 1 && p_part(n, p) == n; }

Subgroup subgroup_generated(const GroupPtr& G, const std::vector<Elem>& elems) {
    std::vector<Elem> gens;
    for (Elem x : elems)
        if (x != FiniteGroup::identity() && std::find(gens.begin(), gens.end(), x) == gens.end())
            gens.push_back(x);
    std::vector<Elem> all{FiniteGroup::identity()};
    if (G->order() <= (1u << 25)) {
        std::vector<char> in(G->order(), 0);
        in[0] = 1;
        for (std::size_t i = 0; i < all.size(); ++i)
            for (Elem g : gens) {
                Elem y = G->mul(all[i], g);
                if (!in[y]) {
                    in[y] = 1;
                    all.push_back(y);
                }
            }
    } else {
        std::unordered_set<Elem> in{FiniteGroup::identity()};
        for (std::size_t i = 0; i < all.size(); ++i)
            for (Elem g : gens) {
                Elem y = G->mul(all[i], g);
                if (in.insert(y).second) all.push_back(y);
            }
    }
    return Subgroup(G, std::move(all), std::move(gens));
}

Subgroup whole_group(const GroupPtr& G) {
    std::vector<Elem> all(G->order());
    std::iota(all.begin(), all.end(), Elem{0});
    return Subgroup(G, std::move(all), G->generator_indices());
}

Subgroup trivial_subgroup(const GroupPtr& G) { return Subgroup(G, {FiniteGroup::identity()}); }

Subgroup intersection(const Subgroup& A, const Subgroup& B) {
    std::vector<Elem> out;
    std::set_intersection(A.members().begin(), A.members().end(), B.members().begin(),
                          B.members().end(), std::back_inserter(out));
    return Subgroup(A.parent(), std::move(out));
}

Subgroup image(const GroupMap& f, const Subgroup& P) {
    std::vector<Elem> out, gens;
    out.reserve(P.members().size());
    for (Elem x : P.members()) out.push_back(f(x));
    for (Elem g : P.generators()) gens.push_back(f(g));
    return Subgroup(f.target(), std::move(out), std::move(gens));
}

Subgroup kernel(const GroupMap& f) {
    std::vector<Elem> out;
    for (Elem x = 0; x < f.source()->order(); ++x)
        if (f(x) == FiniteGroup::identity()) out.push_back(x);
    return Subgroup(f.source(), std::move(out));
}

// ---------------------------------------------------------------------------
// Transporters, normalizers, centralizers

std::vector<Elem> transporter(const GroupPtr& Gp, const Subgroup& P, const Subgroup& Q) {
    const FiniteGroup& G = *Gp;
    const auto& gens = P.generators();
    std::vector<Elem> out;
    if (gens.empty() || Q.order() == G.order()) {
        out.resize(G.order());
        std::iota(out.begin(), out.end(), Elem{0});
        return out;
    }
    if (!G.is_product()) {
        for (Elem g = 0; g < G.order(); ++g) {
            bool ok = true;
            for (Elem x : gens)
                if (!Q.contains(G.conj(g, x))) {
                    ok = false;
                    break;
                }
            if (ok) out.push_back(g);
        }
        return out;
    }

    // Coordinate-wise backtracking: the first k coordinates of g x g^-1 only
    // depend on the first k coordinates of g, so prefixes of Q prune the search.
    const std::size_t m = G.factor_count();
    std::vector<std::uint64_t> radix(m), stride(m, 1);
    for (std::size_t k = 0; k < m; ++k) radix[k] = G.factor(k)->order();
    for (std::size_t k = m - 1; k-- > 0;) stride[k] = stride[k + 1] * radix[k + 1];
    std::vector<std::unordered_set<std::uint64_t>> prefix(m);
    for (std::size_t k = 0; k + 1 < m; ++k)
        for (Elem q : Q.members()) prefix[k].insert(q / stride[k]);

    std::vector<std::vector<Elem>> gc(gens.size(), std::vector<Elem>(m));
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t k = 0; k < m; ++k) gc[j][k] = G.coord(gens[j], k);

    std::vector<std::vector<std::uint64_t>> pre(m + 1, std::vector<std::uint64_t>(gens.size(), 0));
    std::vector<Elem> coords(m);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == m) {
            out.push_back(G.from_coords(coords));
            return;
        }
        const FiniteGroup& F = *G.factor(k);
        for (Elem g = 0; g < F.order(); ++g) {
            bool ok = true;
            for (std::size_t j = 0; j < gens.size() && ok; ++j) {
                std::uint64_t v = pre[k][j] * radix[k] + F.conj(g, gc[j][k]);
                pre[k + 1][j] = v;
                ok = (k + 1 < m) ? prefix[k].count(v) > 0 : Q.contains(static_cast<Elem>(v));
            }
            if (!ok) continue;
            coords[k] = g;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

Subgroup normalizer(const GroupPtr& G, const Subgroup& P) {
    return Subgroup(G, transporter(G, P, P));
}

Subgroup centralizer(const GroupPtr& Gp, const Subgroup& P) {
    const FiniteGroup& G = *Gp;
    const auto& gens = P.generators();
    auto centralizes = [&](const FiniteGroup& F, Elem g, const std::vector<Elem>& xs) {
        for (Elem x : xs)
            if (F.mul(g, x) != F.mul(x, g)) return false;
        return true;
    };
    if (!G.is_product()) {
        std::vector<Elem> out;
        for (Elem g = 0; g < G.order(); ++g)
            if (centralizes(G, g, gens)) out.push_back(g);
        return Subgroup(Gp, std::move(out));
    }
    // g centralizes x iff every coordinate of g centralizes the coordinate of x.
    const std::size_t m = G.factor_count();
    std::vector<std::vector<Elem>> per(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<Elem> xs;
        for (Elem x : gens) xs.push_back(G.coord(x, k));
        const FiniteGroup& F = *G.factor(k);
        for (Elem g = 0; g < F.order(); ++g)
            if (centralizes(F, g, xs)) per[k].push_back(g);
    }
    std::vector<Elem> out{0};
    std::vector<Elem> coords(m);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == m) {
            out.push_back(G.from_coords(coords));
            return;
        }
        for (Elem g : per[k]) {
            coords[k] = g;
            rec(k + 1);
        }
    };
    out.clear();
    rec(0);
    return Subgroup(Gp, std::move(out));
}

bool is_normal(const GroupPtr& G, const Subgroup& N) {
    for (Elem g : G->generator_indices())
        for (Elem n : N.generators())
            if (!N.contains(G->conj(g, n))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Sylow subgroups

namespace {

Subgroup sylow_plain(const GroupPtr& G, unsigned p) {
    const std::uint64_t target = p_part(G->order(), p);
    if (target == 1) return trivial_subgroup(G);

    Elem best = 0;
    std::uint64_t best_order = 1;
    for (Elem x = 0; x < G->order(); ++x) {
        std::uint64_t o = G->element_order(x);
        if (o > best_order && is_power_of(o, p)) {
            best = x;
            best_order = o;
        }
    }
    Subgroup P = subgroup_generated(G, {best});
    int steps = 0;
    for (std::uint64_t t = target; t > 1; t /= p) ++steps;
    while (P.order() < target) {
        Subgroup N = normalizer(G, P);
        bool grown = false;
        for (Elem x : N.members()) {
            if (P.contains(x)) continue;
            Elem y = x;
            for (int i = 0; i <= steps && !P.contains(y); ++i) y = G->pow(y, p);
            if (!P.contains(y)) continue;
            std::vector<Elem> gens = P.generators();
            gens.push_back(x);
            P = subgroup_generated(G, gens);
            grown = true;
            break;
        }
        if (!grown) throw IntegrityError("sylow_p: normalizer has no p-element outside P");
    }
    return P;
}

}  // namespace

Subgroup sylow_p(const GroupPtr& G, unsigned p) {
    if (!is_prime(p)) throw InputError("sylow_p: " + std::to_string(p) + " is not prime");
    if (!G->is_product()) return sylow_plain(G, p);
    // The product of Sylow subgroups of the factors is a Sylow subgroup of the
    // product; computing it factorwise avoids scanning the whole product.
    const std::size_t m = G->factor_count();
    std::vector<Subgroup> per;
    for (std::size_t k = 0; k < m; ++k) per.push_back(sylow_plain(G->factor(k), p));
    std::vector<Elem> out, coords(m), gens;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == m) {
            out.push_back(G->from_coords(coords));
            return;
        }
        for (Elem g : per[k].members()) {
            coords[k] = g;
            rec(k + 1);
        }
    };
    rec(0);
    for (std::size_t k = 0; k < m; ++k)
        for (Elem g : per[k].generators()) {
            std::vector<Elem> c(m, 0);
            c[k] = g;
            gens.push_back(G->from_coords(c));
        }
    return Subgroup(G, std::move(out), std::move(gens));
}

// ---------------------------------------------------------------------------
// Subgroup lattices

namespace detail {

ElemSet closure(const FiniteGroup& G, const std::vector<Elem>& gens) {
    ElemSet s(G.order());
    std::vector<Elem> all{FiniteGroup::identity()};
    s.set(0);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (Elem g : gens) {
            Elem y = G.mul(all[i], g);
            if (!s.test(y)) {
                s.set(y);
                all.push_back(y);
            }
        }
    return s;
}

void sort_lattice(std::vector<ElemSet>& sets, std::vector<std::vector<Elem>>* gens) {
    std::vector<std::vector<std::uint32_t>> el(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) el[i] = sets[i].elements();
    std::vector<std::size_t> idx(sets.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (el[a].size() != el[b].size()) return el[a].size() < el[b].size();
        return el[a] < el[b];
    });
    std::vector<ElemSet> s2;
    std::vector<std::vector<Elem>> g2;
    for (std::size_t i : idx) {
        s2.push_back(std::move(sets[i]));
        if (gens) g2.push_back(std::move((*gens)[i]));
    }
    sets = std::move(s2);
    if (gens) *gens = std::move(g2);
}

std::vector<ElemSet> enumerate_p_subgroups(const FiniteGroup& G, unsigned p,
                                           std::vector<std::vector<Elem>>* gens_out) {
    const std::size_t n = G.order();
    std::vector<ElemSet> sets;
    std::vector<std::vector<Elem>> gens;
    std::vector<std::vector<Elem>> members;
    std::unordered_map<ElemSet, std::size_t, ElemSetHash> seen;

    ElemSet one(n);
    one.set(0);
    seen.emplace(one, 0);
    sets.push_back(one);
    gens.push_back({});
    members.push_back({0});

    std::size_t layer_begin = 0, layer_end = 1;
    while (layer_begin < layer_end) {
        for (std::size_t h = layer_begin; h < layer_end; ++h) {
            ElemSet covered = sets[h];
            for (Elem x = 1; x < n; ++x) {
                if (covered.test(x)) continue;
                if (!sets[h].test(G.pow(x, p))) continue;
                bool normalizes = true;
                const Elem xi = G.inv(x);
                for (Elem g : gens[h])
                    if (!sets[h].test(G.mul(G.mul(x, g), xi))) {
                        normalizes = false;
                        break;
                    }
                if (!normalizes) continue;
                ElemSet K = sets[h];
                std::vector<Elem> km = members[h];
                Elem xp = x;
                for (unsigned i = 1; i < p; ++i, xp = G.mul(xp, x))
                    for (Elem m : members[h]) {
                        Elem y = G.mul(xp, m);
                        K.set(y);
                        km.push_back(y);
                    }
                covered = covered | K;
                if (seen.count(K)) continue;
                if (sets.size() >= caps().subgroup_count)
                    throw CapExceeded("subgroup count exceeds cap " +
                                      std::to_string(caps().subgroup_count));
                seen.emplace(K, sets.size());
                sets.push_back(std::move(K));
                std::vector<Elem> kg = gens[h];
                kg.push_back(x);
                gens.push_back(std::move(kg));
                std::sort(km.begin(), km.end());
                members.push_back(std::move(km));
            }
        }
        layer_begin = layer_end;
        layer_end = sets.size();
    }
    sort_lattice(sets, &gens);
    if (gens_out) *gens_out = std::move(gens);
    return sets;
}

std::vector<ElemSet> enumerate_subgroups(const FiniteGroup& G) {
    const std::size_t n = G.order();
    std::vector<ElemSet> sets;
    std::vector<std::vector<Elem>> gens;
    std::unordered_map<ElemSet, std::size_t, ElemSetHash> seen;
    auto add = [&](ElemSet s, std::vector<Elem> g) {
        if (seen.count(s)) return;
        if (sets.size() >= caps().subgroup_count)
            throw CapExceeded("subgroup count exceeds cap");
        seen.emplace(s, sets.size());
        sets.push_back(std::move(s));
        gens.push_back(std::move(g));
    };
    ElemSet one(n);
    one.set(0);
    add(one, {});
    std::vector<Elem> cyclic_gen;
    for (Elem x = 1; x < n; ++x) {
        ElemSet c = closure(G, {x});
        if (!seen.count(c)) cyclic_gen.push_back(x);
        add(std::move(c), {x});
    }
    // Every subgroup is a join of cyclic subgroups.
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (Elem x : cyclic_gen) {
            if (sets[i].test(x)) continue;
            std::vector<Elem> g = gens[i];
            g.push_back(x);
            add(closure(G, g), g);
        }
    sort_lattice(sets, nullptr);
    return sets;
}

}  // namespace detail

namespace {

std::vector<Subgroup> lift_sets(const Subgroup& P, const std::vector<ElemSet>& sets,
                                const std::vector<std::vector<Elem>>* gens) {
    std::vector<Subgroup> out;
    out.reserve(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<Elem> m, g;
        for (auto x : sets[i].elements()) m.push_back(P.members()[x]);
        if (gens)
            for (Elem x : (*gens)[i]) g.push_back(P.members()[x]);
        out.emplace_back(P.parent(), std::move(m), std::move(g));
    }
    return out;
}

unsigned smallest_prime_factor(std::uint64_t n) {
    for (unsigned d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return d;
    return static_cast<unsigned>(n);
}

GroupPtr standalone(const Subgroup& P) {
    std::vector<Permutation> el, gens;
    for (Elem x : P.members()) el.push_back(P.group().element(x));
    for (Elem x : P.generators()) gens.push_back(P.group().element(x));
    return FiniteGroup::from_elements(P.group().degree(), std::move(el), std::move(gens));
}

}  // namespace

std::vector<Subgroup> all_subgroups(const Subgroup& P) {
    const std::uint64_t n = P.order();
    if (n == 1) return {P};
    const unsigned q = smallest_prime_factor(n);
    const bool pgroup = is_power_of(n, q);
    if (pgroup && n > caps().p_group_order)
        throw CapExceeded("all_subgroups: p-group order " + std::to_string(n) + " exceeds cap");
    if (!pgroup && n > caps().general_lattice_order)
        throw CapExceeded("all_subgroups: non-p-group of order " + std::to_string(n) +
                          " exceeds cap");
    GroupPtr H = standalone(P);
    if (pgroup) {
        std::vector<std::vector<Elem>> gens;
        auto sets = detail::enumerate_p_subgroups(*H, q, &gens);
        return lift_sets(P, sets, &gens);
    }
    auto sets = detail::enumerate_subgroups(*H);
    return lift_sets(P, sets, nullptr);
}

std::vector<Subgroup> p_subgroups(const GroupPtr& G, unsigned p) {
    check_order_cap(G->order(), "p_subgroups");
    std::vector<std::vector<Elem>> gens;
    auto sets = detail::enumerate_p_subgroups(*G, p, &gens);
    return lift_sets(whole_group(G), sets, &gens);
}

// ---------------------------------------------------------------------------
// Products and quotients

ProductGroup direct_product(const std::vector<GroupPtr>& groups) {
    ProductGroup r;
    std::string name;
    for (const auto& g : groups) name += (name.empty() ? "" : " x ") + g->name();
    r.group = FiniteGroup::product(groups, name);
    if (groups.size() == 1) {
        r.projections.emplace_back(r.group, groups[0], [](Elem x) { return x; });
        r.embeddings.emplace_back(groups[0], r.group, [](Elem x) { return x; });
        return r;
    }
    std::size_t first = 0;
    GroupPtr P = r.group;
    for (const auto& g : groups) {
        const std::size_t a = first, b = first + g->factor_count();
        first = b;
        r.projections.emplace_back(P, g, [P, g, a, b](Elem x) {
            std::vector<Elem> c;
            for (std::size_t k = a; k < b; ++k) c.push_back(P->coord(x, k));
            return g->from_coords(c);
        });
        r.embeddings.emplace_back(g, P, [P, g, a, b](Elem x) {
            std::vector<Elem> c(P->factor_count(), 0);
            for (std::size_t k = a; k < b; ++k) c[k] = g->coord(x, k - a);
            return P->from_coords(c);
        });
    }
    return r;
}

QuotientGroup quotient_group(const GroupPtr& G, const Subgroup& N) {
    if (N.parent() != G) throw InputError("quotient_group: N is not a subgroup of G");
    if (!is_normal(G, N)) throw InputError("quotient_group: N is not normal");
    if (N.order() == 1) return {G, GroupMap(G, G, [](Elem x) { return x; })};

    if (G->is_product()) {
        // Kernels that are products of whole factors and trivial factors give a
        // quotient isomorphic to the product of the remaining factors.
        const std::size_t m = G->factor_count();
        std::vector<std::unordered_set<Elem>> proj(m);
        for (Elem x : N.members())
            for (std::size_t k = 0; k < m; ++k) proj[k].insert(G->coord(x, k));
        std::vector<std::size_t> keep;
        bool aligned = true;
        std::uint64_t prod = 1;
        for (std::size_t k = 0; k < m; ++k) {
            prod *= proj[k].size();
            if (proj[k].size() == 1) keep.push_back(k);
            else if (proj[k].size() != G->factor(k)->order()) aligned = false;
        }
        if (aligned && prod == N.order()) {
            std::vector<GroupPtr> fs;
            for (std::size_t k : keep) fs.push_back(G->factor(k));
            if (fs.empty()) {
                GroupPtr T = FiniteGroup::from_generators(1, {}, "1");
                return {T, GroupMap(G, T, [](Elem) { return Elem{0}; })};
            }
            GroupPtr Q = FiniteGroup::product(fs, G->name() + "/N");
            return {Q, GroupMap(G, Q, [G, Q, keep](Elem x) {
                        std::vector<Elem> c;
                        for (std::size_t k : keep) c.push_back(G->coord(x, k));
                        return Q->from_coords(c);
                    })};
        }
    }

    check_order_cap(G->order(), "quotient_group");
    const std::size_t n = G->order();
    std::vector<Elem> coset(n, static_cast<Elem>(-1));
    std::vector<Elem> rep;
    for (Elem g = 0; g < n; ++g) {
        if (coset[g] != static_cast<Elem>(-1)) continue;
        const Elem c = static_cast<Elem>(rep.size());
        rep.push_back(g);
        for (Elem x : N.members()) coset[G->mul(g, x)] = c;
    }
    const std::size_t idx = rep.size();
    if (idx > 65535) throw CapExceeded("quotient_group: index too large for a permutation action");
    auto action = [&](Elem g) {
        std::vector<Point> img(idx);
        for (std::size_t c = 0; c < idx; ++c) img[c] = static_cast<Point>(coset[G->mul(g, rep[c])]);
        return Permutation(std::move(img));
    };
    std::vector<Permutation> gens;
    for (Elem g : G->generator_indices()) gens.push_back(action(g));
    GroupPtr Q = FiniteGroup::from_generators(idx, std::move(gens), G->name() + "/N");
    auto of_coset = std::make_shared<std::vector<Elem>>(idx);
    for (std::size_t c = 0; c < idx; ++c) (*of_coset)[c] = Q->index_of(action(rep[c]));
    auto cos = std::make_shared<std::vector<Elem>>(std::move(coset));
    return {Q, GroupMap(G, Q, [cos, of_coset](Elem x) { return (*of_coset)[(*cos)[x]]; })};
}

// ---------------------------------------------------------------------------
// Quillen poset

const char* to_string(Connectivity c) {
    switch (c) {
        case Connectivity::connected: return "connected";
        case Connectivity::disconnected: return "disconnected";
        case Connectivity::empty: return "empty";
    }
    return "?";
}

Connectivity quillen_poset_connected(const GroupPtr& G, unsigned p) {
    if (G->order() % p != 0) return Connectivity::empty;
    check_order_cap(G->order(), "quillen_poset_connected");
    auto sets = detail::enumerate_p_subgroups(*G, p);
    // sets[0] is the trivial subgroup. Two comparable subgroups share every
    // subgroup of order p of the smaller one, so joining each subgroup to its
    // subgroups of order p yields the components of the comparability graph.
    std::vector<std::size_t> parent(sets.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::size_t> minimal;
    for (std::size_t i = 1; i < sets.size(); ++i)
        if (sets[i].count() == p) minimal.push_back(i);
    for (std::size_t i = 1; i < sets.size(); ++i)
        for (std::size_t c : minimal)
            if (sets[c].subset_of(sets[i])) parent[find(c)] = find(i);
    std::size_t root = find(1);
    for (std::size_t i = 2; i < sets.size(); ++i)
        if (find(i) != root) return Connectivity::disconnected;
    return Connectivity::connected;
}

}  // namespace profusion
