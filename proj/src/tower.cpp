#include "profusion/tower.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "profusion/catalog.hpp"
#include "profusion/subsystems.hpp"

namespace profusion {

namespace {

bool is_hom(const FiniteGroup& A, const FiniteGroup& B, const std::vector<Elem>& f) {
    if (f.size() != A.order()) return false;
    for (Elem x = 0; x < A.order(); ++x)
        for (Elem g : A.generator_indices())
            if (f[A.mul(x, g)] != B.mul(f[x], f[g])) return false;
    return true;
}

// Realized systems are saturated, so Alperin generation lets the functor check
// run on automorphisms of essential subgroups only.
bool functor_ok(const std::vector<Elem>& alpha, const FusionSystem& F1, const FusionSystem& F2) {
    if (!is_hom(F1.S(), F2.S(), alpha)) return false;
    if (F1.kind() != SystemKind::realized) return verify_system_morphism(alpha, F1, F2, false).ok;
    const SubgroupLattice& L1 = F1.lattice();
    for (SubId Q : essential_subgroups(F1))
        for (const auto& t : F1.automorphisms(Q)) {
            auto im = induced_map(L1, F2.lattice(), alpha, Q, t);
            if (!im || !F2.has_map(im->first, im->second)) return false;
        }
    return true;
}

std::vector<Elem> compose_maps(const std::vector<Elem>& outer, const std::vector<Elem>& inner) {
    std::vector<Elem> r(inner.size());
    for (std::size_t x = 0; x < inner.size(); ++x) r[x] = outer[inner[x]];
    return r;
}

std::vector<SubId> generator_domains(const FusionSystem& F) {
    if (F.kind() == SystemKind::realized) return essential_subgroups(F);
    std::vector<SubId> all(F.lattice().size());
    for (SubId P = 0; P < all.size(); ++P) all[P] = P;
    return all;
}

class LimitSystem : public FusionSystem {
public:
    explicit LimitSystem(const Tower& T)
        : FusionSystem(T.top().lattice_ptr(), SystemKind::limit, T.top().lattice().whole(),
                       "lim " + T.name),
          T_(T) {}

protected:
    Embeddings compute_embeddings(SubId P) const override {
        Embeddings e;
        for (const auto& f : pro_emb(T_, P)) {
            e.maps.push_back(f.limit().table);
            e.images.push_back(f.limit().codomain);
        }
        return e;
    }

private:
    Tower T_;
};

}  // namespace

SubId Tower::project(std::size_t i, SubId P) const {
    const auto& f = to_level(i);
    std::vector<Elem> v;
    for (Elem x : limit_lattice().elements(P)) v.push_back(f[x]);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return level(i).lattice().id_of_elements(v);
}

Tower make_tower(std::vector<SystemPtr> levels, const std::vector<std::vector<Elem>>& maps,
                 std::string name, bool verify) {
    const std::size_t d = levels.size();
    if (d == 0) throw InputError("make_tower: no levels");
    if (static_cast<int>(d) > caps().depth) throw CapExceeded("make_tower: depth exceeds cap");
    if (maps.size() + 1 != d) throw InputError("make_tower: need one connecting map per adjacent pair");
    Tower T;
    T.levels = std::move(levels);
    T.name = std::move(name);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        if (!is_hom(T.level(i + 1).S(), T.level(i).S(), maps[i]))
            throw InputError("make_tower: connecting map " + std::to_string(i) + " is not a homomorphism");
        if (verify && !functor_ok(maps[i], T.level(i + 1), T.level(i)))
            throw InputError("make_tower: connecting map " + std::to_string(i) +
                             " is not a morphism of fusion systems");
    }
    T.conn.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        T.conn[i].resize(d);
        std::vector<Elem> id(T.level(i).S().order());
        for (Elem x = 0; x < id.size(); ++x) id[x] = x;
        T.conn[i][i] = id;
        for (std::size_t j = i + 1; j < d; ++j) T.conn[i][j] = compose_maps(T.conn[i][j - 1], maps[j - 1]);
    }
    const SubgroupLattice& L = T.limit_lattice();
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Elem> k;
        for (Elem y = 0; y < L.group().order(); ++y)
            if (T.to_level(i)[y] == 0) k.push_back(y);
        T.kernels.push_back(L.id_of_elements(k));
    }
    return T;
}

Tower tower_from_group(const GroupPtr& G, const Subgroup& S, unsigned p,
                       const std::vector<Subgroup>& normals, std::string name) {
    const std::size_t d = normals.size();
    if (d == 0) throw InputError("tower_from_group: empty chain");
    if (normals.back().order() != 1) throw InputError("tower_from_group: last normal subgroup must be trivial");
    for (std::size_t i = 0; i < d; ++i) {
        if (!is_normal(G, normals[i])) throw InputError("tower_from_group: subgroup " + std::to_string(i) + " is not normal");
        if (i > 0 && !normals[i].is_subgroup_of(normals[i - 1]))
            throw InputError("tower_from_group: chain is not descending at " + std::to_string(i));
    }

    // kept[i] = factors not swallowed by N_i, when every N_i is factor aligned
    std::vector<std::vector<std::size_t>> kept(d);
    bool aligned = G->is_product();
    for (std::size_t i = 0; i < d && aligned; ++i) {
        std::vector<Subgroup> parts;
        for (std::size_t k = 0; k < G->factor_count(); ++k) {
            const GroupPtr Fk = G->factor(k);
            std::vector<Elem> c(G->factor_count(), 0);
            bool whole = true;
            for (Elem g : Fk->generator_indices()) {
                c[k] = g;
                whole = whole && normals[i].contains(G->from_coords(c));
            }
            parts.push_back(whole ? whole_group(Fk) : trivial_subgroup(Fk));
            if (!whole) kept[i].push_back(k);
        }
        aligned = catalog::product_subgroup(G, parts) == normals[i];
    }

    std::vector<GroupPtr> groups(d);
    std::vector<std::function<Elem(Elem)>> proj(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (normals[i].order() == 1) {
            groups[i] = G;
            proj[i] = [](Elem g) { return g; };
        } else if (aligned) {
            const auto ks = kept[i];
            std::vector<GroupPtr> fs;
            for (std::size_t k : ks) fs.push_back(G->factor(k));
            groups[i] = fs.size() == 1 ? fs[0] : direct_product(fs).group;
            const GroupPtr Gi = groups[i];
            proj[i] = [G, Gi, ks](Elem g) {
                if (ks.size() == 1) return G->coord(g, ks[0]);
                std::vector<Elem> c;
                for (std::size_t k : ks) c.push_back(G->coord(g, k));
                return Gi->from_coords(c);
            };
        } else {
            auto q = quotient_group(G, normals[i]);
            groups[i] = q.group;
            proj[i] = [m = q.projection](Elem g) { return m(g); };
        }
    }

    std::vector<SystemPtr> levels(d);
    std::vector<std::shared_ptr<const RealizedSystem>> real(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Elem> img;
        for (Elem s : S.members()) img.push_back(proj[i](s));
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        real[i] = realize(groups[i], Subgroup(groups[i], img), p);
        levels[i] = real[i];
    }
    // adjacent maps through the top level
    const auto& top = *real[d - 1];
    std::vector<std::vector<Elem>> maps;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        std::vector<Elem> m(real[i + 1]->S().order(), static_cast<Elem>(-1));
        for (Elem y = 0; y < top.S().order(); ++y) {
            const Elem g = top.global(y);
            const Elem a = *real[i + 1]->local(proj[i + 1](g));
            const Elem b = *real[i]->local(proj[i](g));
            if (m[a] != static_cast<Elem>(-1) && m[a] != b)
                throw InputError("tower_from_group: levels do not factor (chain not descending)");
            m[a] = b;
        }
        maps.push_back(std::move(m));
    }
    Tower T = make_tower(std::move(levels), maps, std::move(name));
    T.groups = std::move(groups);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        // G_{i+1} -> G_i, through any lift to G
        const GroupPtr A = T.groups[i + 1], B = T.groups[i];
        if (normals[i + 1].order() == 1) {
            T.group_maps.emplace_back(A, B, proj[i]);
        } else if (aligned) {
            const auto from = kept[i + 1], to = kept[i];
            T.group_maps.emplace_back(A, B, [A, B, from, to](Elem g) {
                std::vector<Elem> c;
                for (std::size_t k : to) {
                    const std::size_t pos = std::find(from.begin(), from.end(), k) - from.begin();
                    c.push_back(from.size() == 1 ? g : A->coord(g, pos));
                }
                return to.size() == 1 ? c[0] : B->from_coords(c);
            });
        }
        // generic quotients: no group map (sylow_limit_check takes them explicitly)
    }
    return T;
}

Tower product_tower(const std::vector<GroupPtr>& factors, const std::vector<Subgroup>& sylows, unsigned p) {
    const std::size_t n = factors.size();
    if (n == 0 || sylows.size() != n) throw InputError("product_tower: factor count mismatch");
    if (n == 1) {
        std::vector<Subgroup> normals{trivial_subgroup(factors[0])};
        return tower_from_group(factors[0], sylows[0], p, normals, factors[0]->name());
    }
    const GroupPtr G = direct_product(factors).group;
    const Subgroup S = catalog::product_subgroup(G, sylows);
    std::vector<Subgroup> normals;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Subgroup> parts;
        for (std::size_t k = 0; k < n; ++k) parts.push_back(k <= i ? trivial_subgroup(factors[k]) : whole_group(factors[k]));
        normals.push_back(catalog::product_subgroup(G, parts));
    }
    return tower_from_group(G, S, p, normals, "product tower");
}

std::optional<FusionMorphism> push_down(const Tower& T, std::size_t i, std::size_t j, const FusionMorphism& phi) {
    const SubgroupLattice& Li = T.level(i).lattice();
    auto im = induced_map(T.level(j).lattice(), Li, T.conn[i][j], phi.domain, phi.table);
    if (!im) return std::nullopt;
    return FusionMorphism{im->first, Li.image(im->second), std::move(im->second)};
}

ProMorphism thread_of(const Tower& T, const FusionMorphism& top) {
    ProMorphism f;
    for (std::size_t i = 0; i + 1 < T.depth(); ++i) {
        auto m = push_down(T, i, T.depth() - 1, top);
        if (!m) throw IntegrityError("thread_of: map does not descend to level " + std::to_string(i));
        f.levels.push_back(std::move(*m));
    }
    f.levels.push_back(top);
    return f;
}

bool is_thread(const Tower& T, const ProMorphism& f) {
    if (f.levels.size() != T.depth()) return false;
    for (std::size_t j = 0; j < T.depth(); ++j) {
        if (!T.level(j).has_map(f.levels[j].domain, f.levels[j].table)) return false;
        for (std::size_t i = 0; i < j; ++i) {
            auto m = push_down(T, i, j, f.levels[j]);
            if (!m || m->domain != f.levels[i].domain || m->table != f.levels[i].table) return false;
        }
    }
    return true;
}

std::vector<ProMorphism> pro_emb(const Tower& T, SubId P) {
    const std::size_t d = T.depth();
    std::vector<SubId> Pi(d);
    for (std::size_t i = 0; i < d; ++i) Pi[i] = T.project(i, P);
    // surviving maps per level, sorted
    std::vector<Table> surv = T.level(0).embeddings(Pi[0]).maps;
    for (std::size_t j = 1; j < d; ++j) {
        const auto& e = T.level(j).embeddings(Pi[j]);
        std::vector<Table> next;
        for (std::size_t k = 0; k < e.maps.size(); ++k) {
            auto m = push_down(T, j - 1, j, {Pi[j], e.images[k], e.maps[k]});
            if (m && m->domain == Pi[j - 1] && std::binary_search(surv.begin(), surv.end(), m->table))
                next.push_back(e.maps[k]);
        }
        surv = std::move(next);
    }
    std::vector<ProMorphism> out;
    const SubgroupLattice& L = T.limit_lattice();
    for (auto& t : surv) {
        const SubId img = L.image(t);
        out.push_back(thread_of(T, {P, img, std::move(t)}));
    }
    return out;
}

std::vector<ProMorphism> pro_hom(const Tower& T, SubId P, SubId Q) {
    std::vector<ProMorphism> out;
    const SubgroupLattice& L = T.limit_lattice();
    for (auto& f : pro_emb(T, P))
        if (L.leq(f.limit().codomain, Q)) {
            for (std::size_t i = 0; i < T.depth(); ++i) f.levels[i].codomain = T.project(i, Q);
            out.push_back(std::move(f));
        }
    return out;
}

std::vector<ProMorphism> pro_hom_brute(const Tower& T, SubId P, SubId Q) {
    const std::size_t d = T.depth();
    std::vector<std::vector<FusionMorphism>> per(d);
    for (std::size_t i = 0; i < d; ++i) per[i] = T.level(i).hom_set(T.project(i, P), T.project(i, Q));
    std::vector<ProMorphism> out;
    std::vector<std::size_t> idx(d, 0);
    for (const auto& v : per)
        if (v.empty()) return out;
    while (true) {
        ProMorphism f;
        for (std::size_t i = 0; i < d; ++i) f.levels.push_back(per[i][idx[i]]);
        bool ok = true;
        for (std::size_t j = 1; j < d && ok; ++j)
            for (std::size_t i = 0; i < j && ok; ++i) {
                auto m = push_down(T, i, j, f.levels[j]);
                ok = m && m->domain == f.levels[i].domain && m->table == f.levels[i].table;
            }
        if (ok) out.push_back(std::move(f));
        std::size_t k = d;
        while (true) {
            if (k == 0) {
                std::sort(out.begin(), out.end(),
                          [](const ProMorphism& a, const ProMorphism& b) { return a.limit().table < b.limit().table; });
                return out;
            }
            --k;
            if (++idx[k] < per[k].size()) break;
            idx[k] = 0;
        }
    }
}

SystemPtr limit_system(const Tower& T) { return std::make_shared<LimitSystem>(T); }

ContinuityReport check_continuity(const TowerMorphism& phi) {
    const Tower& A = *phi.source;
    const Tower& B = *phi.target;
    const SubgroupLattice& L = A.limit_lattice();
    if (phi.alpha.size() != L.group().order() || !is_hom(L.group(), B.limit_lattice().group(), phi.alpha))
        throw InputError("check_continuity: alpha is not a homomorphism of the limit groups");
    ContinuityReport r;
    for (std::size_t j = 0; j < B.depth(); ++j) {
        const std::vector<Elem> target = compose_maps(B.to_level(j), phi.alpha);
        bool found = false;
        for (std::size_t i = 0; i < A.depth() && !found; ++i) {
            bool in_kernel = true;
            for (Elem y : L.elements(A.kernels[i])) in_kernel = in_kernel && target[y] == 0;
            if (!in_kernel) continue;
            const Elem none = static_cast<Elem>(-1);
            std::vector<Elem> f(A.level(i).S().order(), none);
            for (Elem y = 0; y < L.group().order(); ++y) f[A.to_level(i)[y]] = target[y];
            if (std::count(f.begin(), f.end(), none) != 0) continue;  // S -> S_i not onto
            if (!functor_ok(f, A.level(i), B.level(j))) continue;
            r.level_for.push_back(i);
            r.factoring.push_back(std::move(f));
            found = true;
        }
        if (!found) throw NoFactoring("check_continuity: no source level factors target level " + std::to_string(j));
    }
    return r;
}

SystemPtr image_system(const Tower& T, std::size_t i, std::size_t j) {
    if (j < i || j >= T.depth()) throw InputError("image_system: need i <= j < depth");
    if (i == j) return T.levels[i];
    const FusionSystem& Fj = T.level(j);
    std::vector<FusionMorphism> gens;
    for (SubId Q : generator_domains(Fj)) {
        const auto& e = Fj.embeddings(Q);
        for (std::size_t k = 0; k < e.maps.size(); ++k) {
            if (Fj.kind() == SystemKind::realized && e.images[k] != Q) continue;
            auto m = push_down(T, i, j, {Q, e.images[k], e.maps[k]});
            if (!m) throw IntegrityError("image_system: connecting map is not a morphism of fusion systems");
            gens.push_back(std::move(*m));
        }
    }
    return generated_system(T.level(i).lattice_ptr(), gens,
                            "F_{" + std::to_string(i) + "," + std::to_string(j) + "}");
}

std::size_t stable_image(const Tower& T, std::size_t i) {
    const std::size_t d = T.depth();
    std::vector<SystemPtr> im;
    for (std::size_t j = i; j < d; ++j) im.push_back(image_system(T, i, j));
    for (std::size_t j = i; j < d; ++j) {
        bool stable = true;
        for (std::size_t k = j + 1; k < d && stable; ++k) stable = same_morphisms(*im[j - i], *im[k - i]);
        if (stable) return j;
    }
    return d - 1;
}

bool is_pro_saturated(const Tower& T) {
    for (std::size_t i = 0; i < T.depth(); ++i) {
        // at finite depth the image has stabilized by the top level
        if (!is_saturated(*image_system(T, i, T.depth() - 1)).saturated) return false;
    }
    return true;
}

bool OscReport::all_generated_equal() const {
    return std::all_of(quotients.begin(), quotients.end(),
                       [](const QuotientCheck& q) { return q.generated_is_quotient; });
}

OscReport osc_quotient_tower(const Tower& T) {
    const SystemPtr Fp = limit_system(T);
    const FusionSystem& F = *Fp;
    const SubgroupLattice& L = F.lattice();
    OscReport r;
    std::vector<QuotientContext> ctx;
    std::vector<SystemPtr> quo;
    for (SubId N : strongly_closed_subgroups(F)) {
        bool over_kernel = false;
        for (SubId K : T.kernels) over_kernel = over_kernel || L.leq(K, N);
        if (!over_kernel) continue;
        QuotientContext q = quotient_context(F, N);
        auto Q = quotient_system(F, q);
        auto G = induced_image_system(F, q);
        QuotientCheck c;
        c.N = N;
        c.generated_is_quotient = same_morphisms(*G, *Q);
        if (!c.generated_is_quotient) {
            const SubgroupLattice& Lq = *q.lattice;
            for (SubId P = 0; P < Lq.size() && !c.witness; ++P)
                for (const auto& t : G->embeddings(P).maps)
                    if (!Q->has_map(P, t)) {
                        c.witness = FusionMorphism{P, Lq.image(t), t};
                        break;
                    }
        }
        r.quotients.push_back(std::move(c));
        ctx.push_back(std::move(q));
        quo.push_back(std::move(Q));
    }
    // inverse limit of the quotients, read through F/1 = F
    std::size_t base = ctx.size();
    for (std::size_t k = 0; k < ctx.size(); ++k)
        if (L.order(ctx[k].N) == 1) base = k;
    if (base == ctx.size()) {
        r.diff = "trivial subgroup missing from the quotient family";
        return r;
    }
    const auto& pb = ctx[base].projection;
    std::vector<Elem> back(pb.size());
    for (Elem x = 0; x < pb.size(); ++x) back[pb[x]] = x;
    const SubgroupLattice& Lb = *ctx[base].lattice;
    r.reconstructs = true;
    for (SubId P = 0; P < L.size() && r.reconstructs; ++P) {
        std::vector<Elem> pe;
        for (Elem x : L.elements(P)) pe.push_back(pb[x]);
        const SubId Pb = Lb.id_of_elements(pe);
        std::vector<Table> got;
        for (const auto& tb : quo[base]->embeddings(Pb).maps) {
            // table on Pb -> table on P
            Table t(L.order(P));
            for (std::size_t a = 0; a < tb.size(); ++a) {
                const Elem x = back[Lb.elements(Pb)[a]];
                t[L.position(P, x)] = static_cast<std::uint16_t>(back[tb[a]]);
            }
            bool ok = true;
            for (std::size_t k = 0; k < ctx.size() && ok; ++k) {
                auto im = induced_map(L, *ctx[k].lattice, ctx[k].projection, P, t);
                ok = im && quo[k]->has_map(im->first, im->second);
            }
            if (ok) got.push_back(std::move(t));
        }
        std::sort(got.begin(), got.end());
        if (got != F.embeddings(P).maps) {
            r.reconstructs = false;
            r.diff = "hom sets differ on subgroup " + L.key_hex(P);
        }
    }
    return r;
}

DepthSaturationReport saturation_at_depth(const Tower& T) {
    const SystemPtr Fp = limit_system(T);
    const FusionSystem& F = *Fp;
    const SubgroupLattice& L = F.lattice();
    SaturationCache C(F);
    DepthSaturationReport r;
    r.all_ok = is_saturated(F, &C).saturated;
    r.open_ok = true;
    for (std::size_t i = 0; i < T.depth(); ++i) {
        LevelSaturation s;
        s.level = i;
        s.N = T.kernels[i];
        if (L.order(s.N) == 1) {
            s.saturated = r.all_ok;
        } else {
            const SubId N = s.N;
            s.saturated = is_saturated_on(F, [&](SubId Q) { return L.leq(N, Q); }, &C).saturated;
        }
        r.open_ok = r.open_ok && s.saturated;
        r.open.push_back(s);
    }
    return r;
}

SylowLimitReport sylow_limit_check(const Tower& T, const std::vector<GroupMap>& group_maps) {
    const std::size_t d = T.depth();
    if (T.groups.size() != d || group_maps.size() + 1 != d)
        throw InputError("sylow_limit_check: need a realized tower and one group map per adjacent pair");
    std::vector<const RealizedSystem*> R;
    for (const auto& F : T.levels) {
        auto r = dynamic_cast<const RealizedSystem*>(F.get());
        if (!r) throw InputError("sylow_limit_check: level is not realized");
        R.push_back(r);
    }
    SylowLimitReport rep;
    for (std::size_t i = 0; i + 1 < d; ++i)
        for (Elem x = 0; x < R[i + 1]->S().order(); ++x)
            if (group_maps[i](R[i + 1]->global(x)) != R[i]->global(T.conn[i][i + 1][x]))
                throw InputError("sylow_limit_check: group maps are not compatible with the tower at level " +
                                 std::to_string(i));
    rep.compatible = true;
    const unsigned p = T.top().prime();
    for (std::size_t i = 0; i < d; ++i) rep.level_sylow.push_back(R[i]->S().order() == p_part(T.groups[i]->order(), p));
    // threads of the S_i and of the G_i are determined by their top coordinate
    rep.limit_sylow = R[d - 1]->S().order() == p_part(T.groups[d - 1]->order(), p);
    return rep;
}

StagedChain convergent_alperin(const Tower& T, const SubsystemSequence& seq, const FusionMorphism& phi) {
    const SubgroupLattice& L = T.limit_lattice();
    const FiniteGroup& S = L.group();
    const std::size_t m = seq.systems.size();
    if (m == 0) throw InputError("convergent_alperin: empty subsystem sequence");
    for (const auto& E : seq.systems)
        if (E->lattice().size() != L.size() || E->S().order() != S.order())
            throw InputError("convergent_alperin: subsystems must live on the limit lattice");
    for (std::size_t i = 1; i < m; ++i)
        if (!L.leq(seq.systems[i]->T(), seq.systems[i - 1]->T()))
            throw InputError("convergent_alperin: T^i is not descending");

    StagedChain out;
    out.chain.P0 = phi.domain;
    FusionMorphism theta{phi.domain, L.whole(), phi.table};
    for (std::size_t i = 0; i < m; ++i) {
        const FusionSystem& E = *seq.systems[i];
        const SubId Tnext = i + 1 < m ? seq.systems[i + 1]->T() : L.trivial();
        if (!E.has_map(theta.domain, theta.table)) throw StageFailure(i, "residual is not a morphism of E^i");
        Stage st;
        // the coarsest kernel inside T^{i+1}
        st.level = T.depth() - 1;
        for (std::size_t k = 0; k < T.depth(); ++k)
            if (L.leq(T.kernels[k], Tnext)) {
                st.level = k;
                break;
            }
        st.N = T.kernels[st.level];
        if (!L.leq(st.N, Tnext)) throw StageFailure(i, "no kernel inside T^{i+1}");
        bool trivial_mod_N = true;
        const auto& dom = L.elements(theta.domain);
        for (std::size_t a = 0; a < dom.size() && trivial_mod_N; ++a)
            trivial_mod_N = L.contains(st.N, S.mul(theta.table[a], S.inv(dom[a])));
        if (trivial_mod_N) {
            // nothing to do at this stage
            st.psi = inclusion(L, theta.domain, theta.domain);
            st.chain.P0 = theta.domain;
        } else {
            FusionMorphism ext;
            try {
                ext = extend_over_N_relative(E, theta, st.N);
            } catch (const NotFound& e) {
                throw StageFailure(i, std::string("extension not found: ") + e.what());
            }
            st.psi = restrict_to(L, ext, theta.domain);
            st.psi.codomain = L.image(st.psi.table);
            try {
                st.chain = refine_to_essential(E, alperin_decompose(E, st.psi));
            } catch (const NotFound& e) {
                throw StageFailure(i, std::string("subsystem is not saturated: ") + e.what());
            }
        }
        // theta_{i+1} = theta_i psi^-1 on psi(P)
        const SubId D = st.psi.codomain;
        Table res(L.order(D));
        const auto& pe = L.elements(theta.domain);
        for (std::size_t a = 0; a < pe.size(); ++a) res[L.position(D, st.psi.table[a])] = theta.table[a];
        st.residual = {D, L.whole(), res};
        st.residual_mod_T = true;
        for (Elem v : L.elements(D))
            st.residual_mod_T = st.residual_mod_T && L.contains(Tnext, S.mul(L.apply(D, res, v), S.inv(v)));
        st.residual_in_next = i + 1 < m ? seq.systems[i + 1]->has_map(D, res) : res == L.identity_table(D);
        for (const auto& s : st.chain.steps) out.chain.steps.push_back(s);
        theta = st.residual;
        out.stages.push_back(std::move(st));
    }
    out.final_is_inclusion = theta.table == L.identity_table(theta.domain);
    auto t = recompose(L, out.chain);
    out.recomposes = t && *t == phi.table;
    return out;
}

std::optional<std::size_t> trivial_mod_index(const SubsystemSequence& seq, SubId P, SubId N) {
    for (std::size_t i = 0; i < seq.systems.size(); ++i) {
        const FusionSystem& E = *seq.systems[i];
        const SubgroupLattice& L = E.lattice();
        const FiniteGroup& S = L.group();
        bool all = true;
        for (const auto& t : E.embeddings(P).maps) {
            const auto& pe = L.elements(P);
            for (std::size_t a = 0; a < pe.size() && all; ++a) all = L.contains(N, S.mul(t[a], S.inv(pe[a])));
            if (!all) break;
        }
        if (all) return i;
    }
    return std::nullopt;
}

LimitLengthReport limitlength_check(const Tower& T, const ProMorphism& phi) {
    if (!is_thread(T, phi)) throw InputError("limitlength_check: not a thread");
    LimitLengthReport r;
    for (std::size_t i = 0; i < T.depth(); ++i) {
        auto a = alp_length(T.level(i), phi.levels[i], AlpVariant::open);
        if (!a.length) throw IntegrityError("limitlength_check: no chain at level " + std::to_string(i));
        r.per_level.push_back(*a.length);
        r.sup = std::max(r.sup, *a.length);
    }
    const SystemPtr F = limit_system(T);
    auto a = alp_length(*F, phi.limit(), AlpVariant::closed);
    if (!a.length) throw IntegrityError("limitlength_check: no chain in the limit");
    r.limit = *a.length;
    r.bound = r.limit <= r.sup;
    r.nondecreasing = std::is_sorted(r.per_level.begin(), r.per_level.end());
    return r;
}

}  // namespace profusion
