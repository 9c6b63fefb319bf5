#include "profusion/io.hpp"

#include <fstream>
#include <sstream>

#include "profusion/catalog.hpp"
#include "profusion/config.hpp"
#include "profusion/saturation.hpp"
#include "profusion/subsystems.hpp"

namespace profusion {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
    return s;
}

std::uint64_t table_hash(const Table& t) {
    std::string bytes;
    for (auto v : t) {
        bytes.push_back(static_cast<char>(v & 0xff));
        bytes.push_back(static_cast<char>(v >> 8));
    }
    return fnv1a(bytes);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ojson parse_json_text(const std::string& text, const std::string& path) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is 1-based; turn it into line:column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

namespace {

std::string field(const std::string& where, const std::string& name) {
    return where.empty() ? name : where + "." + name;
}

const ojson& need(const ojson& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw InputError(where.empty() ? "spec: expected an object" : where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(field(where, key) + ": missing");
    return *it;
}

std::uint64_t need_uint(const ojson& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw InputError(what + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

Permutation parse_perm(const ojson& j, std::size_t degree, const std::string& what) {
    if (!j.is_array()) throw InputError(what + ": expected a list of cycles");
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<char> used(degree, 0);
    for (std::size_t c = 0; c < j.size(); ++c) {
        const std::string cw = what + "[" + std::to_string(c) + "]";
        if (!j[c].is_array()) throw InputError(cw + ": expected a cycle (list of points)");
        std::vector<std::size_t> cyc;
        for (std::size_t k = 0; k < j[c].size(); ++k) {
            const std::string pw = cw + "[" + std::to_string(k) + "]";
            const std::uint64_t x = need_uint(j[c][k], pw);
            if (x >= degree) throw InputError(pw + ": point " + std::to_string(x) + " outside 0.." + std::to_string(degree - 1));
            if (used[x]) throw InputError(pw + ": point " + std::to_string(x) + " repeated");
            used[x] = 1;
            cyc.push_back(x);
        }
        cycles.push_back(std::move(cyc));
    }
    return Permutation::from_cycles(degree, cycles);
}

std::vector<Permutation> parse_perms(const ojson& j, std::size_t degree, const std::string& what) {
    if (!j.is_array()) throw InputError(what + ": expected a list of permutations");
    std::vector<Permutation> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_perm(j[i], degree, what + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

std::vector<Elem> elements_of(const GroupPtr& G, const std::vector<Permutation>& perms, const std::string& what) {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < perms.size(); ++i) {
        auto e = G->find(perms[i]);
        if (!e) throw InputError(what + "[" + std::to_string(i) + "]: not an element of the group");
        out.push_back(*e);
    }
    return out;
}

Subgroup subgroup_of(const GroupPtr& G, const std::vector<Permutation>& gens, const std::string& what) {
    return subgroup_generated(G, elements_of(G, gens, what));
}

GroupSpec parse_group_spec(const ojson& j, const std::string& where) {
    GroupSpec g;
    if (!j.is_object()) throw InputError((where.empty() ? std::string("spec") : where) + ": expected an object");
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw InputError(field(where, "name") + ": expected a string");
        g.name = j["name"].get<std::string>();
    }
    const std::uint64_t p = need_uint(need(j, "prime", where), field(where, "prime"));
    if (p > 1000 || !is_prime(static_cast<unsigned>(p))) throw InputError(field(where, "prime") + ": not a prime");
    g.p = static_cast<unsigned>(p);

    if (j.contains("product")) {
        const ojson& fs = j["product"];
        if (!fs.is_array() || fs.empty()) throw InputError(field(where, "product") + ": expected a non-empty list of group specs");
        std::vector<GroupPtr> groups;
        std::vector<Subgroup> sylows;
        for (std::size_t k = 0; k < fs.size(); ++k) {
            ojson f = fs[k];
            if (f.is_object() && !f.contains("prime")) f["prime"] = g.p;
            g.factors.push_back(parse_group_spec(f, field(where, "product[" + std::to_string(k) + "]")));
            if (g.factors.back().p != g.p) throw InputError(field(where, "product[" + std::to_string(k) + "]") + ": prime differs");
            groups.push_back(g.factors.back().G);
            sylows.push_back(g.factors.back().S);
        }
        g.G = FiniteGroup::product(groups, g.name);
        g.S = g.factors.size() == 1 ? sylows[0] : catalog::product_subgroup(g.G, sylows);
        return g;
    }

    const std::uint64_t degree = need_uint(need(j, "degree", where), field(where, "degree"));
    if (degree == 0 || degree > 1000) throw InputError(field(where, "degree") + ": expected 1..1000");
    const auto gens = parse_perms(need(j, "generators", where), degree, field(where, "generators"));
    g.G = FiniteGroup::from_generators(degree, gens, g.name);
    if (j.contains("sylow")) {
        g.S = subgroup_of(g.G, parse_perms(j["sylow"], degree, field(where, "sylow")), field(where, "sylow"));
        if (g.S.order() != p_part(g.G->order(), g.p))
            throw InputError(field(where, "sylow") + ": not a Sylow " + std::to_string(g.p) + "-subgroup");
    } else {
        g.S = sylow_p(g.G, g.p);
    }
    return g;
}

std::optional<MorphismSelector> parse_morphism(const ojson& j, std::size_t degree, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    MorphismSelector s;
    s.P = parse_perms(need(j, "P", where), degree, field(where, "P"));
    if (j.contains("P'")) s.P_image = parse_perms(j["P'"], degree, field(where, "P'"));
    if (j.contains("g")) s.g = parse_perm(j["g"], degree, field(where, "g"));
    if (j.contains("index")) s.index = need_uint(j["index"], field(where, "index"));
    return s;
}

TowerSpec parse_tower_spec(const ojson& j) {
    TowerSpec t;
    t.group = parse_group_spec(need(j, "group", ""), "group");
    const std::size_t deg = t.group.G->degree();
    const ojson& ns = need(j, "normals", "");
    if (!ns.is_array() || ns.empty()) throw InputError("normals: expected a non-empty list");
    for (std::size_t i = 0; i < ns.size(); ++i) t.normals.push_back(parse_perms(ns[i], deg, "normals[" + std::to_string(i) + "]"));
    if (j.contains("subsystems")) {
        const ojson& ss = j["subsystems"];
        if (!ss.is_array()) throw InputError("subsystems: expected a list");
        for (std::size_t i = 0; i < ss.size(); ++i)
            t.subsystems.push_back(parse_perms(ss[i], deg, "subsystems[" + std::to_string(i) + "]"));
    }
    if (j.contains("morphism")) t.morphism = parse_morphism(j["morphism"], deg, "morphism");
    return t;
}

FusionMorphism select_morphism(const RealizedSystem& F, const MorphismSelector& sel) {
    const SubgroupLattice& L = F.lattice();
    std::vector<Elem> loc;
    for (Elem x : elements_of(F.ambient(), sel.P, "morphism.P")) {
        auto l = F.local(x);
        if (!l) throw InputError("morphism.P: generator outside the Sylow subgroup");
        loc.push_back(*l);
    }
    const SubId P = L.generated(loc);
    FusionMorphism phi;
    if (sel.g) {
        const Elem g = elements_of(F.ambient(), {*sel.g}, "morphism.g")[0];
        auto t = F.conjugation(g, P);
        if (!t) throw InputError("morphism.g: conjugate of P is not inside the Sylow subgroup");
        phi = {P, L.image(*t), *t};
    } else {
        const auto& e = F.embeddings(P);
        if (sel.index >= e.maps.size())
            throw InputError("morphism.index: " + std::to_string(sel.index) + " out of range (" +
                             std::to_string(e.maps.size()) + " maps)");
        phi = {P, e.images[sel.index], e.maps[sel.index]};
    }
    if (!sel.P_image.empty()) {
        std::vector<Elem> img;
        for (Elem x : elements_of(F.ambient(), sel.P_image, "morphism.P'")) {
            auto l = F.local(x);
            if (!l) throw InputError("morphism.P': generator outside the Sylow subgroup");
            img.push_back(*l);
        }
        if (L.generated(img) != phi.codomain) throw InputError("morphism.P': does not match the image of P");
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Reports

ojson subgroup_json(const SubgroupLattice& L, SubId P) {
    ojson j;
    j["key"] = L.key_hex(P);
    j["order"] = L.order(P);
    return j;
}

ojson table_json(const Table& t) {
    ojson a = ojson::array();
    for (auto v : t) a.push_back(v);
    return a;
}

ojson chain_json(const FusionSystem& E, const AlperinChain& c, const FusionMorphism& phi) {
    const SubgroupLattice& L = E.lattice();
    const auto ess = essential_subgroups(E);
    ojson j;
    j["P"] = subgroup_json(L, c.P0);
    ojson steps = ojson::array();
    for (const auto& s : c.steps) {
        ojson st = subgroup_json(L, s.Q);
        st["essential"] = std::binary_search(ess.begin(), ess.end(), s.Q);
        st["fully_normalized"] = is_fully_normalized(E, s.Q);
        st["phi"] = table_json(s.phi);
        steps.push_back(std::move(st));
    }
    j["steps"] = std::move(steps);
    j["length"] = c.length(L);
    auto comp = recompose(L, c);
    j["composite_hash"] = comp ? hex64(table_hash(*comp)) : std::string("undefined");
    auto chk = check_chain(E, c, phi);
    j["check"] = {{"valid", chk.valid},
                  {"recomposes", chk.recomposes},
                  {"essential", chk.essential},
                  {"fully_normalized", chk.fully_normalized}};
    if (!chk.reason.empty()) j["check"]["reason"] = chk.reason;
    return j;
}

ojson group_report(const GroupSpec& g) {
    ojson j;
    j["name"] = g.name;
    j["order"] = g.G->order();
    j["degree"] = g.G->degree();
    j["prime"] = g.p;
    j["factors"] = g.G->factor_count();
    j["sylow_order"] = g.S.order();
    auto L = make_lattice(g.S, g.p);
    j["sylow_subgroups"] = L->size();
    if (!g.G->is_product() && g.G->order() <= caps().general_lattice_order)
        j["quillen"] = to_string(quillen_poset_connected(g.G, g.p));
    return j;
}

ojson fusion_report(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    ojson j;
    j["system"] = F.name();
    j["kind"] = to_string(F.kind());
    j["S_order"] = L.group().order();
    ojson subs = ojson::array();
    for (SubId P = 0; P < L.size(); ++P) subs.push_back(subgroup_json(L, P));
    j["subgroups"] = std::move(subs);
    j["morphisms"] = F.morphism_count();
    if (L.size() <= 512) {
        // |Hom(P, Q)| for every pair, rows P and columns Q in subgroup order
        ojson rows = ojson::array();
        for (SubId P = 0; P < L.size(); ++P) {
            const auto& imgs = F.embeddings(P).images;
            ojson row = ojson::array();
            for (SubId Q = 0; Q < L.size(); ++Q) {
                std::size_t n = 0;
                for (SubId I : imgs) n += L.leq(I, Q);
                row.push_back(n);
            }
            rows.push_back(std::move(row));
        }
        j["hom_counts"] = std::move(rows);
    }
    ojson sc = ojson::array();
    for (SubId N : strongly_closed_subgroups(F)) sc.push_back(subgroup_json(L, N));
    j["strongly_closed"] = std::move(sc);
    return j;
}

ojson saturation_report(const FusionSystem& F, std::uint64_t seed) {
    const SubgroupLattice& L = F.lattice();
    SaturationCache C(F);
    const auto rep = is_saturated(F, &C);
    ojson j;
    j["system"] = F.name();
    j["saturated"] = rep.saturated;
    ojson classes = ojson::array();
    std::size_t checked = 0, agree = 0;
    for (const auto& c : rep.classes) {
        ojson cj;
        ojson mem = ojson::array();
        for (SubId Q : c.members) mem.push_back(L.key_hex(Q));
        cj["order"] = L.order(c.members.front());
        cj["members"] = std::move(mem);
        if (c.fully_normalized) {
            cj["fully_normalized"] = L.key_hex(*c.fully_normalized);
            auto A = C.aut(*c.fully_normalized);
            if (A->group->order() <= caps().aut_order)
                for (const auto& [name, K] : k_sweep(F, *A, seed, true)) {
                    ++checked;
                    agree += check_k_normalized(F, *A, K).agree();
                }
        } else {
            cj["fully_normalized"] = nullptr;
        }
        classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    ojson fails = ojson::array();
    for (auto k : rep.failing_classes) fails.push_back(k);
    j["failing_classes"] = std::move(fails);
    j["k_sweep"] = {{"checked", checked}, {"agree", agree}};
    return j;
}

ojson essentials_report(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    ojson j;
    j["system"] = F.name();
    ojson es = ojson::array();
    for (SubId Q : essential_subgroups(F)) {
        auto info = essential_info(F, Q);
        ojson e = subgroup_json(L, Q);
        e["contains_T"] = info.contains_T;
        e["aut_order"] = F.automorphisms(Q).size();
        e["fully_normalized"] = is_fully_normalized(F, Q);
        if (info.quillen) e["quillen"] = to_string(*info.quillen);
        es.push_back(std::move(e));
    }
    j["essential"] = std::move(es);
    return j;
}

ojson decompose_report(const FusionSystem& F, const FusionMorphism& phi) {
    const SubgroupLattice& L = F.lattice();
    ojson j;
    j["system"] = F.name();
    j["phi"] = {{"P", subgroup_json(L, phi.domain)}, {"image", subgroup_json(L, L.image(phi.table))},
                {"table", table_json(phi.table)}};
    auto raw = alperin_decompose(F, phi);
    auto c = refine_to_essential(F, raw);
    j["chain"] = chain_json(F, c, phi);
    ojson lens;
    for (AlpVariant v : {AlpVariant::open, AlpVariant::closed, AlpVariant::essential}) {
        auto r = alp_length(F, phi, v);
        if (r.length)
            lens[to_string(v)] = *r.length;
        else
            lens[to_string(v)] = nullptr;
    }
    j["lengths"] = std::move(lens);
    return j;
}

ojson length_report(const FusionSystem& F, const FusionMorphism& phi, AlpVariant v) {
    ojson j;
    j["system"] = F.name();
    j["variant"] = to_string(v);
    auto r = alp_length(F, phi, v);
    if (r.length) {
        j["length"] = *r.length;
        j["chain"] = chain_json(F, r.chain, phi);
    } else {
        j["length"] = nullptr;
    }
    j["states"] = r.states;
    return j;
}

ojson product_report(const std::vector<GroupSpec>& specs, const std::vector<MorphismSelector>& sels,
                     bool open_variant) {
    if (specs.size() < 2 || sels.size() != specs.size())
        throw InputError("product: need at least two specs, each with a morphism");
    const unsigned p = specs[0].p;
    std::vector<GroupPtr> groups;
    std::vector<Subgroup> sylows;
    for (const auto& s : specs) {
        if (s.p != p) throw InputError("product: specs disagree on the prime");
        if (s.G->is_product()) throw InputError("product: factor specs must be plain groups");
        groups.push_back(s.G);
        sylows.push_back(s.S);
    }
    const GroupPtr G = FiniteGroup::product(groups, "product");
    auto Fp = realize(G, catalog::product_subgroup(G, sylows), p);
    std::vector<std::shared_ptr<const RealizedSystem>> own;
    std::vector<const RealizedSystem*> factors;
    std::vector<FusionMorphism> phis;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        own.push_back(realize(specs[k].G, specs[k].S, p));
        factors.push_back(own.back().get());
        phis.push_back(select_morphism(*own.back(), sels[k]));
    }
    auto r = product_length_laws(*Fp, factors, phis, open_variant);
    ojson j;
    j["factors"] = ojson::array();
    for (std::size_t k = 0; k < specs.size(); ++k)
        j["factors"].push_back({{"name", specs[k].name}, {"alp", r.alp[k]}, {"alp_ess", r.alp_ess[k]}});
    if (r.alp_prod)
        j["alp_product"] = *r.alp_prod;
    else
        j["alp_product"] = nullptr;
    j["alp_ess_product"] = r.alp_ess_prod;
    j["laws"] = {{"sum_bound", r.sum_bound}, {"closed_is_sup", r.closed_is_sup}, {"ess_is_sum", r.ess_is_sum},
                 {"holds", r.holds()}};
    if (specs.size() == 2) {
        const SubgroupLattice& L = Fp->lattice();
        ojson es = ojson::array();
        bool all = true;
        for (SubId P : essential_subgroups(*Fp)) {
            auto s = product_radical_split(*Fp, *factors[0], *factors[1], P);
            ojson e = subgroup_json(L, P);
            e["is_product"] = s.is_product;
            e["factor_orders"] = {factors[0]->lattice().order(s.Q), factors[1]->lattice().order(s.R)};
            e["holds"] = s.holds;
            all = all && s.holds && s.is_product;
            es.push_back(std::move(e));
        }
        j["essential"] = std::move(es);
        j["essential_shape_holds"] = all;
    }
    return j;
}

ojson tower_report(const TowerSpec& spec) {
    const GroupPtr& G = spec.group.G;
    std::vector<Subgroup> normals;
    for (std::size_t i = 0; i < spec.normals.size(); ++i)
        normals.push_back(subgroup_of(G, spec.normals[i], "normals[" + std::to_string(i) + "]"));
    Tower T = tower_from_group(G, spec.group.S, spec.group.p, normals, spec.group.name);
    const SubgroupLattice& L = T.limit_lattice();
    ojson j;
    j["depth"] = T.depth();
    ojson lv = ojson::array();
    for (std::size_t i = 0; i < T.depth(); ++i) {
        lv.push_back({{"group_order", T.groups[i]->order()},
                      {"S_order", T.level(i).S().order()},
                      {"subgroups", T.level(i).lattice().size()},
                      {"kernel", subgroup_json(L, T.kernels[i])},
                      {"stable_image", stable_image(T, i)}});
    }
    j["levels"] = std::move(lv);
    j["pro_saturated"] = is_pro_saturated(T);
    auto sat = saturation_at_depth(T);
    j["saturation_at_depth"] = {{"open", sat.open_ok}, {"all", sat.all_ok}};
    if (!T.group_maps.empty() || T.depth() == 1) {
        auto s = sylow_limit_check(T, T.group_maps);
        j["sylow_limit"] = s.limit_sylow;
    }
    if (spec.morphism) {
        auto top = std::dynamic_pointer_cast<const RealizedSystem>(T.levels.back());
        const FusionMorphism phi = select_morphism(*top, *spec.morphism);
        auto ll = limitlength_check(T, thread_of(T, phi));
        j["limit_length"] = {{"per_level", ll.per_level}, {"sup", ll.sup}, {"limit", ll.limit},
                             {"bound", ll.bound}, {"nondecreasing", ll.nondecreasing}};
        if (!spec.subsystems.empty()) {
            SubsystemSequence seq;
            for (std::size_t i = 0; i < spec.subsystems.size(); ++i) {
                Subgroup H = subgroup_of(G, spec.subsystems[i], "subsystems[" + std::to_string(i) + "]");
                if (!is_normal(G, H)) throw InputError("subsystems[" + std::to_string(i) + "]: not normal");
                seq.systems.push_back(realize_subsystem(G, spec.group.S, H, spec.group.p, top->lattice_ptr()));
            }
            auto sc = convergent_alperin(T, seq, phi);
            ojson stages = ojson::array();
            for (std::size_t i = 0; i < sc.stages.size(); ++i) {
                const auto& st = sc.stages[i];
                stages.push_back({{"level", st.level},
                                  {"N", subgroup_json(L, st.N)},
                                  {"psi", table_json(st.psi.table)},
                                  {"chain", chain_json(*seq.systems[i], st.chain, st.psi)},
                                  {"residual_mod_T", st.residual_mod_T},
                                  {"residual_in_next", st.residual_in_next}});
            }
            j["stages"] = std::move(stages);
            auto comp = recompose(L, sc.chain);
            j["final_composite_hash"] = comp ? hex64(table_hash(*comp)) : std::string("undefined");
            j["final_is_inclusion"] = sc.final_is_inclusion;
            j["recomposes"] = sc.recomposes;
        }
    }
    return j;
}

std::string fusion_tsv(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    const auto sc = strongly_closed_subgroups(F);
    std::ostringstream out;
    out << "key\torder\temb\tstrongly_closed\n";
    for (SubId P = 0; P < L.size(); ++P)
        out << L.key_hex(P) << '\t' << L.order(P) << '\t' << F.embeddings(P).maps.size() << '\t'
            << (std::find(sc.begin(), sc.end(), P) != sc.end()) << '\n';
    return out.str();
}

std::string saturation_tsv(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    const auto rep = is_saturated(F);
    std::ostringstream out;
    out << "class\torder\tsize\tfully_normalized\n";
    for (std::size_t k = 0; k < rep.classes.size(); ++k) {
        const auto& c = rep.classes[k];
        out << k << '\t' << L.order(c.members.front()) << '\t' << c.members.size() << '\t'
            << (c.fully_normalized ? L.key_hex(*c.fully_normalized) : std::string("-")) << '\n';
    }
    return out.str();
}

std::string essentials_tsv(const FusionSystem& F) {
    const SubgroupLattice& L = F.lattice();
    std::ostringstream out;
    out << "key\torder\tcentric\tradical\tessential\n";
    for (SubId Q = 0; Q < L.size(); ++Q) {
        auto info = essential_info(F, Q);
        out << L.key_hex(Q) << '\t' << L.order(Q) << '\t' << info.centric << '\t' << info.radical << '\t'
            << info.essential << '\n';
    }
    return out.str();
}

}  // namespace profusion
