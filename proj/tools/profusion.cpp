// Batch front-end: read a spec file, run one analysis, print a report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "profusion/io.hpp"
#include "profusion/saturation.hpp"

using namespace profusion;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::vector<std::string> specs;
    std::optional<unsigned> prime;
    std::string variant = "essential";
    std::optional<int> depth;
    std::string out;
    std::string format = "json";
    std::vector<std::string> caps;
    std::uint64_t seed = 1;
};

void apply_cap(Caps& c, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("--cap " + kv + ": expected name=value");
    const std::string name = kv.substr(0, eq);
    std::uint64_t v = 0;
    try {
        std::size_t used = 0;
        v = std::stoull(kv.substr(eq + 1), &used);
        if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw InputError("--cap " + kv + ": value is not a non-negative integer");
    }
    if (v == 0) throw InputError("--cap " + kv + ": caps must be positive");
    if (name == "group_order") c.group_order = v;
    else if (name == "p_group_order") c.p_group_order = v;
    else if (name == "table_order") c.table_order = v;
    else if (name == "general_lattice_order") c.general_lattice_order = v;
    else if (name == "aut_order") c.aut_order = v;
    else if (name == "subgroup_count") c.subgroup_count = v;
    else if (name == "depth") c.depth = static_cast<int>(v);
    else throw InputError("--cap " + name + ": unknown cap");
}

ojson caps_json(const Caps& c) {
    return {{"group_order", c.group_order},
            {"p_group_order", c.p_group_order},
            {"table_order", c.table_order},
            {"general_lattice_order", c.general_lattice_order},
            {"aut_order", c.aut_order},
            {"subgroup_count", c.subgroup_count},
            {"depth", c.depth}};
}

AlpVariant parse_variant(const std::string& s) {
    if (s == "open") return AlpVariant::open;
    if (s == "closed") return AlpVariant::closed;
    if (s == "essential") return AlpVariant::essential;
    throw InputError("--variant: expected open, closed or essential");
}

struct Loaded {
    ojson json;
    GroupSpec group;
};

Loaded load_group(const std::string& path, const std::string& text, const Options& o) {
    Loaded l;
    l.json = parse_json_text(text, path);
    if (o.prime && l.json.is_object()) l.json["prime"] = *o.prime;
    if (o.prime && l.json.is_object()) l.json.erase("sylow");
    try {
        l.group = parse_group_spec(l.json);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
    if (l.group.name.empty()) l.group.name = fs::path(path).stem().string();
    return l;
}

MorphismSelector need_morphism(const Loaded& l, const std::string& path) {
    if (!l.json.contains("morphism")) throw InputError(path + ": morphism: missing");
    try {
        auto m = parse_morphism(l.json["morphism"], l.group.G->degree(), "morphism");
        if (!m) throw InputError("morphism: missing");
        return *m;
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Report body for one command, as JSON or TSV text.
std::string run(const std::string& cmd, const Options& o, const std::vector<std::string>& texts) {
    const bool tsv = o.format == "tsv";
    if (tsv && cmd != "fusion" && cmd != "saturation" && cmd != "essentials")
        throw InputError("--format tsv is only available for fusion, saturation and essentials");
    if (cmd != "product" && o.specs.size() != 1) throw InputError(cmd + ": expects exactly one --spec");

    ojson result;
    if (cmd == "tower") {
        ojson j = parse_json_text(texts[0], o.specs[0]);
        TowerSpec t;
        try {
            t = parse_tower_spec(j);
        } catch (const InputError& e) {
            throw InputError(o.specs[0] + ": " + e.what());
        }
        result = tower_report(t);
    } else if (cmd == "product") {
        std::vector<GroupSpec> gs;
        std::vector<MorphismSelector> sels;
        for (std::size_t k = 0; k < o.specs.size(); ++k) {
            auto l = load_group(o.specs[k], texts[k], o);
            sels.push_back(need_morphism(l, o.specs[k]));
            gs.push_back(std::move(l.group));
        }
        const AlpVariant v = parse_variant(o.variant);
        result = product_report(gs, sels, v != AlpVariant::essential);
    } else {
        auto l = load_group(o.specs[0], texts[0], o);
        if (cmd == "group-info") {
            result = group_report(l.group);
        } else {
            auto F = realize(l.group.G, l.group.S, l.group.p);
            if (cmd == "fusion") {
                if (tsv) return fusion_tsv(*F);
                result = fusion_report(*F);
            } else if (cmd == "saturation") {
                if (tsv) return saturation_tsv(*F);
                result = saturation_report(*F, o.seed);
            } else if (cmd == "essentials") {
                if (tsv) return essentials_tsv(*F);
                result = essentials_report(*F);
            } else {
                const auto phi = select_morphism(*F, need_morphism(l, o.specs[0]));
                result = cmd == "decompose" ? decompose_report(*F, phi) : length_report(*F, phi, parse_variant(o.variant));
            }
        }
    }

    std::uint64_t h = 0;
    for (const auto& t : texts) h = fnv1a(hex64(h) + t);
    ojson report;
    report["tool"] = "profusion";
    report["command"] = cmd;
    report["spec_hash"] = hex64(h);
    report["config"] = {{"caps", caps_json(caps())}, {"seed", o.seed}, {"variant", o.variant}};
    report["result"] = std::move(result);
    return report.dump(2) + "\n";
}

int execute(const std::string& cmd, const Options& o) {
    Caps c = caps();
    for (const auto& kv : o.caps) apply_cap(c, kv);
    if (o.depth) {
        if (*o.depth <= 0) throw InputError("--depth: must be positive");
        c.depth = *o.depth;
    }
    set_caps(c);
    if (o.format != "json" && o.format != "tsv") throw InputError("--format: expected json or tsv");

    std::vector<std::string> texts;
    for (const auto& p : o.specs) texts.push_back(read_file(p));

    // Optional on-disk cache keyed by spec bytes, command and config.
    std::string cache_file;
    if (const char* dir = std::getenv("PROFUSION_CACHE_DIR"); dir && *dir) {
        std::string key = cmd + '\0' + caps_json(caps()).dump() + '\0' + std::to_string(o.seed) + '\0' + o.variant +
                          '\0' + o.format + '\0' + (o.prime ? std::to_string(*o.prime) : "-");
        for (const auto& t : texts) key += '\0' + t;
        cache_file = (fs::path(dir) / (hex64(fnv1a(key)) + (o.format == "tsv" ? ".tsv" : ".json"))).string();
    }

    std::string body;
    if (!cache_file.empty() && fs::exists(cache_file)) {
        body = read_file(cache_file);
    } else {
        body = run(cmd, o, texts);
        if (!cache_file.empty()) {
            std::error_code ec;
            fs::create_directories(fs::path(cache_file).parent_path(), ec);
            std::ofstream(cache_file, std::ios::binary) << body;
        }
    }

    if (o.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw InputError("cannot write " + o.out);
        f << body;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"profusion: fusion systems of finite groups and their towers"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"group-info", "order, Sylow subgroup and lattice size"},
        {"fusion", "subgroups, hom-set counts and strongly closed subgroups"},
        {"saturation", "saturation check with fully normalized representatives"},
        {"essentials", "essential subgroups"},
        {"decompose", "Alperin chain for the spec's morphism"},
        {"length", "Alperin length for the spec's morphism"},
        {"product", "length laws for a product of morphisms (one --spec per factor)"},
        {"tower", "tower report: limits, saturation and staged chains"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--spec", o.specs, "spec file (JSON)")->required();
        sub->add_option("--prime", o.prime, "override the spec's prime");
        sub->add_option("--variant", o.variant, "open, closed or essential");
        sub->add_option("--depth", o.depth, "maximum tower depth");
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_option("--format", o.format, "json or tsv");
        sub->add_option("--cap", o.caps, "override a cap, name=value (repeatable)");
        sub->add_option("--seed", o.seed, "seed for sampled K-sweeps");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return execute(cmd, o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
