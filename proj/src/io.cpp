#include "fuscomp/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fuscomp/error.hpp"

namespace fuscomp {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail("io", origin + ": parse error at byte " + std::to_string(e.byte));
    }
}

Perm perm_from_json(const json& j, int degree, const std::string& where) {
    if (!j.is_array()) fail("io", where + " is not a list of cycles");
    std::vector<std::vector<int>> cycles;
    for (const auto& c : j) {
        if (!c.is_array()) fail("io", where + " has a cycle that is not a list");
        std::vector<int> cyc;
        for (const auto& x : c) {
            if (!x.is_number_integer()) fail("io", where + " has a non-integer point");
            cyc.push_back(x.get<int>());
        }
        cycles.push_back(std::move(cyc));
    }
    try {
        return perm_from_cycles(degree, cycles);
    } catch (const Error& e) {
        fail("io", where + " is not a bijection: " + e.what());
    }
}

std::shared_ptr<const FiniteGroup> group_from_json(const json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("generators"))
        fail("io", origin + ": group needs \"degree\" and \"generators\"");
    int degree = j.at("degree").get<int>();
    require(degree > 0, "io", origin + ": degree must be positive");
    std::vector<Perm> gens;
    const auto& g = j.at("generators");
    for (std::size_t i = 0; i < g.size(); ++i)
        gens.push_back(perm_from_json(g[i], degree, origin + ": generator " + std::to_string(i)));
    std::string name = j.value("name", std::string("G"));
    return std::make_shared<const FiniteGroup>(name, degree, gens);
}

std::shared_ptr<const FiniteGroup> group_ref(const json& j, const std::string& origin, const std::string& base_dir) {
    if (j.is_string()) {
        std::filesystem::path p(j.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return load_group(p.string());
    }
    return group_from_json(j, origin);
}

int element_of(const Universe& U, const Perm& p, const std::string& where) {
    int x = U.G().find(p);
    if (x < 0) fail("io", where + " is not an element of S");
    return x;
}

}  // namespace

std::shared_ptr<const FiniteGroup> parse_group(const std::string& text, const std::string& origin) {
    return group_from_json(parse_json(text, origin), origin);
}

std::shared_ptr<const FiniteGroup> load_group(const std::string& path) {
    return parse_group(read_file(path), path);
}

FusionInput parse_fusion(const std::string& text, const std::string& origin, const std::string& base_dir) {
    json j = parse_json(text, origin);
    FusionInput out;
    if (j.contains("abstract")) {
        const auto& a = j.at("abstract");
        auto S = group_ref(a.at("S"), origin + ": S", base_dir);
        int p = a.at("p").get<int>();
        auto U = Universe::make(S);
        std::vector<GeneratorHom> gens;
        const auto& hs = a.value("homs", json::array());
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string where = origin + ": hom " + std::to_string(i);
            GeneratorHom g;
            for (const auto& s : hs[i].at("source"))
                g.source_gens.push_back(element_of(*U, perm_from_json(s, S->degree(), where), where + " source"));
            for (const auto& s : hs[i].at("images"))
                g.images.push_back(element_of(*U, perm_from_json(s, S->degree(), where), where + " image"));
            gens.push_back(std::move(g));
        }
        std::string mode = a.value("closure", std::string("validate"));
        require(mode == "generate" || mode == "validate", "io", origin + ": closure must be generate or validate");
        out.F = abstract_fusion(U, p, gens, mode == "generate" ? ClosureMode::Generate : ClosureMode::Validate,
                                S->name());
        return out;
    }
    if (!j.contains("ambient")) fail("io", origin + ": fusion input needs \"ambient\" or \"abstract\"");
    out.ambient = group_ref(j.at("ambient"), origin + ": ambient", base_dir);
    const FiniteGroup& G = *out.ambient;
    if (j.contains("sylow_p")) {
        int p = j.at("sylow_p").get<int>();
        require(is_prime(p), "io", origin + ": sylow_p is not prime");
        std::vector<Perm> gens;
        for (int x : sylow_subgroup(G, p)) gens.push_back(G.perm(x));
        out.F = fusion_from_group(G, gens, p, G.name());
    } else {
        int p = j.at("p").get<int>();
        std::vector<Perm> gens;
        const auto& s = j.at("S");
        for (std::size_t i = 0; i < s.size(); ++i) {
            Perm q = perm_from_json(s[i], G.degree(), origin + ": S generator " + std::to_string(i));
            require(G.find(q) >= 0, "io", origin + ": S generator " + std::to_string(i) + " is not in the ambient group");
            gens.push_back(q);
        }
        out.F = fusion_from_group(G, gens, p, G.name());
    }
    return out;
}

FusionInput load_fusion(const std::string& path) {
    return parse_fusion(read_file(path), path, std::filesystem::path(path).parent_path().string());
}

std::string data_path(const std::string& name) {
    return (std::filesystem::path(FUSCOMP_DATA_DIR) / name).string();
}

std::shared_ptr<const FiniteGroup> ambient_normalizer(const FiniteGroup& ambient, const Universe& U, int H) {
    std::vector<int> h;
    for (int x : U.elems(H)) h.push_back(ambient.find(U.G().perm(x)));
    auto loc = local_subgroups(ambient, h);
    // generators: greedy, skipping elements already generated
    std::vector<int> gens, cur{0};
    for (int x : loc.normalizer) {
        if (std::binary_search(cur.begin(), cur.end(), x)) continue;
        gens.push_back(x);
        cur = generate_subgroup(ambient, gens);
    }
    std::vector<Perm> perms;
    for (int g : gens) perms.push_back(ambient.perm(g));
    return std::make_shared<const FiniteGroup>("N(" + std::to_string(H) + ")", ambient.degree(), perms);
}

}  // namespace fuscomp
