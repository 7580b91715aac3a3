// Command-line driver. Every verb prints a deterministic report in text or JSON.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "fuscomp/error.hpp"
#include "fuscomp/green.hpp"
#include "fuscomp/identities.hpp"
#include "fuscomp/io.hpp"
#include "fuscomp/mackey.hpp"
#include "fuscomp/mackeymod.hpp"
#include "fuscomp/orbitprod.hpp"

using namespace fuscomp;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string group, fusion, field = "p", out = "text", suite, example, idempotent = "identity";
    int p = 0, H = -1, K = -1, x = -1, y = -1, klein = 0;
    std::vector<int> family;
    std::uint64_t seed = kDefaultSeed;
    bool corrupt = false, refine = false;
};

std::string resolve(const std::string& name) {
    if (std::filesystem::exists(name)) return name;
    return data_path(name);
}

FusionInput load_input(const Options& o) {
    if (!o.fusion.empty()) return load_fusion(resolve(o.fusion));
    if (o.group.empty()) fail("cli", "either --fusion or --group is required");
    require(o.p > 0, "cli", "--group needs -p");
    auto G = load_group(resolve(o.group));
    std::vector<Perm> gens;
    for (int g : sylow_subgroup(*G, o.p)) gens.push_back(G->perm(g));
    return FusionInput{G, fusion_from_group(*G, gens, o.p)};
}

PrimeField field_of(const Options& o, const FusionSystem& F) {
    const int p = o.p > 0 ? o.p : F.p();
    require(is_prime(p), "cli", "-p must be prime");
    return PrimeField(static_cast<uint32_t>(p));
}

int need_subgroup(const FusionSystem& F, int id, const char* flag) {
    require(id >= 0 && id < F.U().lat().size() && F.in_system(id), "cli",
            std::string(flag) + " must be a subgroup id of S");
    return id;
}

json hom_json(const Hom& h) { return json{{"src", h.src}, {"img", h.img}, {"table", h.table}}; }

json pair_json(const ProductPair& pr) { return json{{"A", pr.A}, {"phi", hom_json(pr.phi)}}; }

// Output helper: JSON is canonical; text is a flat rendering of the same data.
void emit(const Options& o, const json& j) {
    if (o.out == "json") {
        std::cout << j.dump(1) << '\n';
        return;
    }
    std::function<void(const json&, const std::string&)> walk = [&](const json& v, const std::string& path) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) walk(it.value(), path.empty() ? it.key() : path + "." + it.key());
        } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); })) {
            for (std::size_t i = 0; i < v.size(); ++i) walk(v[i], path + "[" + std::to_string(i) + "]");
        } else {
            std::cout << path << ' ' << v.dump() << '\n';
        }
    };
    walk(j, "");
}

// The module the module-level verbs act on: the cyclic module at level H
// generated by I_H^H or by the example idempotent.
MackeyModule pick_module(const Options& o, const MackeyContext& ctx, const PrimeField& k, int H) {
    auto A = ctx.algebra();
    if (o.idempotent == "identity") return cyclic_module(A, k, melem_basis(k, A->identity(H)));
    if (o.idempotent == "example") {
        auto e = example_idempotent(*A, k, H);
        if (!e) fail("cli", "Aut_F(H) has no element of order 3");
        return cyclic_module(A, k, *e);
    }
    fail("cli", "--idempotent must be identity or example");
}

json defect_json(const DefectData& d) {
    return json{{"defect_set", d.defect_set},
                {"defect_groups", d.defect_groups},
                {"vertex", d.vertex ? json(*d.vertex) : json(nullptr)}};
}

int run(const std::string& verb, const Options& o) {
    if (verb == "verify-example" || (verb == "green" && !o.example.empty())) {
        std::string file = o.fusion;
        if (file.empty()) {
            if (o.example.empty() || o.example == "gl23") file = "f1_gl23.json";
            else if (o.example == "gl32") file = "f1_gl32.json";
            else fail("cli", "unknown example " + o.example + " (expected gl23 or gl32)");
        }
        ExampleOptions eo;
        eo.klein = o.klein;
        eo.corrupt_idempotent = o.corrupt;
        eo.refine_idempotent = o.refine;
        eo.seed = o.seed;
        auto rep = verify_example(load_fusion(resolve(file)), eo);
        if (o.out == "json") std::cout << rep.json() << '\n';
        else std::cout << rep.text();
        return rep.passed() ? 0 : 1;
    }

    FusionInput in = load_input(o);
    const FusionSystem& F = *in.F;
    const Universe& U = F.U();
    json j;
    j["system"] = F.name();

    if (verb == "centrics") {
        json arr = json::array();
        for (int A : F.centrics())
            arr.push_back(json{{"id", A}, {"order", U.order(A)}, {"class_rep", F.class_rep(A)},
                               {"fully_normalized", F.is_fully_normalized(A)}});
        j["centrics"] = arr;
    } else if (verb == "saturation") {
        auto r = check_saturation(F);
        j["saturated"] = r.saturated;
        j["sylow_axiom"] = r.sylow_axiom;
        j["failure"] = r.failure;
    } else if (verb == "product") {
        const int H = need_subgroup(F, o.H, "--H"), K = need_subgroup(F, o.K, "--K");
        auto P = product_pairs(F, H, K);
        json arr = json::array();
        for (const auto& pr : P.pairs) arr.push_back(pair_json(pr));
        j["H"] = H;
        j["K"] = K;
        j["pairs"] = arr;
    } else if (verb == "decompose") {
        const int H = need_subgroup(F, o.H, "--H"), K = need_subgroup(F, o.K, "--K");
        require(F.is_fully_normalized(H), "cli", "--H must be fully normalized");
        auto NF = normalizer_system(F, H);
        json arr = json::array();
        for (const auto& b : decompose_product(F, *NF, H, K)) {
            json pairs = json::array();
            for (const auto& pr : b.pairs) pairs.push_back(pair_json(pr));
            arr.push_back(json{{"base", pair_json(b.base)}, {"N", b.N}, {"ext", hom_json(b.ext)}, {"pairs", pairs}});
        }
        j["H"] = H;
        j["K"] = K;
        j["blocks"] = arr;
        j["matches_product"] = [&] {
            std::vector<ProductPair> all;
            for (const auto& b : decompose_product(F, *NF, H, K)) all.insert(all.end(), b.pairs.begin(), b.pairs.end());
            return same_pairs(U, all, product_pairs(F, H, K).pairs, H, K);
        }();
    } else if (verb == "mackey-basis") {
        MackeyAlgebra A(in.F);
        json arr = json::array();
        for (int i = 0; i < A.size(); ++i) {
            const auto& key = A.key(i);
            arr.push_back(json{{"index", i}, {"A", key.A}, {"B", key.B}, {"phi", hom_json(key.phi)},
                               {"centric", A.is_centric(i)}});
        }
        j["size"] = A.size();
        j["centric"] = A.centric_basis().size();
        j["basis"] = arr;
    } else if (verb == "mackey-mul") {
        MackeyAlgebra A(in.F);
        require(o.x >= 0 && o.x < A.size() && o.y >= 0 && o.y < A.size(), "cli", "--x and --y must be basis indices");
        j["x"] = o.x;
        j["y"] = o.y;
        j["product"] = A.product(o.x, o.y);
    } else if (verb == "burnside") {
        BurnsideRing B(in.F);
        json reps = json::array(), table = json::array();
        for (int i = 0; i < B.size(); ++i) {
            reps.push_back(B.rep(i));
            json row = json::array();
            for (int t = 0; t < B.size(); ++t) row.push_back(B.product(i, t));
            table.push_back(row);
        }
        j["classes"] = reps;
        j["table"] = table;
        if (o.field == "q0") {
            RationalField q;
            auto u = burnside_unit(B, q);
            j["field"] = "q0";
            j["unit"] = u ? json([&] {
                json a = json::array();
                for (const auto& c : u->unit) a.push_back(c.get_str());
                return a;
            }())
                          : json(nullptr);
        } else if (o.field == "p") {
            auto k = field_of(o, F);
            auto u = burnside_unit(B, k);
            j["field"] = "F_" + std::to_string(k.characteristic());
            j["unit"] = u ? json(u->unit) : json(nullptr);
            j["S_inverse"] = u ? json(u->S_inverse) : json(nullptr);
        } else {
            fail("cli", "--field must be p or q0");
        }
    } else if (verb == "gamma") {
        MackeyAlgebra A(in.F);
        auto k = field_of(o, F);
        const int H = need_subgroup(F, o.H, "--H");
        require(F.is_centric(H), "cli", "--H must be centric");
        json arr = json::array();
        for (const auto& [i, c] : gamma(A, k, H)) arr.push_back(json{i, c});
        j["H"] = H;
        j["gamma"] = arr;
    } else if (verb == "module" || verb == "projectivity" || verb == "vertex" || verb == "green") {
        MackeyContext ctx(in.F);
        auto k = field_of(o, F);
        const int H = need_subgroup(F, o.H, "--H");
        require(F.is_centric(H), "cli", "--H must be centric");
        MackeyModule M = pick_module(o, ctx, k, H);
        if (verb == "module") {
            std::cout << module_json(M) << '\n';
            return 0;
        }
        if (verb == "projectivity") {
            for (int X : o.family) need_subgroup(F, X, "--family");
            auto r = relative_projectivity(ctx, M, o.family);
            j["family"] = o.family;
            j["projective"] = r.projective;
        } else if (verb == "vertex") {
            j["module_dim"] = M.total_dim();
            j["indecomposable"] = is_indecomposable(M);
            j["defect"] = defect_json(defect_data(ctx, M));
        } else {
            // Continue with a local summand so the correspondence applies.
            FiniteAlgebra E = end_algebra(M);
            auto dec = decompose_identity(E, o.seed);
            M = image_module(M, end_element(E, M, dec.idempotents.front()));
            auto r = green_down(ctx, M, H, o.seed);
            if (o.out == "json") std::cout << correspondence_json(r) << '\n';
            else emit(o, json::parse(correspondence_json(r)));
            return 0;
        }
    } else if (verb == "verify-identities") {
        const std::string suite = o.suite.empty() ? "properties-HXK" : o.suite;
        json items = json::array();
        bool ok = true;
        if (suite == "properties-HXK") {
            auto FS = fusion_of_subgroup(F.universe(), F.top(), F.p());
            auto r = verify_product_identities(F, FS.get());
            items.push_back(json{{"name", "product identities"}, {"checked", r.checked}, {"failures", r.failures}});
            ok = r.failures.empty();
        } else if (suite == "transfer") {
            MackeyContext ctx(in.F);
            auto k = field_of(o, F);
            const int H = need_subgroup(F, o.H, "--H");
            MackeyModule M = pick_module(o, ctx, k, H);
            for (const auto& it : verify_transfer_identities(ctx, M, 3, o.seed)) {
                items.push_back(json{{"name", it.name}, {"checked", it.checked}, {"failures", it.failures}});
                ok = ok && it.failures.empty();
            }
        } else {
            fail("cli", "unknown suite " + suite + " (expected properties-HXK or transfer)");
        }
        j["suite"] = suite;
        j["items"] = items;
        j["pass"] = ok;
        emit(o, j);
        return ok ? 0 : 1;
    } else {
        fail("cli", "unknown verb " + verb);
    }
    emit(o, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fusion systems, centric Mackey functors and the Green correspondence"};
    app.require_subcommand(1, 1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"centrics", "list F-centric subgroups"},
        {"saturation", "check the saturation axioms"},
        {"product", "product pairs [H x K]"},
        {"decompose", "decompose [H x K] through N_F(H)"},
        {"mackey-basis", "basis of the Mackey algebra"},
        {"mackey-mul", "product of two basis elements"},
        {"burnside", "centric Burnside ring and its unit"},
        {"gamma", "image of a Burnside class in the centric quotient"},
        {"module", "dump a cyclic centric module"},
        {"projectivity", "relative projectivity of a cyclic module"},
        {"vertex", "defect set and vertex of a cyclic module"},
        {"green", "Green correspondence (use --example for the worked example)"},
        {"verify-example", "end-to-end example pipeline"},
        {"verify-identities", "run an identity suite"},
    };
    for (const auto& [name, help] : verbs) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--group", o.group, "group file");
        sub->add_option("--fusion", o.fusion, "fusion system file");
        sub->add_option("-p", o.p, "prime");
        sub->add_option("--field", o.field, "p or q0")->check(CLI::IsMember({"p", "q0"}));
        sub->add_option("--H", o.H, "subgroup id");
        sub->add_option("--K", o.K, "subgroup id");
        sub->add_option("--out", o.out, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--seed", o.seed, "idempotent splitting seed");
        if (name == "mackey-mul") {
            sub->add_option("--x", o.x, "basis index")->required();
            sub->add_option("--y", o.y, "basis index")->required();
        }
        if (name == "module" || name == "projectivity" || name == "vertex" || name == "green" ||
            name == "verify-identities")
            sub->add_option("--idempotent", o.idempotent, "identity or example")
                ->check(CLI::IsMember({"identity", "example"}));
        if (name == "projectivity") sub->add_option("--family", o.family, "subgroup ids");
        if (name == "verify-identities") sub->add_option("--suite", o.suite, "properties-HXK or transfer");
        if (name == "green" || name == "verify-example") {
            sub->add_option("--example", o.example, "gl23 or gl32");
            sub->add_option("--klein", o.klein, "which Klein four of S");
            sub->add_flag("--corrupt", o.corrupt, "use a non-idempotent element");
            sub->add_flag("--refine", o.refine, "continue with a local summand of the example module");
        }
    }
    CLI11_PARSE(app, argc, argv);
    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        return run(verb, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
