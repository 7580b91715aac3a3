#include "fuscomp/green.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "fuscomp/error.hpp"

namespace fuscomp {

namespace {

// Endomorphisms of a restriction carry the restricted module's level shapes;
// transfers and conjugations on M expect M's shapes with zeros elsewhere.
LevelMap widen(const MackeyModule& M, const MackeyModule& sub, const LevelMap& f) {
    LevelMap out = map_zero(M, M);
    for (std::size_t K = 0; K < M.dim.size(); ++K)
        if (sub.dim[K] > 0) out[K] = f[K];
    return out;
}

LevelMap narrow(const MackeyModule& sub, const LevelMap& f) {
    LevelMap out = map_zero(sub, sub);
    for (std::size_t K = 0; K < sub.dim.size(); ++K)
        if (sub.dim[K] > 0) out[K] = f[K];
    return out;
}

// A subspace of flattened End(M) in the coordinates of end_algebra(M).
Subspace<PrimeField> to_algebra(const FiniteAlgebra& E, const MackeyModule& M, const Subspace<PrimeField>& flat) {
    std::vector<FpVec> v;
    for (int i = 0; i < flat.dim(); ++i) v.push_back(end_coords(E, M, map_unflatten(M, M, flat.vec(i))));
    return E.span(v);
}

Subspace<PrimeField> ideal(const MackeyContext& ctx, const FiniteAlgebra& E, const MackeyModule& M,
                           const std::vector<int>& family) {
    if (family.empty()) return E.span({});
    return to_algebra(E, M, transfer_image(ctx, M, family));
}

void classify(const MackeyContext& ctx, CorrespondenceResult& r, const std::vector<int>& companions,
              std::uint64_t seed) {
    const MackeyModule& D = r.decomposed;
    if (D.is_zero()) fail("green", "the module to decompose is zero");
    FiniteAlgebra E = end_algebra(D);
    auto dec = decompose_identity(E, seed);
    for (const auto& e : dec.idempotents) {
        CorrespondenceSummand s;
        s.idempotent = end_element(E, D, e);
        s.module = image_module(D, s.idempotent);
        s.defect = defect_data(ctx, s.module);
        s.companion_projective = relative_projectivity(ctx, s.module, companions).projective;
        r.summands.push_back(std::move(s));
    }
    int count = 0;
    for (std::size_t i = 0; i < r.summands.size(); ++i)
        if (r.summands[i].defect.vertex == r.H) {
            ++count;
            r.distinguished = static_cast<int>(i);
        }
    if (count != 1)
        fail("green", "expected exactly one summand with vertex H, found " + std::to_string(count));
    for (std::size_t i = 0; i < r.summands.size(); ++i)
        if (static_cast<int>(i) != r.distinguished && !r.summands[i].companion_projective)
            fail("green", "summand " + std::to_string(i) + " is not projective relative to the companion family");
}

void check_input(const MackeyContext& ctx, const MackeyModule& M, int H) {
    const FusionSystem& F = ctx.system();
    require(F.is_centric(H) && F.is_fully_normalized(H), "green", "H must be fully normalized and centric");
    require(is_indecomposable(M), "green", "module is decomposable");
    auto d = defect_data(ctx, M);
    require(d.vertex.has_value() && *d.vertex == H, "green", "module does not have vertex H");
}

}  // namespace

std::vector<int> family_Y(const FusionSystem& F, int H) {
    const int NS = F.normalizer_in_top(H);
    std::vector<int> out;
    for (int K : F.subgroups())
        if (K != H && F.U().lat().leq(K, NS) && F.is_centric(K) && F.subconjugate(K, H)) out.push_back(K);
    return out;
}

std::vector<int> family_X(const FusionSystem& F, int H) {
    std::vector<int> out;
    for (int K : family_Y(F, H))
        if (!F.is_iso(K, H)) out.push_back(K);
    return out;
}

CorrespondenceResult green_down(const MackeyContext& ctx, const MackeyModule& M, int H, std::uint64_t seed) {
    require(M.alg->system_ptr() == ctx.system_ptr(), "green", "module is not over the context's system");
    check_input(ctx, M, H);
    const FusionSystem& F = ctx.system();
    CorrespondenceResult r;
    r.input = M;
    r.direction = Direction::down;
    r.H = H;
    r.X = family_X(F, H);
    r.Y = family_Y(F, H);
    r.decomposed = restrict_module(M, ctx.normalizer_algebra(H));
    classify(ctx, r, r.Y, seed);

    // Endomorphism-ring side: A = End(M restricted), B = End(M), f the
    // transfer from the normalizer, g the restriction.
    const MackeyModule& MN = r.decomposed;
    FiniteAlgebra A = end_algebra(MN);
    FiniteAlgebra B = end_algebra(M);
    CorrespondenceData d;
    d.A = &A;
    d.B = &B;
    d.C = ideal(ctx, A, MN, {H});
    d.I = ideal(ctx, A, MN, r.X);
    d.J = ideal(ctx, A, MN, r.Y);
    d.K = ideal(ctx, B, M, r.X);
    d.f = FpMat(B.dim(), A.dim(), M.k.zero());
    d.g = FpMat(A.dim(), B.dim(), M.k.zero());
    for (int j = 0; j < A.dim(); ++j) {
        LevelMap x = widen(M, MN, end_element(A, MN, A.unit_vector(j)));
        auto c = end_coords(B, M, transfer_from_normalizer(ctx, M, H, x));
        for (int i = 0; i < B.dim(); ++i) d.f(i, j) = c[i];
    }
    for (int j = 0; j < B.dim(); ++j) {
        LevelMap y = narrow(MN, end_element(B, M, B.unit_vector(j)));
        auto c = end_coords(A, MN, y);
        for (int i = 0; i < A.dim(); ++i) d.g(i, j) = c[i];
    }
    auto b = B.one();
    require(b.has_value(), "green", "End(M) has no unit");
    Correspondent a = near_iso_correspond(d, *b, seed);
    const FpVec dist = end_coords(A, MN, r.summands[r.distinguished].idempotent);
    r.endomorphism_check = local_idempotents_conjugate(A, a.a, dist);
    return r;
}

CorrespondenceResult green_up(const MackeyContext& ctx, const MackeyModule& N, int H, std::uint64_t seed) {
    require(N.alg->system_ptr() == ctx.normalizer_algebra(H)->system_ptr(), "green",
            "module is not over the normalizer system of H");
    check_input(ctx, N, H);
    const FusionSystem& F = ctx.system();
    CorrespondenceResult r;
    r.input = N;
    r.direction = Direction::up;
    r.H = H;
    r.X = family_X(F, H);
    r.Y = family_Y(F, H);
    r.decomposed = induce_module(N, ctx.algebra());
    classify(ctx, r, r.X, seed);
    return r;
}

std::string correspondence_json(const CorrespondenceResult& r) {
    nlohmann::ordered_json j;
    j["direction"] = r.direction == Direction::down ? "down" : "up";
    j["H"] = r.H;
    j["X"] = r.X;
    j["Y"] = r.Y;
    j["input_dim"] = r.input.total_dim();
    j["decomposed_dim"] = r.decomposed.total_dim();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : r.summands) {
        nlohmann::ordered_json e;
        e["total_dim"] = s.module.total_dim();
        nlohmann::ordered_json levels = nlohmann::ordered_json::object();
        for (std::size_t K = 0; K < s.module.dim.size(); ++K)
            if (s.module.dim[K]) levels[std::to_string(K)] = s.module.dim[K];
        e["levels"] = levels;
        e["defect_set"] = s.defect.defect_set;
        e["defect_groups"] = s.defect.defect_groups;
        e["vertex"] = s.defect.vertex ? nlohmann::ordered_json(*s.defect.vertex) : nlohmann::ordered_json(nullptr);
        e["companion_projective"] = s.companion_projective;
        arr.push_back(e);
    }
    j["summands"] = arr;
    j["distinguished"] = r.distinguished;
    if (r.direction == Direction::down) j["endomorphism_check"] = r.endomorphism_check;
    return j.dump(1);
}

std::vector<int> klein_fours(const FusionSystem& F) {
    const Universe& U = F.U();
    std::vector<int> out;
    for (int a : F.subgroups()) {
        if (U.order(a) != 4 || !F.is_fully_normalized(a)) continue;
        bool elementary = true;
        for (int x : U.elems(a)) elementary = elementary && U.G().element_order(x) <= 2;
        if (elementary) out.push_back(a);
    }
    return out;
}

std::optional<FpElement> example_idempotent(const MackeyAlgebra& A, const PrimeField& k, int H) {
    const Universe& U = A.U();
    const Hom id = hom_identity(U, H);
    for (const auto& phi : A.system().auts(H)) {
        const Hom phi2 = hom_compose(U, phi, phi);
        if (phi2 == id || hom_compose(U, phi, phi2) != id) continue;
        FpElement e;
        melem_add_to(k, e, A.conjugation(phi), k.one());
        melem_add_to(k, e, A.conjugation(phi2), k.one());
        return e;
    }
    return std::nullopt;
}

bool ExampleReport::passed() const {
    return std::all_of(steps.begin(), steps.end(), [](const ExampleStep& s) { return s.pass; });
}

std::string ExampleReport::failed_step() const {
    for (const auto& s : steps)
        if (!s.pass) return s.step;
    return "";
}

std::string ExampleReport::json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
        nlohmann::ordered_json e;
        e["step"] = s.step;
        e["status"] = s.pass ? "pass" : "fail";
        nlohmann::ordered_json data = nlohmann::ordered_json::object();
        for (const auto& [key, v] : s.data) data[key] = v;
        e["data"] = data;
        arr.push_back(e);
    }
    return arr.dump(1);
}

std::string ExampleReport::text() const {
    std::ostringstream os;
    for (const auto& s : steps) {
        os << (s.pass ? "pass " : "FAIL ") << s.step;
        for (const auto& [key, v] : s.data) os << ' ' << key << '=' << v;
        os << '\n';
    }
    return os.str();
}

ExampleReport verify_example(const FusionInput& input, const ExampleOptions& opt) {
    ExampleReport rep;
    const FusionSystem& F = *input.F;
    const PrimeField k(2);
    auto step = [&](const std::string& name, bool pass, std::vector<std::pair<std::string, std::string>> data = {}) {
        rep.steps.push_back({name, pass, std::move(data)});
        return pass;
    };
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            return body();
        } catch (const std::exception& e) {
            return step(name, false, {{"error", e.what()}});
        }
    };
    if (!step("input", F.p() == 2 && input.ambient != nullptr,
              {{"p", std::to_string(F.p())}, {"ambient", input.ambient ? "yes" : "no"}}))
        return rep;

    const auto kleins = klein_fours(F);
    if (!step("klein_four", opt.klein >= 0 && opt.klein < static_cast<int>(kleins.size()),
              {{"count", std::to_string(kleins.size())}, {"choice", std::to_string(opt.klein)}}))
        return rep;
    const int H = kleins[opt.klein];
    MackeyContext ctx(input.F);

    bool ok = guarded("normalizer", [&] {
        auto NF = ctx.normalizer_algebra(H)->system_ptr();
        auto NG = ambient_normalizer(*input.ambient, F.U(), H);
        auto ref = fusion_from_group(*NG, F.universe(), F.normalizer_in_top(H), 2);
        const bool same = same_fusion(*NF, *ref);
        return step("normalizer", same && NG->order() == 24,
                    {{"H", std::to_string(H)},
                     {"ambient_normalizer_order", std::to_string(NG->order())},
                     {"hom_sets_equal", same ? "true" : "false"}});
    });
    if (!ok) return rep;

    const int nauts = static_cast<int>(F.auts(H).size());
    if (!step("automorphisms", nauts == 6, {{"aut_order", std::to_string(nauts)}})) return rep;

    MackeyModule M;
    ok = guarded("idempotent", [&] {
        auto A = ctx.algebra();
        auto e = example_idempotent(*A, k, H);
        if (!e) return step("idempotent", false, {{"error", "no automorphism of order 3"}});
        if (opt.corrupt_idempotent) e->erase(e->rbegin()->first);
        const bool idem = melem_mul(*A, k, *e, *e, true) == centric_project<PrimeField>(*A, *e);
        if (!idem) return step("idempotent", false, {{"idempotent", "false"}});
        M = cyclic_module(A, k, *e);
        const std::string v = validate_module(M);
        return step("idempotent", v.empty(),
                    {{"idempotent", "true"}, {"module_dim", std::to_string(M.total_dim())},
                     {"validation", v.empty() ? "ok" : v}});
    });
    if (!ok) return rep;

    if (opt.refine_idempotent) {
        ok = guarded("local_summand", [&] {
            FiniteAlgebra E = end_algebra(M);
            auto dec = decompose_identity(E, opt.seed);
            M = image_module(M, end_element(E, M, dec.idempotents.front()));
            return step("local_summand", true,
                        {{"summands", std::to_string(dec.idempotents.size())},
                         {"module_dim", std::to_string(M.total_dim())}});
        });
        if (!ok) return rep;
    }

    ok = guarded("indecomposable", [&] {
        FiniteAlgebra E = end_algebra(M);
        const bool indec = is_indecomposable(M);
        std::vector<std::pair<std::string, std::string>> data{{"end_dim", std::to_string(E.dim())},
                                                              {"radical_dim", std::to_string(E.radical().dim())}};
        if (!indec) data.emplace_back("local_summands", std::to_string(decompose_identity(E, opt.seed).idempotents.size()));
        return step("indecomposable", indec, data);
    });
    if (!ok) return rep;

    ok = guarded("vertex", [&] {
        auto d = defect_data(ctx, M);
        return step("vertex", d.vertex == H, {{"vertex", d.vertex ? std::to_string(*d.vertex) : "none"}});
    });
    if (!ok) return rep;

    CorrespondenceResult down;
    ok = guarded("green_down", [&] {
        down = green_down(ctx, M, H, opt.seed);
        const auto& N = down.summands[down.distinguished].module;
        const bool iso = modules_isomorphic(down.decomposed, N, opt.seed);
        return step("green_down", down.Y.empty() && down.summands.size() == 1 && iso && down.endomorphism_check,
                    {{"Y_size", std::to_string(down.Y.size())},
                     {"summands", std::to_string(down.summands.size())},
                     {"restriction_isomorphic", iso ? "true" : "false"},
                     {"endomorphism_check", down.endomorphism_check ? "true" : "false"}});
    });
    if (!ok) return rep;

    guarded("green_up", [&] {
        auto up = green_up(ctx, down.summands[down.distinguished].module, H, opt.seed);
        const bool iso = modules_isomorphic(up.summands[up.distinguished].module, M, opt.seed);
        return step("green_up", iso,
                    {{"summands", std::to_string(up.summands.size())},
                     {"induced_dim", std::to_string(up.decomposed.total_dim())},
                     {"round_trip_isomorphic", iso ? "true" : "false"}});
    });
    return rep;
}

}  // namespace fuscomp
