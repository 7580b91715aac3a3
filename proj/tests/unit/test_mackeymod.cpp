#include <doctest.h>

#include <random>
#include <set>

#include "fuscomp/green.hpp"
#include "fuscomp/identities.hpp"
#include "fuscomp/idem.hpp"
#include "fuscomp/io.hpp"
#include "fuscomp/mackeymod.hpp"

using namespace fuscomp;

namespace {

FusionPtr load(const std::string& name) { return load_fusion(data_path(name)).F; }

FpElement identity_at(const MackeyAlgebra& A, const PrimeField& k, int H) { return melem_basis(k, A.identity(H)); }

// Level dimensions of N induced from F_H(H) to F_S(S), by the Mackey formula
// over double cosets K x H.
std::vector<int> induced_dims(const FusionSystem& F, const MackeyModule& N, int H) {
    const Universe& U = F.U();
    const FiniteGroup& G = U.G();
    const Lattice& L = U.lat();
    std::vector<int> dim(L.size(), 0);
    for (int K : F.subgroups()) {
        if (!F.is_centric(K)) continue;
        std::set<int> seen;
        for (int x : U.elems(F.top())) {
            if (seen.count(x)) continue;
            for (int a : U.elems(K))
                for (int b : U.elems(H)) seen.insert(G.mul(G.mul(a, x), b));
            dim[K] += N.dim[L.meet(H, L.conj(G.inv(x), K))];
        }
    }
    return dim;
}

}  // namespace

TEST_CASE("cyclic modules satisfy the Mackey relations") {
    for (const char* name : {"d8_self.json", "f1_gl32.json"}) {
        auto F = load(name);
        auto A = std::make_shared<MackeyAlgebra>(F);
        PrimeField k(2);
        for (int H : F->centrics()) {
            auto M = cyclic_module(A, k, identity_at(*A, k, H));
            CHECK(validate_module(M).empty());
            CHECK(M.dim[H] > 0);
        }
    }
}

TEST_CASE("induction from a subgroup follows the Mackey formula") {
    auto F = load("d8_self.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    for (int H : F->centrics()) {
        auto sub = ctx.subgroup_algebra(H);
        auto N = cyclic_module(sub, k, identity_at(*sub, k, H));
        auto ind = induce_from_subgroup(N, ctx.algebra());
        CHECK(validate_module(ind).empty());
        const auto want = induced_dims(*F, N, H);
        for (int K : F->subgroups()) CHECK(ind.dim[K] == want[K]);
    }
}

TEST_CASE("the two induction constructions agree") {
    for (const char* name : {"d8_self.json", "f1_gl32.json"}) {
        auto F = load(name);
        MackeyContext ctx(F);
        PrimeField k(2);
        const int H = F->centrics().front();
        auto sub = ctx.subgroup_algebra(H);
        auto N = cyclic_module(sub, k, identity_at(*sub, k, H));
        auto a = induce_module(N, ctx.algebra());
        auto b = induce_from_subgroup(N, ctx.algebra());
        CHECK(a.total_dim() == b.total_dim());
        CHECK(modules_isomorphic(a, b));
    }
}

TEST_CASE("theta maps compose to the Burnside class of H") {
    auto F = load("f1_gl32.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    const int H = klein_fours(*F).front();
    auto M = cyclic_module(A, k, identity_at(*A, k, H));
    for (int K : F->centrics()) {
        auto t = theta_maps(ctx, M, K);
        CHECK(is_module_map(t.induced, M, t.down));
        CHECK(is_module_map(M, t.induced, t.up));
        CHECK(map_compose(k, t.down, t.up) == burnside_class_act(M, K, map_identity(M)));
    }
}

TEST_CASE("restriction and induction of zero is zero") {
    auto F = load("d8_self.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    auto Z = zero_module(ctx.algebra(), k);
    CHECK(Z.is_zero());
    const int H = F->centrics().front();
    CHECK(restrict_module(Z, ctx.subgroup_algebra(H)).is_zero());
    CHECK(induce_from_subgroup(restrict_module(Z, ctx.subgroup_algebra(H)), ctx.algebra()).is_zero());
}

TEST_CASE("transfer calculus holds on GL3(2)") {
    auto F = load("f1_gl32.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    auto e = example_idempotent(*A, k, klein_fours(*F).front());
    REQUIRE(e);
    auto M = cyclic_module(A, k, *e);
    for (const auto& it : verify_transfer_identities(ctx, M, 2, 5)) {
        INFO(it.name);
        CHECK(it.failures.empty());
        if (it.name != "averaging") CHECK(it.checked > 0);
    }
}

TEST_CASE("transfer calculus with averaging on D8 in S4") {
    auto F = load("d8_in_s4.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    // The Klein four normal in S4, so that N_F(H) = F.
    int H = -1;
    for (int V : klein_fours(*F))
        if (F->is_fully_normalized(V) && static_cast<int>(F->auts(V).size()) == 6) H = V;
    REQUIRE(H >= 0);
    auto M = cyclic_module(A, k, identity_at(*A, k, H));
    bool averaged = false;
    for (const auto& it : verify_transfer_identities(ctx, M, 2, 9)) {
        INFO(it.name);
        CHECK(it.failures.empty());
        if (it.name == "averaging") averaged = it.checked > 0;
    }
    CHECK(averaged);
}

TEST_CASE("relative projectivity: free modules and the top level") {
    auto F = load("d8_self.json");
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    for (int H : F->centrics()) {
        auto M = cyclic_module(A, k, identity_at(*A, k, H));
        // A projective cyclic module generated at H is H-projective.
        CHECK(relative_projectivity(ctx, M, {H}).projective);
        CHECK(relative_projectivity(ctx, M, {F->top()}).projective);
        auto d = defect_data(ctx, M);
        REQUIRE(d.vertex);
        CHECK(F->is_iso(*d.vertex, H));
    }
}
