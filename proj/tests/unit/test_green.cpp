#include <doctest.h>

#include <algorithm>

#include "fuscomp/green.hpp"
#include "fuscomp/idem.hpp"
#include "fuscomp/io.hpp"

using namespace fuscomp;

namespace {

FusionInput load(const std::string& name) { return load_fusion(data_path(name)); }

ExampleReport run(const char* name, bool refine, bool corrupt = false, int klein = 0) {
    ExampleOptions o;
    o.refine_idempotent = refine;
    o.corrupt_idempotent = corrupt;
    o.klein = klein;
    return verify_example(load(name), o);
}

MackeyModule first_local_summand(const MackeyModule& M) {
    auto E = end_algebra(M);
    auto d = decompose_identity(E);
    return image_module(M, end_element(E, M, d.idempotents.front()));
}

}  // namespace

TEST_CASE("families Y and X") {
    for (const char* name : {"d8_self.json", "d8_in_s4.json", "f1_gl32.json"}) {
        auto F = load(name).F;
        for (int H : F->centrics()) {
            auto Y = family_Y(*F, H);
            auto X = family_X(*F, H);
            for (int K : X) CHECK(std::find(Y.begin(), Y.end(), K) != Y.end());
            for (int K : Y) {
                CHECK(F->is_centric(K));
                CHECK(F->subconjugate(K, H));
                CHECK(K != H);
            }
            for (int K : X) CHECK_FALSE(F->is_iso(K, H));
        }
    }
}

TEST_CASE("example pipeline on GL3(2)") {
    auto plain = run("f1_gl32.json", false);
    CHECK_FALSE(plain.passed());
    CHECK(plain.failed_step() == "indecomposable");

    for (int klein : {0, 1}) {
        auto refined = run("f1_gl32.json", true, false, klein);
        INFO(refined.text());
        CHECK(refined.passed());
    }

    auto bad = run("f1_gl32.json", false, true);
    CHECK(bad.failed_step() == "idempotent");
}

TEST_CASE("example pipeline stops at the normalizer on GL2(3)") {
    auto r = run("f1_gl23.json", true);
    CHECK(r.failed_step() == "normalizer");
}

TEST_CASE("example report serializes") {
    auto r = run("f1_gl32.json", true);
    CHECK(r.json().find("\"green_up\"") != std::string::npos);
    CHECK(r.text().find("green_down") != std::string::npos);
}

TEST_CASE("Green correspondence at H = S is the identity") {
    auto F = load("d8_self.json").F;
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    const int S = F->top();
    auto M = first_local_summand(cyclic_module(A, k, melem_basis(k, A->identity(S))));
    REQUIRE(is_indecomposable(M));
    auto down = green_down(ctx, M, S);
    REQUIRE(down.distinguished >= 0);
    CHECK(down.summands.size() == 1);
    CHECK(modules_isomorphic(down.summands[down.distinguished].module, restrict_module(M, ctx.normalizer_algebra(S))));
    CHECK(down.endomorphism_check);
    auto up = green_up(ctx, down.summands[down.distinguished].module, S);
    REQUIRE(up.distinguished >= 0);
    CHECK(modules_isomorphic(up.summands[up.distinguished].module, M));
}

TEST_CASE("Green correspondence round trip on GL3(2)") {
    auto F = load("f1_gl32.json").F;
    MackeyContext ctx(F);
    PrimeField k(2);
    auto A = ctx.algebra();
    const int H = klein_fours(*F).front();
    auto e = example_idempotent(*A, k, H);
    REQUIRE(e);
    auto M = first_local_summand(cyclic_module(A, k, *e));
    REQUIRE(is_indecomposable(M));
    auto down = green_down(ctx, M, H);
    REQUIRE(down.distinguished >= 0);
    CHECK(down.endomorphism_check);
    const auto& N = down.summands[down.distinguished].module;
    auto up = green_up(ctx, N, H);
    REQUIRE(up.distinguished >= 0);
    CHECK(modules_isomorphic(up.summands[up.distinguished].module, M));
    // Companion summands are projective relative to the smaller family.
    for (int i = 0; i < static_cast<int>(down.summands.size()); ++i)
        if (i != down.distinguished) CHECK(down.summands[i].companion_projective);
}
