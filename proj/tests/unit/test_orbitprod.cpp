#include <doctest.h>

#include "fuscomp/io.hpp"
#include "fuscomp/orbitprod.hpp"

using namespace fuscomp;

namespace {

FusionPtr load(const std::string& name) { return load_fusion(data_path(name)).F; }

// Klein fours of the top group, sorted by id.
std::vector<int> klein_fours(const FusionSystem& F) {
    std::vector<int> out;
    const Lattice& L = F.U().lat();
    for (int a : F.subgroups()) {
        if (L.order(a) != 4) continue;
        bool elementary = true;
        for (int x : F.U().elems(a)) elementary = elementary && F.U().G().element_order(x) <= 2;
        if (elementary) out.push_back(a);
    }
    return out;
}

// Brute-force product: all pairs, filtered by maximality under the full
// preorder, then reduced modulo H-conjugation.
std::vector<ProductPair> brute_product(const FusionSystem& F, int H, int K) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    std::vector<ProductPair> all;
    for (int A : F.subgroups())
        if (L.leq(A, H) && F.is_centric(A))
            for (const Hom& f : F.hom_set(A, K)) all.push_back({A, f});
    auto below = [&](const ProductPair& a, const ProductPair& b) {
        // a <= b : exists h in H with A^h <= B and phi_a c_h = phi_b restricted, mod Inn(K)
        for (int h : U.elems(H)) {
            int Ah = L.conj(U.G().inv(h), a.A);
            if (!L.leq(Ah, b.A)) continue;
            Hom lhs = hom_compose(U, a.phi, hom_conj(U, h, Ah));
            if (equal_mod_inner(U, lhs, hom_restrict(U, b.phi, Ah), K)) return true;
        }
        return false;
    };
    std::vector<ProductPair> maximal;
    for (const auto& a : all) {
        bool top = true;
        for (const auto& b : all)
            if (b.A != a.A && L.order(b.A) > L.order(a.A) && below(a, b)) { top = false; break; }
        if (top) maximal.push_back(a);
    }
    auto canon = canonical_multiset(U, maximal, H, K);
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    return canon;
}

}  // namespace

TEST_CASE("product of a normal Klein four with itself in D8") {
    auto F = load("d8_self.json");
    auto V = klein_fours(*F);
    REQUIRE(V.size() == 2);
    auto P = product_pairs(*F, V[0], V[0]);
    CHECK(P.pairs.size() == 2);
    for (const auto& p : P.pairs) CHECK(p.A == V[0]);
    CHECK(check_universal_property(*F, P).empty());
}

TEST_CASE("product with the whole group in its own fusion system") {
    auto F = load("d8_self.json");
    const int S = F->top();
    auto P = product_pairs(*F, S, S);
    REQUIRE(P.pairs.size() == 1);
    CHECK(P.pairs[0].A == S);
}

TEST_CASE("product agrees with brute force") {
    for (const char* name : {"d8_self.json", "d8_in_s4.json", "f1_gl32.json", "f1_gl23.json"}) {
        auto F = load(name);
        for (int H : F->centrics())
            for (int K : F->centrics())
                CHECK(canonical_multiset(F->U(), product_pairs(*F, H, K).pairs, H, K) == brute_product(*F, H, K));
    }
}

TEST_CASE("pullback of a normal Klein four") {
    auto F = load("d8_self.json");
    auto V = klein_fours(*F);
    auto pb = pullback(*F, V[0], V[0], F->top());
    CHECK(pb.size() == 2);
    for (const auto& s : pb) CHECK(s.D == V[0]);
    CHECK(pullback(*F, F->top(), F->top(), F->top()).size() == 1);
}

TEST_CASE("product identities on saturated systems") {
    for (const char* name : {"d8_self.json", "d8_in_s4.json", "f1_gl32.json"}) {
        auto F = load(name);
        auto FS = fusion_of_subgroup(F->universe(), F->top(), F->p());
        auto rep = verify_product_identities(*F, FS.get());
        INFO(name);
        CHECK(rep.checked > 0);
        for (const auto& f : rep.failures) FAIL_CHECK(f);
    }
}

TEST_CASE("normalizer decomposition of products in GL3(2)") {
    auto F = load("f1_gl32.json");
    auto V = klein_fours(*F);
    REQUIRE(V.size() == 2);
    for (int H : V) {
        REQUIRE(F->is_fully_normalized(H));
        auto NF = normalizer_system(*F, H);
        for (int K : F->centrics()) {
            auto blocks = decompose_product(*F, *NF, H, K);
            std::vector<ProductPair> all;
            for (const auto& b : blocks) all.insert(all.end(), b.pairs.begin(), b.pairs.end());
            CHECK(same_pairs(F->U(), all, product_pairs(*F, H, K).pairs, H, K));
        }
    }
}

TEST_CASE("normalizer data of the identity on H") {
    auto F = load("f1_gl32.json");
    int H = klein_fours(*F)[0];
    auto NF = normalizer_system(*F, H);
    auto d = nf_normalizer_data(*F, *NF, hom_identity(F->U(), H), H);
    CHECK(d.after == H);
    CHECK(d.A_top == H);
}
