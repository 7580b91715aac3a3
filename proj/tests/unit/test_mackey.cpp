#include <doctest.h>

#include <random>

#include "fuscomp/io.hpp"
#include "fuscomp/mackey.hpp"
#include "oracle/biset.hpp"

using namespace fuscomp;

namespace {

FusionPtr load(const std::string& name) { return load_fusion(data_path(name)).F; }

}  // namespace

TEST_CASE("basis of the Mackey algebra of C2") {
    auto F = load("c2_self.json");
    MackeyAlgebra M(F);
    CHECK(M.size() == 5);
    CHECK(oracle::basis_count(*F) == 5);
}

TEST_CASE("basis counts match the biset oracle") {
    for (const char* name : {"d8_self.json", "d8_in_s4.json", "f1_gl32.json"}) {
        auto F = load(name);
        MackeyAlgebra M(F);
        CHECK(M.size() == oracle::basis_count(*F));
    }
}

TEST_CASE("products match biset composition on C2 and D8") {
    for (const char* name : {"c2_self.json", "d8_self.json"}) {
        auto F = load(name);
        MackeyAlgebra M(F);
        int n = M.size();
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) CHECK(M.product(x, y) == oracle::compose(M, x, y));
    }
}

TEST_CASE("random products match biset composition on GL3(2)") {
    auto F = load("f1_gl32.json");
    MackeyAlgebra M(F);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, M.size() - 1);
    int done = 0;
    while (done < 150) {
        int x = pick(rng), y = pick(rng);
        if (M.key(x).A != M.key(y).B) continue;
        CHECK(M.product(x, y) == oracle::compose(M, x, y));
        ++done;
    }
}

TEST_CASE("associativity and unit on D8") {
    auto F = load("d8_self.json");
    MackeyAlgebra M(F);
    PrimeField k(2);
    auto one = melem_unit(M, k, false);
    for (int x = 0; x < M.size(); ++x) {
        auto ex = melem_basis(k, x);
        CHECK(melem_mul(M, k, one, ex, false) == ex);
        CHECK(melem_mul(M, k, ex, one, false) == ex);
    }
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, M.size() - 1);
    for (int t = 0; t < 300; ++t) {
        auto a = melem_basis(k, pick(rng)), b = melem_basis(k, pick(rng)), c = melem_basis(k, pick(rng));
        CHECK(melem_mul(M, k, melem_mul(M, k, a, b, false), c, false) ==
              melem_mul(M, k, a, melem_mul(M, k, b, c, false), false));
    }
}

TEST_CASE("idempotents and orthogonality") {
    auto F = load("d8_self.json");
    MackeyAlgebra M(F);
    for (int H : F->subgroups())
        for (int K : F->subgroups()) {
            const auto& p = M.product(M.identity(H), M.identity(K));
            if (H == K) CHECK(p == std::vector<int>{M.identity(H)});
            else CHECK(p.empty());
        }
}

TEST_CASE("restriction after induction of a normal Klein four in D8") {
    auto F = load("d8_self.json");
    MackeyAlgebra M(F);
    int V = -1;
    for (int a : F->subgroups())
        if (F->U().order(a) == 4 && F->is_centric(a) && F->U().lat().normalizer(a) == F->top()) {
            bool cyc = false;
            for (int x : F->U().elems(a)) cyc = cyc || F->U().G().element_order(x) == 4;
            if (!cyc) { V = a; break; }
        }
    REQUIRE(V >= 0);
    const auto& p = M.product(M.restriction(V, F->top()), M.induction(V, F->top()));
    REQUIRE(p.size() == 2);
    CHECK(p[0] != p[1]);
    for (int t : p) CHECK(M.key(t).A == V);
}

TEST_CASE("representatives of an orbit morphism give one element") {
    auto F = load("f1_gl32.json");
    MackeyAlgebra M(F);
    const Universe& U = F->U();
    for (int H : F->centrics())
        for (int K : F->centrics())
            for (const Hom& f : F->hom_set(H, K)) {
                int i = M.find(H, K, f);
                for (int k : U.elems(K)) CHECK(M.find(H, K, hom_compose(U, hom_conj(U, k, K), f)) == i);
            }
}

TEST_CASE("Burnside ring of D8") {
    auto F = load("d8_self.json");
    BurnsideRing B(F);
    PrimeField k(2);
    int s = B.index_of(F->top());
    for (int i = 0; i < B.size(); ++i) {
        std::vector<int> e(B.size(), 0);
        e[i] = 1;
        CHECK(B.product(s, i) == e);
    }
    auto u = burnside_unit(B, k);
    REQUIRE(u);
    for (int i = 0; i < B.size(); ++i) CHECK(u->unit[i] == (i == s ? 1u : 0u));
}

TEST_CASE("Burnside ring and Gamma on GL3(2)") {
    auto F = load("f1_gl32.json");
    BurnsideRing B(F);
    MackeyAlgebra M(F);
    PrimeField k(2);
    RationalField q;
    for (int i = 0; i < B.size(); ++i)
        for (int j = 0; j < B.size(); ++j) CHECK(B.product(i, j) == B.product(j, i));
    auto u2 = burnside_unit(B, k);
    auto uq = burnside_unit(B, q);
    REQUIRE(u2);
    REQUIRE(uq);
    std::vector<mpq_class> S(B.size(), 0);
    S[B.index_of(F->top())] = 1;
    CHECK(burnside_mul(B, q, S, uq->S_inverse) == uq->unit);
    CHECK(gamma_of(M, B, k, u2->unit) == melem_unit(M, k, true));
    for (int H : F->centrics()) {
        auto g = gamma(M, k, H);
        for (int x : M.centric_basis()) {
            auto ex = melem_basis(k, x);
            CHECK(melem_mul(M, k, g, ex, true) == melem_mul(M, k, ex, g, true));
        }
        for (int K : F->centrics()) {
            MackeyElement<PrimeField> rhs;
            for (const auto& pr : product_pairs(*F, K, H).pairs) rhs = melem_add(k, rhs, gamma(M, k, pr.A));
            CHECK(melem_mul(M, k, gamma(M, k, K), g, true) == rhs);
        }
    }
}
