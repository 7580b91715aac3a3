#include <doctest.h>
#include <set>

#include "fuscomp/fusion.hpp"
#include "fuscomp/grp.hpp"

using namespace fuscomp;

namespace {

std::shared_ptr<const FiniteGroup> d8() {
    return std::make_shared<FiniteGroup>(
        "D8", 4, std::vector<Perm>{perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 3}})});
}

}  // namespace

TEST_CASE("d8 enumeration and lattice") {
    auto G = d8();
    CHECK(G->order() == 8);
    CHECK(G->perm(0) == Perm{0, 1, 2, 3});
    Lattice L(G);
    CHECK(L.size() == 10);
    CHECK(L.num_classes() == 8);
    CHECK(L.order(L.whole()) == 8);
    CHECK(L.order(L.trivial()) == 1);
    for (int a = 0; a < L.size(); ++a) {
        CHECK(L.leq(a, L.normalizer(a)));
        CHECK(L.leq(L.centralizer(a), L.normalizer(a)));
    }
}

TEST_CASE("bad generator is rejected") {
    CHECK_THROWS(FiniteGroup("bad", 3, {Perm{0, 0, 1}}));
    CHECK_THROWS(perm_from_cycles(3, {{1, 4}}));
}

TEST_CASE("double cosets partition the group") {
    auto G = std::make_shared<FiniteGroup>(
        "S4", 4, std::vector<Perm>{perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 2}})});
    Lattice L(G);
    // Any two subgroups: sum of |K x H| over reps equals |G|.
    for (int a = 0; a < L.size(); a += 3)
        for (int b = 0; b < L.size(); b += 5) {
            const auto& K = L.sub(a).elems;
            const auto& H = L.sub(b).elems;
            auto reps = double_coset_reps(*G, K, H);
            int total = 0;
            for (int x : reps) {
                std::set<int> dc;
                for (int k : K)
                    for (int h : H) dc.insert(G->mul(G->mul(k, x), h));
                total += static_cast<int>(dc.size());
            }
            CHECK(total == G->order());
        }
}

TEST_CASE("sylow subgroup of S4") {
    auto G = std::make_shared<FiniteGroup>(
        "S4", 4, std::vector<Perm>{perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 2}})});
    CHECK(sylow_subgroup(*G, 2).size() == 8);
    CHECK(sylow_subgroup(*G, 3).size() == 3);
}

TEST_CASE("fusion system of D8 on itself") {
    auto F = fusion_from_group(*d8(), {perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 3}})}, 2);
    CHECK(F->centrics().size() == 4);
    CHECK(is_saturated(*F));
    CHECK(F->auts(F->top()).size() == 4);
}

TEST_CASE("fusion of D8 inside S4") {
    auto S4 = std::make_shared<FiniteGroup>(
        "S4", 4, std::vector<Perm>{perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 2}})});
    auto F = fusion_from_group(*S4, {perm_from_cycles(4, {{1, 2, 3, 4}}), perm_from_cycles(4, {{1, 3}})}, 2);
    CHECK(is_saturated(*F));
    // The normal Klein four of S4 picks up an automorphism of order 3.
    int v = -1;
    for (int c : F->centrics())
        if (F->U().order(c) == 4 && F->auts(c).size() == 6) v = c;
    CHECK(v >= 0);
}

TEST_CASE("C4 with inversion as generated is saturated; extra fusion breaks it") {
    auto C4 = std::make_shared<FiniteGroup>("C4", 4, std::vector<Perm>{perm_from_cycles(4, {{1, 2, 3, 4}})});
    auto U = Universe::make(C4);
    int g = C4->find(perm_from_cycles(4, {{1, 2, 3, 4}}));
    GeneratorHom inv{{g}, {C4->inv(g)}};
    auto F = abstract_fusion(U, 2, {inv}, ClosureMode::Generate);
    CHECK(F->auts(F->top()).size() == 2);
    // Aut(C4) is a 2-group, so Aut_S(S)=1 is not Sylow in Aut_F(S).
    CHECK_FALSE(is_saturated(*F));
}
