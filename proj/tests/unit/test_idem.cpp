#include <doctest.h>

#include <algorithm>

#include "fuscomp/idem.hpp"

using namespace fuscomp;

namespace {

FpMat unit_matrix(int n, int r, int c) {
    FpMat m(n, n, 0);
    m(r, c) = 1;
    return m;
}

FiniteAlgebra full_matrices(PrimeField k, int n) {
    std::vector<FpMat> g;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g.push_back(unit_matrix(n, r, c));
    return FiniteAlgebra(k, n, g);
}

FiniteAlgebra upper_triangular(PrimeField k, int n) {
    std::vector<FpMat> g;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) g.push_back(unit_matrix(n, r, c));
    return FiniteAlgebra(k, n, g);
}

// Every element of the radical is nilpotent, and it is a two-sided ideal.
void check_radical(const FiniteAlgebra& A) {
    const auto& R = A.radical();
    CHECK(A.is_two_sided_ideal(R));
    for (int i = 0; i < R.dim(); ++i) CHECK(A.is_nilpotent(R.vec(i)));
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("radical of upper triangular matrices is the strict part") {
    PrimeField k(2);
    for (int n = 2; n <= 4; ++n) {
        auto A = upper_triangular(k, n);
        CHECK(A.dim() == n * (n + 1) / 2);
        CHECK(A.radical().dim() == n * (n - 1) / 2);
        check_radical(A);
        auto d = decompose_identity(A);
        CHECK(d.idempotents.size() == static_cast<std::size_t>(n));
        CHECK(check_decomposition(A, *A.one(), d).empty());
    }
}

TEST_CASE("full matrix algebras are semisimple with conjugate primitive idempotents") {
    for (auto [p, n] : {std::pair{2u, 2}, std::pair{3u, 3}, std::pair{2u, 3}}) {
        PrimeField k(p);
        auto A = full_matrices(k, n);
        CHECK(A.radical().dim() == 0);
        CHECK_FALSE(is_local_idempotent(A, *A.one()));
        auto d = decompose_identity(A);
        REQUIRE(d.idempotents.size() == static_cast<std::size_t>(n));
        CHECK(check_decomposition(A, *A.one(), d).empty());
        for (std::size_t i = 1; i < d.idempotents.size(); ++i)
            CHECK(local_idempotents_conjugate(A, d.idempotents[0], d.idempotents[i]));
    }
}

TEST_CASE("group algebra of C2 in characteristic 2 is local") {
    PrimeField k(2);
    std::vector<std::vector<FpVec>> t = {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
    auto A = FiniteAlgebra::from_table(k, 2, t);
    CHECK(A.radical().dim() == 1);
    REQUIRE(A.one());
    CHECK(is_local_idempotent(A, *A.one()));
    CHECK(decompose_identity(A).idempotents.size() == 1);
}

TEST_CASE("product of two fields splits into non-conjugate idempotents") {
    PrimeField k(2);
    std::vector<std::vector<FpVec>> t = {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}};
    auto A = FiniteAlgebra::from_table(k, 2, t);
    CHECK(A.radical().dim() == 0);
    auto d = decompose_identity(A);
    REQUIRE(d.idempotents.size() == 2);
    CHECK_FALSE(local_idempotents_conjugate(A, d.idempotents[0], d.idempotents[1]));
    CHECK_FALSE(idempotents_conjugate(A, d.idempotents[0], d.idempotents[1]));
    CHECK(idempotent_dominated(A, d.idempotents[0], *A.one()));
    CHECK_FALSE(idempotent_dominated(A, *A.one(), d.idempotents[0]));
}

TEST_CASE("decomposition shape does not depend on the seed") {
    // M_2(F_2) x T_2(F_2) as block diagonal 4 x 4 matrices.
    PrimeField k(2);
    std::vector<FpMat> g;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) g.push_back(unit_matrix(4, r, c));
    for (auto [r, c] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) g.push_back(unit_matrix(4, r, c));
    FiniteAlgebra A(k, 4, g);
    CHECK(A.radical().dim() == 1);
    std::vector<int> ref;
    for (std::uint64_t seed : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{99}, kDefaultSeed}) {
        auto d = decompose_identity(A, seed);
        CHECK(d.idempotents.size() == 4);
        CHECK(check_decomposition(A, *A.one(), d).empty());
        if (ref.empty()) ref = sorted(d.corner_dims);
        CHECK(sorted(d.corner_dims) == ref);
    }
}

TEST_CASE("near isomorphisms") {
    PrimeField k(2);
    auto T = upper_triangular(k, 2);
    FpMat id = mat_identity(k, T.dim());
    CHECK(is_ring_morphism(T, T, id));
    CHECK(is_near_isomorphism(T, T, id));

    // The quotient by the radical has a kernel not annihilated by T.
    FpMat proj;
    auto Q = quotient_algebra(T, T.radical(), &proj);
    CHECK(Q.dim() == 2);
    CHECK(is_ring_morphism(T, Q, proj));
    CHECK_FALSE(is_near_isomorphism(T, Q, proj));

    // span{e, z} with e^2 = e and z annihilating everything: killing z is near.
    std::vector<std::vector<FpVec>> t = {{{1, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
    auto A = FiniteAlgebra::from_table(k, 2, t);
    auto B = FiniteAlgebra::from_table(k, 1, {{{1}}});
    FpMat f(1, 2, 0);
    f(0, 0) = 1;
    CHECK(is_near_isomorphism(A, B, f));
}

TEST_CASE("degenerate endomorphism correspondence returns b") {
    PrimeField k(2);
    auto T = upper_triangular(k, 2);
    CorrespondenceData d;
    d.A = &T;
    d.B = &T;
    d.C = T.whole();
    d.I = T.span({});
    d.J = T.span({});
    d.K = T.span({});
    d.f = mat_identity(k, T.dim());
    d.g = d.f;
    const FpVec b = {1, 0, 0};  // e_11
    auto c = near_iso_correspond(d, b);
    CHECK(c.a == b);
    CHECK(c.summands.size() == 1);

    // b inside K is rejected.
    d.I = T.whole();
    d.J = T.whole();
    d.K = T.whole();
    CHECK_THROWS(near_iso_correspond(d, b));

    // A non-idempotent g(b) violates condition (5).
    d.I = d.J = d.K = T.span({});
    d.g = mat_zero(k, T.dim(), T.dim());
    d.g(0, 0) = 1;
    d.g(1, 0) = 1;
    d.g(2, 0) = 1;
    CHECK_THROWS(near_iso_correspond(d, b));
}
