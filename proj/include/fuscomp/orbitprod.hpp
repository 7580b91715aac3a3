// Products and pullbacks in the additive completion of the centric orbit
// category, and the decomposition of products through a normalizer subsystem.
#pragma once

#include <string>
#include <vector>

#include "fuscomp/fusion.hpp"

namespace fuscomp {

// (A, phi-bar) with A <= H centric and phi : A -> K, phi in canonical form
// modulo Inn(K).
struct ProductPair {
    int A = -1;
    Hom phi;

    bool operator==(const ProductPair& o) const { return A == o.A && phi == o.phi; }
    bool operator<(const ProductPair& o) const { return A != o.A ? A < o.A : phi < o.phi; }
};

struct ProductSet {
    int H = -1, K = -1;
    std::vector<ProductPair> pairs;
};

// phi reduced modulo post-conjugation by K.
Hom mod_inner(const Universe& U, const Hom& phi, int K);
bool equal_mod_inner(const Universe& U, const Hom& f, const Hom& g, int K);

// Canonical member of the class {(A^h, phi c_h) : h in H} of a pair.
ProductPair canonical_pair(const Universe& U, const ProductPair& p, int H, int K);
// Sorted canonical forms; two families are equal modulo the pair relation
// exactly when these lists agree.
std::vector<ProductPair> canonical_multiset(const Universe& U, const std::vector<ProductPair>& v, int H, int K);
bool same_pairs(const Universe& U, const std::vector<ProductPair>& a, const std::vector<ProductPair>& b, int H,
                int K);

// All maximal pairs, one per class, in canonical form.
ProductSet product_pairs(const FusionSystem& F, int H, int K);

// Exhaustive universal-property check; returns an empty string on success,
// otherwise a description of the first violation.
std::string check_universal_property(const FusionSystem& F, const ProductSet& P);

// Unique (pair index, h) with hE <= B_pair and phi_pair c_h = theta mod K,
// for theta : E -> K with E <= H centric. h is returned through h_out.
int factor_through(const FusionSystem& F, const ProductSet& P, int E, const Hom& theta, int& h_out);

struct PullbackSummand {
    int x = 0;      // double coset representative in J
    int D = -1;     // H^x meet K
    Hom to_H;       // c_x : D -> H
    Hom to_K;       // inclusion D -> K
};
std::vector<PullbackSummand> pullback(const FusionSystem& F, int H, int K, int J);

// The seven rewrite identities for products. Each returns the right-hand
// side; the caller compares it with the matching left-hand side.
std::vector<ProductPair> rewrite_swap(const FusionSystem& F, const ProductSet& HK);
std::vector<ProductPair> rewrite_self(const FusionSystem& FS, int H, int K);  // FS = F_S(S)
std::vector<ProductPair> rewrite_iso_right(const FusionSystem& F, const ProductSet& HK, const Hom& psi);
std::vector<ProductPair> rewrite_iso_left(const FusionSystem& F, const ProductSet& HK, const Hom& psi);
std::vector<ProductPair> rewrite_pullback_right(const FusionSystem& F, const ProductSet& HK, int J);
std::vector<ProductPair> rewrite_pullback_left(const FusionSystem& F, const ProductSet& HK, int J);
// Both sides of the triple identity, as families of J-to-H pairs.
struct TripleSides {
    std::vector<ProductPair> lhs, rhs;
};
TripleSides rewrite_triple(const FusionSystem& F, int H, int K, int J);

// Runs every identity on every admissible centric tuple; each failure is
// reported as one line. fs may be null when F is not of the form F_S(S).
struct IdentityReport {
    int checked = 0;
    std::vector<std::string> failures;
};
IdentityReport verify_product_identities(const FusionSystem& F, const FusionSystem* FS);

// Data attached to phi : A -> K with A <= N_S(H), relative to N_F = N_F(H).
struct NfNormalizerData {
    Hom phi;
    int after = -1;   // x in N_K(phi A) with phi^-1 c_x phi in Aut_{N_F}(A)
    int A_top = -1;   // fully N_F-normalized A'
    Hom theta;        // N_F-isomorphism A' -> A
    Hom top;          // phi o theta
    int before = -1;  // y in N_{N_S}(A') with c_y in Aut_after(phi A)^{top}
};
// phi is a map into K.
NfNormalizerData nf_normalizer_data(const FusionSystem& F, const FusionSystem& NF, const Hom& phi, int K);

// Representatives of [H x K] modulo N_F-isomorphism, each with A fully
// N_F-normalized and phi equal to its own top.
std::vector<ProductPair> nf_product_pairs(const FusionSystem& F, const FusionSystem& NF, int H, int K);

// An extension of phi to N_phi^{N_F}; unique modulo Inn(K).
Hom extend_to_normalizer(const FusionSystem& F, const FusionSystem& NF, const ProductPair& pair, int K);

struct ProductBlock {
    ProductPair base;      // element of [N_F x K]
    int N = -1;            // N_phi^{N_F}
    Hom ext;               // extension of base.phi to N
    std::vector<ProductPair> pairs;  // (B, ext o psi) for (B, psi) in [H x_{N_F} N]
};
std::vector<ProductBlock> decompose_product(const FusionSystem& F, const FusionSystem& NF, int H, int K);

}  // namespace fuscomp
