#include "fuscomp/orbitprod.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "fuscomp/error.hpp"

namespace fuscomp {

namespace {

// c_h restricted to A^h, mapping onto A.
Hom conj_onto(const Universe& U, int h, int A) {
    return hom_conj(U, h, U.lat().conj(U.G().inv(h), A));
}

std::string pair_str(const ProductPair& p) {
    std::string s = "(" + std::to_string(p.A) + ",[";
    for (std::size_t i = 0; i < p.phi.table.size(); ++i) s += (i ? " " : "") + std::to_string(p.phi.table[i]);
    return s + "])";
}

std::string list_str(const std::vector<ProductPair>& v) {
    std::string s;
    for (const auto& p : v) s += pair_str(p);
    return s;
}

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Hom mod_inner(const Universe& U, const Hom& phi, int K) { return orbit_canonical(U, phi, K); }

bool equal_mod_inner(const Universe& U, const Hom& f, const Hom& g, int K) {
    return f.src == g.src && mod_inner(U, f, K).table == mod_inner(U, g, K).table;
}

ProductPair canonical_pair(const Universe& U, const ProductPair& p, int H, int K) {
    ProductPair best;
    bool have = false;
    for (int h : U.elems(H)) {
        Hom c = conj_onto(U, h, p.A);
        ProductPair q{c.src, mod_inner(U, hom_compose(U, p.phi, c), K)};
        if (!have || q < best) {
            best = std::move(q);
            have = true;
        }
    }
    return best;
}

std::vector<ProductPair> canonical_multiset(const Universe& U, const std::vector<ProductPair>& v, int H, int K) {
    std::vector<ProductPair> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(canonical_pair(U, p, H, K));
    std::sort(out.begin(), out.end());
    return out;
}

bool same_pairs(const Universe& U, const std::vector<ProductPair>& a, const std::vector<ProductPair>& b, int H,
                int K) {
    return a.size() == b.size() && canonical_multiset(U, a, H, K) == canonical_multiset(U, b, H, K);
}

ProductSet product_pairs(const FusionSystem& F, int H, int K) {
    require(F.in_system(H) && F.in_system(K), "orbitprod", "product of subgroups outside the fusion system");
    require(F.is_centric(H) && F.is_centric(K), "orbitprod", "product of non-centric subgroups");
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    std::set<ProductPair> found;
    for (int A : F.subgroups()) {
        if (!L.leq(A, H) || !F.is_centric(A)) continue;
        // A pair is maximal iff it does not extend to any B >= A of index p.
        std::vector<int> covers;
        for (int B : F.subgroups())
            if (L.leq(A, B) && L.leq(B, H) && L.order(B) == F.p() * L.order(A)) covers.push_back(B);
        std::set<std::vector<int>> extendable;
        for (int B : covers)
            for (const Hom& psi : F.hom_set(B, K)) extendable.insert(mod_inner(U, hom_restrict(U, psi, A), K).table);
        for (const Hom& phi : F.orbit_hom_set(A, K))
            if (!extendable.count(phi.table)) found.insert(canonical_pair(U, ProductPair{A, phi}, H, K));
    }
    return ProductSet{H, K, std::vector<ProductPair>(found.begin(), found.end())};
}

std::string check_universal_property(const FusionSystem& F, const ProductSet& P) {
    const Universe& U = F.U();
    for (int C : F.centrics()) {
        std::vector<std::vector<Hom>> gammas;
        for (const auto& pr : P.pairs) gammas.push_back(F.orbit_hom_set(C, pr.A));
        for (const Hom& alpha : F.orbit_hom_set(C, P.H))
            for (const Hom& beta : F.orbit_hom_set(C, P.K)) {
                int count = 0;
                for (std::size_t i = 0; i < P.pairs.size(); ++i)
                    for (const Hom& g : gammas[i])
                        if (mod_inner(U, g, P.H).table == alpha.table &&
                            mod_inner(U, hom_compose(U, P.pairs[i].phi, g), P.K).table == beta.table)
                            ++count;
                if (count != 1)
                    return "subgroup " + std::to_string(C) + " admits " + std::to_string(count) +
                           " factorizations of a pair of maps into " + std::to_string(P.H) + " and " +
                           std::to_string(P.K);
            }
    }
    return {};
}

int factor_through(const FusionSystem& F, const ProductSet& P, int E, const Hom& theta, int& h_out) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    const auto target = mod_inner(U, theta, P.K).table;
    for (std::size_t i = 0; i < P.pairs.size(); ++i) {
        const auto& pr = P.pairs[i];
        for (int h : U.elems(P.H)) {
            if (!L.leq(L.conj(h, E), pr.A)) continue;
            if (mod_inner(U, hom_compose(U, pr.phi, hom_conj(U, h, E)), P.K).table == target) {
                h_out = h;
                return static_cast<int>(i);
            }
        }
    }
    fail("orbitprod", "a map does not factor through the product of " + std::to_string(P.H) + " and " +
                          std::to_string(P.K));
}

std::vector<PullbackSummand> pullback(const FusionSystem& F, int H, int K, int J) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    require(L.leq(H, J) && L.leq(K, J), "orbitprod", "pullback over a subgroup not containing both factors");
    std::vector<PullbackSummand> out;
    for (int x : double_coset_reps_in(U.G(), U.elems(J), U.elems(H), U.elems(K))) {
        int D = L.meet(L.conj(U.G().inv(x), H), K);
        if (!F.is_centric(D)) continue;
        out.push_back(PullbackSummand{x, D, hom_conj(U, x, D), hom_identity(U, D)});
    }
    return out;
}

std::vector<ProductPair> rewrite_swap(const FusionSystem& F, const ProductSet& HK) {
    const Universe& U = F.U();
    std::vector<ProductPair> out;
    for (const auto& pr : HK.pairs) out.push_back({pr.phi.img, mod_inner(U, hom_inverse(U, pr.phi), HK.H)});
    return out;
}

std::vector<ProductPair> rewrite_self(const FusionSystem& FS, int H, int K) {
    const Universe& U = FS.U();
    const Lattice& L = U.lat();
    std::vector<ProductPair> out;
    for (int x : double_coset_reps_in(U.G(), U.elems(FS.top()), U.elems(K), U.elems(H))) {
        int D = L.meet(L.conj(U.G().inv(x), K), H);
        if (FS.is_centric(D)) out.push_back({D, mod_inner(U, hom_conj(U, x, D), K)});
    }
    return out;
}

std::vector<ProductPair> rewrite_iso_right(const FusionSystem& F, const ProductSet& HK, const Hom& psi) {
    const Universe& U = F.U();
    require(psi.src == HK.K, "orbitprod", "isomorphism must start at the right factor");
    std::vector<ProductPair> out;
    for (const auto& pr : HK.pairs) out.push_back({pr.A, mod_inner(U, hom_compose(U, psi, pr.phi), psi.img)});
    return out;
}

std::vector<ProductPair> rewrite_iso_left(const FusionSystem& F, const ProductSet& HK, const Hom& psi) {
    const Universe& U = F.U();
    require(psi.src == HK.H, "orbitprod", "isomorphism must start at the left factor");
    std::vector<ProductPair> out;
    for (const auto& pr : HK.pairs) {
        Hom inv = hom_inverse(U, hom_restrict(U, psi, pr.A));
        out.push_back({inv.src, mod_inner(U, hom_compose(U, pr.phi, inv), HK.K)});
    }
    return out;
}

std::vector<ProductPair> rewrite_pullback_right(const FusionSystem& F, const ProductSet& HK, int J) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    require(L.leq(J, HK.K), "orbitprod", "pullback rewrite needs J inside the right factor");
    std::vector<ProductPair> out;
    for (const auto& pr : HK.pairs) {
        const int img = pr.phi.img;
        Hom inv = hom_inverse(U, pr.phi);
        for (int x : double_coset_reps_in(U.G(), U.elems(HK.K), U.elems(J), U.elems(img))) {
            int D = L.meet(L.conj(U.G().inv(x), J), img);
            if (!F.is_centric(D)) continue;
            int B = hom_image(U, inv, D);
            Hom f = hom_compose(U, hom_conj(U, x, D), hom_restrict(U, pr.phi, B));
            out.push_back({B, mod_inner(U, f, J)});
        }
    }
    return out;
}

std::vector<ProductPair> rewrite_pullback_left(const FusionSystem& F, const ProductSet& HK, int J) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    require(L.leq(J, HK.H), "orbitprod", "pullback rewrite needs J inside the left factor");
    std::vector<ProductPair> out;
    for (const auto& pr : HK.pairs)
        for (int x : double_coset_reps_in(U.G(), U.elems(HK.H), U.elems(pr.A), U.elems(J))) {
            int D = L.meet(L.conj(U.G().inv(x), pr.A), J);
            if (!F.is_centric(D)) continue;
            out.push_back({D, mod_inner(U, hom_compose(U, pr.phi, hom_conj(U, x, D)), HK.K)});
        }
    return out;
}

TripleSides rewrite_triple(const FusionSystem& F, int H, int K, int J) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    TripleSides t;
    for (const auto& pr : product_pairs(F, H, K).pairs)
        for (const auto& q : product_pairs(F, J, pr.A).pairs) t.lhs.push_back({q.A, mod_inner(U, q.phi, H)});
    const auto JH = product_pairs(F, J, H);
    const auto JK = product_pairs(F, J, K);
    for (const auto& c : JH.pairs)
        for (const auto& d : JK.pairs)
            for (int x : double_coset_reps_in(U.G(), U.elems(J), U.elems(d.A), U.elems(c.A))) {
                int E = L.meet(L.conj(U.G().inv(x), d.A), c.A);
                if (F.is_centric(E)) t.rhs.push_back({E, mod_inner(U, hom_restrict(U, c.phi, E), H)});
            }
    return t;
}

IdentityReport verify_product_identities(const FusionSystem& F, const FusionSystem* FS) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    IdentityReport rep;
    const auto cs = F.centrics();
    auto check = [&](bool ok, const std::string& what) {
        ++rep.checked;
        if (!ok) rep.failures.push_back(what);
    };
    std::map<std::pair<int, int>, ProductSet> cache;
    auto prod = [&](int H, int K) -> const ProductSet& {
        auto it = cache.find({H, K});
        if (it == cache.end()) it = cache.emplace(std::make_pair(H, K), product_pairs(F, H, K)).first;
        return it->second;
    };
    for (int H : cs)
        for (int K : cs) {
            const std::string tag = " H=" + std::to_string(H) + " K=" + std::to_string(K);
            const auto& HK = prod(H, K);
            std::string up = check_universal_property(F, HK);
            check(up.empty(), "universal property" + tag + ": " + up);
            check(same_pairs(U, rewrite_swap(F, HK), prod(K, H).pairs, K, H), "swap" + tag);
            for (int K2 : F.iso_class(K))
                for (const Hom& psi : F.orbit_hom_set(K, K2))
                    check(same_pairs(U, rewrite_iso_right(F, HK, psi), prod(H, K2).pairs, H, K2),
                          "iso_right" + tag + " K'=" + std::to_string(K2));
            for (int H2 : F.iso_class(H))
                for (const Hom& psi : F.orbit_hom_set(H, H2))
                    check(same_pairs(U, rewrite_iso_left(F, HK, psi), prod(H2, K).pairs, H2, K),
                          "iso_left" + tag + " H'=" + std::to_string(H2));
            for (int J : cs) {
                const std::string tj = tag + " J=" + std::to_string(J);
                if (L.leq(J, K))
                    check(same_pairs(U, rewrite_pullback_right(F, HK, J), prod(H, J).pairs, H, J),
                          "pullback_right" + tj);
                if (L.leq(J, H))
                    check(same_pairs(U, rewrite_pullback_left(F, HK, J), prod(J, K).pairs, J, K),
                          "pullback_left" + tj);
                auto t = rewrite_triple(F, H, K, J);
                check(same_pairs(U, t.lhs, t.rhs, J, H),
                      "triple" + tj + " lhs=" + list_str(canonical_multiset(U, t.lhs, J, H)) +
                          " rhs=" + list_str(canonical_multiset(U, t.rhs, J, H)));
            }
        }
    if (FS) {
        for (int H : FS->centrics())
            for (int K : FS->centrics())
                check(same_pairs(U, rewrite_self(*FS, H, K), product_pairs(*FS, H, K).pairs, H, K),
                      "self H=" + std::to_string(H) + " K=" + std::to_string(K));
    }
    return rep;
}

NfNormalizerData nf_normalizer_data(const FusionSystem& F, const FusionSystem& NF, const Hom& phi, int K) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    const FiniteGroup& G = U.G();
    const int A = phi.src;
    require(NF.in_system(A) && F.is_centric(A), "orbitprod", "normalizer data needs a centric source inside N_S(H)");
    require(L.leq(phi.img, K), "orbitprod", "map does not land in K");
    NfNormalizerData d;
    d.phi = phi;
    std::set<std::vector<int>> aut_nf;
    for (const Hom& a : NF.auts(A)) aut_nf.insert(a.table);
    const Hom inv = hom_inverse(U, phi);
    // phi^-1 c_x phi on A, for x normalizing phi(A)
    auto pulled = [&](const Hom& f, const Hom& finv, int x) {
        std::vector<int> t;
        t.reserve(U.order(f.src));
        for (int a : U.elems(f.src)) t.push_back(hom_apply(U, finv, G.conj(x, hom_apply(U, f, a))));
        return t;
    };
    std::vector<int> after;
    for (int x : U.elems(L.meet(L.normalizer(phi.img), K)))
        if (aut_nf.count(pulled(phi, inv, x))) after.push_back(x);
    d.after = L.find_elems(after);
    require(d.after >= 0, "orbitprod", "normalizer after phi is not a subgroup");

    std::vector<int> cands;
    for (int A2 : NF.iso_class(A))
        if (NF.is_fully_normalized(A2)) cands.push_back(A2);
    std::sort(cands.begin(), cands.end(), [&](int a, int b) { return (a == A) != (b == A) ? a == A : a < b; });
    for (int A2 : cands) {
        std::vector<Hom> isos;
        if (A2 == A) isos.push_back(hom_identity(U, A));
        for (const Hom& t : NF.hom_set(A2, A))
            if (t.img == A && !(A2 == A && t == hom_identity(U, A))) isos.push_back(t);
        const int NA2 = L.meet(L.normalizer(A2), NF.top());
        std::map<std::vector<int>, std::vector<int>> inner;  // c_y table -> all such y
        for (int y : U.elems(NA2)) {
            std::vector<int> t;
            for (int a : U.elems(A2)) t.push_back(G.conj(y, a));
            inner[t].push_back(y);
        }
        for (const Hom& theta : isos) {
            Hom top = hom_compose(U, phi, theta);
            Hom tinv = hom_inverse(U, top);
            bool ok = true;
            std::vector<int> before;
            std::set<std::vector<int>> pulled_set;
            for (int x : after) {
                auto t = pulled(top, tinv, x);
                if (!inner.count(t)) { ok = false; break; }
                pulled_set.insert(std::move(t));
            }
            if (!ok) continue;
            for (const auto& [t, ys] : inner)
                if (pulled_set.count(t)) before.insert(before.end(), ys.begin(), ys.end());
            std::sort(before.begin(), before.end());
            d.A_top = A2;
            d.theta = theta;
            d.top = top;
            d.before = L.find_elems(before);
            require(d.before >= 0, "orbitprod", "normalizer before the top map is not a subgroup");
            return d;
        }
    }
    fail("orbitprod", "no fully normalized top for a map from subgroup " + std::to_string(A) +
                          " (the fusion system is not saturated)");
}

std::vector<ProductPair> nf_product_pairs(const FusionSystem& F, const FusionSystem& NF, int H, int K) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    require(F.is_fully_normalized(H), "orbitprod", "H is not fully normalized");
    const auto P = product_pairs(F, H, K);
    std::map<ProductPair, int> index;
    for (std::size_t i = 0; i < P.pairs.size(); ++i) index[P.pairs[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(P.pairs.size()));
    for (std::size_t i = 0; i < P.pairs.size(); ++i) {
        const auto& pr = P.pairs[i];
        for (int A2 : NF.iso_class(pr.A)) {
            if (!L.leq(A2, H)) continue;
            for (const Hom& theta : NF.hom_set(A2, pr.A)) {
                if (theta.img != pr.A) continue;
                auto q = canonical_pair(U, ProductPair{A2, hom_compose(U, pr.phi, theta)}, H, K);
                auto it = index.find(q);
                if (it == index.end()) fail("orbitprod", "N_F-isomorphic pair missing from the product");
                uf.unite(static_cast<int>(i), it->second);
            }
        }
    }
    std::vector<ProductPair> out;
    for (std::size_t i = 0; i < P.pairs.size(); ++i) {
        if (uf.find(static_cast<int>(i)) != static_cast<int>(i)) continue;
        auto d = nf_normalizer_data(F, NF, P.pairs[i].phi, K);
        require(L.leq(d.A_top, H), "orbitprod", "top source escaped H");
        out.push_back({d.A_top, mod_inner(U, d.top, K)});
    }
    return out;
}

Hom extend_to_normalizer(const FusionSystem& F, const FusionSystem& NF, const ProductPair& pair, int K) {
    const Universe& U = F.U();
    auto d = nf_normalizer_data(F, NF, pair.phi, K);
    require(d.A_top == pair.A && d.theta == hom_identity(U, pair.A), "orbitprod",
            "extension requested for a pair that is not its own top");
    for (const Hom& ext : F.hom_set(d.before, K))
        if (hom_restrict(U, ext, pair.A).table == pair.phi.table) return ext;
    fail("orbitprod", "map from subgroup " + std::to_string(pair.A) + " does not extend to subgroup " +
                          std::to_string(d.before) + " (the fusion system is not saturated)");
}

std::vector<ProductBlock> decompose_product(const FusionSystem& F, const FusionSystem& NF, int H, int K) {
    const Universe& U = F.U();
    std::vector<ProductBlock> out;
    for (const auto& base : nf_product_pairs(F, NF, H, K)) {
        ProductBlock b;
        b.base = base;
        b.N = nf_normalizer_data(F, NF, base.phi, K).before;
        b.ext = extend_to_normalizer(F, NF, base, K);
        for (const auto& q : product_pairs(NF, H, b.N).pairs)
            b.pairs.push_back({q.A, mod_inner(U, hom_compose(U, b.ext, q.phi), K)});
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace fuscomp
