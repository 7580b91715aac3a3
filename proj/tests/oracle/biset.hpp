// Independent structure constants for the Mackey algebra, computed by
// composing transitive bisets (B x A)/Delta(C, phi) element by element.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "fuscomp/mackey.hpp"

namespace oracle {

using namespace fuscomp;

// Left-action twisted diagonal {(phi(c), c)} of B x A, as a transitive
// (B, A)-biset: elements are cosets (u, v)Delta, u in B, v in A.
struct Biset {
    std::vector<int> left, right;     // element lists of B and A
    std::vector<int> coset;           // (u index, v index) -> coset id
    int count = 0;
};

inline Biset make_biset(const Universe& U, int A, int B, const Hom& phi) {
    const FiniteGroup& G = U.G();
    Biset X;
    X.left = U.elems(B);
    X.right = U.elems(A);
    const int nb = static_cast<int>(X.left.size()), na = static_cast<int>(X.right.size());
    X.coset.assign(static_cast<std::size_t>(nb) * na, -1);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < na; ++j) {
            if (X.coset[i * na + j] >= 0) continue;
            for (std::size_t c = 0; c < phi.table.size(); ++c) {
                int u = G.mul(X.left[i], phi.table[c]);
                int v = G.mul(X.right[j], U.elems(phi.src)[c]);
                int iu = U.lat().pos(B, u), iv = U.lat().pos(A, v);
                X.coset[iu * na + iv] = X.count;
            }
            ++X.count;
        }
    return X;
}

struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

// Basis indices (with multiplicity) of the composite of basis elements x and y.
inline std::vector<int> compose(const MackeyAlgebra& M, int x, int y) {
    const Universe& U = M.U();
    const FiniteGroup& G = U.G();
    const Lattice& L = U.lat();
    const BasisKey& kx = M.key(x);
    const BasisKey& ky = M.key(y);
    if (kx.A != ky.B) return {};
    const int B = kx.B, A = kx.A, D = ky.A;
    Biset X = make_biset(U, A, B, kx.phi);  // (B, A)
    Biset Y = make_biset(U, D, A, ky.phi);  // (A, D)
    const int na = static_cast<int>(X.right.size());
    const int nd = static_cast<int>(Y.right.size());
    // representative (u, v) of every X coset and (s, t) of every Y coset
    std::vector<std::pair<int, int>> xr(X.count), yr(Y.count);
    for (std::size_t i = 0; i < X.coset.size(); ++i) xr[X.coset[i]] = {static_cast<int>(i) / na, static_cast<int>(i) % na};
    for (std::size_t i = 0; i < Y.coset.size(); ++i) yr[Y.coset[i]] = {static_cast<int>(i) / nd, static_cast<int>(i) % nd};
    auto xid = [&](int u, int v) { return X.coset[L.pos(B, u) * na + L.pos(A, v)]; };
    auto yid = [&](int s, int t) { return Y.coset[L.pos(A, s) * nd + L.pos(D, t)]; };
    // tensor over A: (x.a, y) ~ (x, a.y), with (u,v).a = (u, a^-1 v), a.(s,t) = (a s, t)
    UF uf(X.count * Y.count);
    for (int a : L.sub(A).gens)
        for (int i = 0; i < X.count; ++i)
            for (int j = 0; j < Y.count; ++j) {
                auto [u, v] = xr[i];
                auto [s, t] = yr[j];
                int xa = xid(X.left[u], G.mul(G.inv(a), X.right[v]));
                int ay = yid(G.mul(a, Y.left[s]), Y.right[t]);
                uf.unite(xa * Y.count + j, i * Y.count + ay);
            }
    auto cls = [&](int i, int j) { return uf.find(i * Y.count + j); };
    // b.[x, y].d^-1 with b.(u,v) = (b u, v) and (s,t).d^-1 = (s, d t)
    auto act = [&](int b, int d, int i, int j) {
        auto [u, v] = xr[i];
        auto [s, t] = yr[j];
        return cls(xid(G.mul(b, X.left[u]), X.right[v]), yid(Y.left[s], G.mul(d, Y.right[t])));
    };
    std::set<int> done;
    std::vector<int> out;
    for (int i = 0; i < X.count; ++i)
        for (int j = 0; j < Y.count; ++j) {
            int z = cls(i, j);
            if (done.count(z)) continue;
            // orbit
            for (int b : U.elems(B))
                for (int d : U.elems(D)) done.insert(act(b, d, i, j));
            // stabilizer, read as a twisted diagonal over its D-projection
            std::map<int, int> theta;
            for (int b : U.elems(B))
                for (int d : U.elems(D))
                    if (act(b, d, i, j) == z) {
                        if (theta.count(d)) throw Error("oracle", "stabilizer is not a twisted diagonal");
                        theta[d] = b;
                    }
            std::vector<int> E, t;
            for (auto [d, b] : theta) {
                E.push_back(d);
                t.push_back(b);
            }
            Hom h{L.find_elems(E), L.find_elems(t), t};
            out.push_back(M.find_or_fail(D, B, h));
        }
    std::sort(out.begin(), out.end());
    return out;
}

// Number of isomorphism classes of transitive (B, A)-bisets with stabilizer a
// twisted diagonal of a system morphism, over all levels A, B.
inline int basis_count(const FusionSystem& F) {
    const Universe& U = F.U();
    const FiniteGroup& G = U.G();
    const Lattice& L = U.lat();
    int total = 0;
    for (int A : F.subgroups())
        for (int B : F.subgroups()) {
            std::set<std::vector<std::pair<int, int>>> classes;
            for (int C : F.subgroups()) {
                if (!L.leq(C, A)) continue;
                for (const Hom& phi : F.hom_set(C, B)) {
                    std::vector<std::pair<int, int>> best;
                    for (int b : U.elems(B))
                        for (int a : U.elems(A)) {
                            std::vector<std::pair<int, int>> s;
                            for (std::size_t c = 0; c < phi.table.size(); ++c)
                                s.push_back({G.conj(b, phi.table[c]), G.conj(a, U.elems(C)[c])});
                            std::sort(s.begin(), s.end());
                            if (best.empty() || s < best) best = s;
                        }
                    classes.insert(best);
                }
            }
            total += static_cast<int>(classes.size());
        }
    return total;
}

}  // namespace oracle
