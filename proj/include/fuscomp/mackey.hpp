// The Mackey algebra of a fusion system, its centric quotient, and the
// centric Burnside ring.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fuscomp/fusion.hpp"
#include "fuscomp/linalg.hpp"
#include "fuscomp/orbitprod.hpp"

namespace fuscomp {

// I_{phi C}^B c_phi R_C^A with phi : C -> B, C = phi.src.
struct BasisKey {
    int A = -1, B = -1;
    Hom phi;
    int C() const { return phi.src; }
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
};

class MackeyAlgebra {
public:
    // Centricity of levels is always measured in `ambient` (defaults to sys).
    explicit MackeyAlgebra(FusionPtr sys, FusionPtr ambient = nullptr);

    const FusionSystem& system() const { return *sys_; }
    FusionPtr system_ptr() const { return sys_; }
    const FusionSystem& ambient() const { return *amb_; }
    const Universe& U() const { return sys_->U(); }

    int size() const { return static_cast<int>(keys_.size()); }
    const BasisKey& key(int i) const { return keys_[i]; }
    // Index of the class of (A, B, phi), or -1 when phi is not a morphism of the system.
    int find(int A, int B, const Hom& phi) const;
    int find_or_fail(int A, int B, const Hom& phi) const;

    int identity(int H) const;                  // I_H^H
    int restriction(int C, int A) const;        // R_C^A
    int induction(int C, int B) const;          // I_C^B
    int conjugation(const Hom& phi) const;      // c_phi : C -> phi(C)
    bool is_centric(int i) const { return centric_[i]; }
    std::vector<int> centric_basis() const;

    // Product of basis elements as a multiset of basis indices (empty for 0).
    const std::vector<int>& product(int x, int y) const;

private:
    std::vector<int> compute_product(int x, int y) const;

    FusionPtr sys_, amb_;
    std::vector<BasisKey> keys_;
    std::vector<char> centric_;
    std::unordered_map<std::vector<int>, int, VecHash> index_;  // [A, B, C, table...] -> basis
    mutable std::mutex mu_;
    mutable std::unordered_map<long long, std::vector<int>> cache_;
};

using MackeyPtr = std::shared_ptr<const MackeyAlgebra>;

// Finitely supported combination of basis elements.
template <class K>
using MackeyElement = std::map<int, typename K::value_type>;

template <class K>
void melem_add_to(const K& k, MackeyElement<K>& x, int i, const typename K::value_type& c) {
    if (k.is_zero(c)) return;
    auto it = x.find(i);
    if (it == x.end()) {
        x.emplace(i, c);
        return;
    }
    it->second = k.add(it->second, c);
    if (k.is_zero(it->second)) x.erase(it);
}

template <class K>
MackeyElement<K> melem_add(const K& k, MackeyElement<K> x, const MackeyElement<K>& y) {
    for (const auto& [i, c] : y) melem_add_to(k, x, i, c);
    return x;
}

template <class K>
MackeyElement<K> melem_sub(const K& k, MackeyElement<K> x, const MackeyElement<K>& y) {
    for (const auto& [i, c] : y) melem_add_to(k, x, i, k.neg(c));
    return x;
}

template <class K>
MackeyElement<K> melem_scale(const K& k, const typename K::value_type& s, const MackeyElement<K>& x) {
    MackeyElement<K> out;
    for (const auto& [i, c] : x) melem_add_to(k, out, i, k.mul(s, c));
    return out;
}

template <class K>
MackeyElement<K> melem_basis(const K& k, int i) {
    return MackeyElement<K>{{i, k.one()}};
}

// With centric = true the product is taken in the centric quotient: terms
// at non-centric levels are dropped.
template <class K>
MackeyElement<K> melem_mul(const MackeyAlgebra& M, const K& k, const MackeyElement<K>& x, const MackeyElement<K>& y,
                           bool centric) {
    MackeyElement<K> out;
    for (const auto& [i, a] : x)
        for (const auto& [j, b] : y) {
            const auto ab = k.mul(a, b);
            for (int t : M.product(i, j))
                if (!centric || M.is_centric(t)) melem_add_to(k, out, t, ab);
        }
    return out;
}

template <class K>
MackeyElement<K> centric_project(const MackeyAlgebra& M, const MackeyElement<K>& x) {
    MackeyElement<K> out;
    for (const auto& [i, c] : x)
        if (M.is_centric(i)) out.emplace(i, c);
    return out;
}

// Sum of I_H^H over all levels (or the centric ones).
template <class K>
MackeyElement<K> melem_unit(const MackeyAlgebra& M, const K& k, bool centric) {
    MackeyElement<K> out;
    for (int H : M.system().subgroups())
        if (!centric || M.ambient().is_centric(H)) melem_add_to(k, out, M.identity(H), k.one());
    return out;
}

// Centric Burnside ring: one basis element per F-class of centric subgroups,
// indexed by the class's fully normalized representative.
class BurnsideRing {
public:
    explicit BurnsideRing(FusionPtr F);

    const FusionSystem& system() const { return *F_; }
    int size() const { return static_cast<int>(reps_.size()); }
    int rep(int i) const { return reps_[i]; }
    int index_of(int H) const;  // class index of a centric subgroup
    // Structure constants: product(i, j)[k] = coefficient of class k in i * j.
    const std::vector<int>& product(int i, int j) const { return table_[i * size() + j]; }

private:
    FusionPtr F_;
    std::vector<int> reps_;
    std::vector<std::vector<int>> table_;
};

template <class K>
using BurnsideElement = std::vector<typename K::value_type>;

template <class K>
BurnsideElement<K> burnside_mul(const BurnsideRing& B, const K& k, const BurnsideElement<K>& x,
                                const BurnsideElement<K>& y) {
    BurnsideElement<K> out(B.size(), k.zero());
    for (int i = 0; i < B.size(); ++i) {
        if (k.is_zero(x[i])) continue;
        for (int j = 0; j < B.size(); ++j) {
            if (k.is_zero(y[j])) continue;
            auto xy = k.mul(x[i], y[j]);
            const auto& c = B.product(i, j);
            for (int t = 0; t < B.size(); ++t)
                if (c[t]) out[t] = k.add(out[t], k.mul(xy, k.from_int(c[t])));
        }
    }
    return out;
}

template <class K>
struct BurnsideUnit {
    BurnsideElement<K> unit;
    BurnsideElement<K> S_inverse;
};

// Solves u * e_j = e_j for all classes, then S * v = u. Empty when the linear
// system has no solution (the ring is not p-local or not unital over k).
template <class K>
std::optional<BurnsideUnit<K>> burnside_unit(const BurnsideRing& B, const K& k) {
    const int n = B.size();
    Matrix<K> A(n * n, n, k.zero());
    Matrix<K> rhs(n * n, 1, k.zero());
    for (int j = 0; j < n; ++j)
        for (int t = 0; t < n; ++t) {
            int row = j * n + t;
            for (int i = 0; i < n; ++i) A(row, i) = k.from_int(B.product(i, j)[t]);
            rhs(row, 0) = j == t ? k.one() : k.zero();
        }
    auto u = solve(k, A, rhs);
    if (!u) return std::nullopt;
    BurnsideUnit<K> out;
    for (int i = 0; i < n; ++i) out.unit.push_back((*u)(i, 0));
    const int s = B.index_of(B.system().top());
    Matrix<K> Sm(n, n, k.zero()), ur(n, 1, k.zero());
    for (int t = 0; t < n; ++t) {
        for (int j = 0; j < n; ++j) Sm(t, j) = k.from_int(B.product(s, j)[t]);
        ur(t, 0) = out.unit[t];
    }
    auto v = solve(k, Sm, ur);
    if (!v) return std::nullopt;
    for (int i = 0; i < n; ++i) out.S_inverse.push_back((*v)(i, 0));
    return out;
}

// Gamma(H) = sum over centric J and (A, phi) in [J x H] of I_A^J R_A^J in the
// centric quotient.
template <class K>
MackeyElement<K> gamma(const MackeyAlgebra& M, const K& k, int H) {
    const FusionSystem& F = M.system();
    const Universe& U = M.U();
    MackeyElement<K> out;
    for (int J : F.centrics())
        for (const auto& pr : product_pairs(F, J, H).pairs)
            melem_add_to(k, out, M.find_or_fail(J, J, hom_identity(U, pr.A)), k.one());
    return out;
}

template <class K>
MackeyElement<K> gamma_of(const MackeyAlgebra& M, const BurnsideRing& B, const K& k, const BurnsideElement<K>& x) {
    MackeyElement<K> out;
    for (int i = 0; i < B.size(); ++i)
        if (!k.is_zero(x[i])) out = melem_add(k, out, melem_scale(k, x[i], gamma(M, k, B.rep(i))));
    return out;
}

}  // namespace fuscomp
