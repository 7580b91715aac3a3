#include "fuscomp/grp.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "fuscomp/error.hpp"

namespace fuscomp {

std::size_t PermHash::operator()(const Perm& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : p) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
}

std::size_t max_group_order() {
    if (const char* s = std::getenv("FUSCOMP_MAX_GROUP")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v > 0) return static_cast<std::size_t>(v);
    }
    return 10000;
}

Perm compose(const Perm& a, const Perm& b) {
    Perm c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
}

Perm perm_from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
    Perm p(degree);
    std::iota(p.begin(), p.end(), 0);
    std::vector<char> seen(degree, 0);
    for (const auto& cyc : cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i] - 1;
            int b = cyc[(i + 1) % cyc.size()] - 1;
            if (a < 0 || a >= degree || b < 0 || b >= degree)
                fail("grp", "cycle entry out of range 1.." + std::to_string(degree));
            if (seen[a]) fail("grp", "point " + std::to_string(a + 1) + " repeated in cycles");
            seen[a] = 1;
            p[a] = b;
        }
    }
    return p;
}

std::vector<std::vector<int>> perm_to_cycles(const Perm& p) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == static_cast<int>(i)) continue;
        std::vector<int> cyc;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = 1;
            cyc.push_back(static_cast<int>(j) + 1);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

FiniteGroup::FiniteGroup(std::string name, int degree, const std::vector<Perm>& generators,
                         std::size_t bound)
    : name_(std::move(name)), degree_(degree) {
    require(degree >= 1, "grp", "degree must be positive");
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const Perm& g = generators[i];
        std::vector<char> hit(degree, 0);
        bool ok = static_cast<int>(g.size()) == degree;
        for (int j = 0; ok && j < degree; ++j) {
            if (g[j] < 0 || g[j] >= degree || hit[g[j]]) ok = false;
            else hit[g[j]] = 1;
        }
        if (!ok) fail("grp", "generator " + std::to_string(i) + " is not a bijection of 1.." + std::to_string(degree));
    }
    Perm id(degree);
    std::iota(id.begin(), id.end(), 0);
    std::unordered_map<Perm, int, PermHash> seen;
    std::vector<Perm> all{id};
    seen.emplace(id, 0);
    for (std::size_t k = 0; k < all.size(); ++k) {
        for (const Perm& g : generators) {
            Perm c = compose(g, all[k]);
            if (seen.emplace(c, static_cast<int>(all.size())).second) {
                all.push_back(std::move(c));
                if (all.size() > bound)
                    fail("grp", "group '" + name_ + "' exceeds the size bound " + std::to_string(bound));
            }
        }
    }
    std::sort(all.begin(), all.end());
    perms_ = std::move(all);
    const int n = order();
    index_.reserve(n * 2);
    for (int i = 0; i < n; ++i) index_.emplace(perms_[i], i);
    if (n <= 2048) {
        table_.resize(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) table_[static_cast<std::size_t>(a) * n + b] = index_.at(compose(perms_[a], perms_[b]));
    }
    inv_.resize(n);
    for (int a = 0; a < n; ++a) {
        Perm q(degree);
        for (int j = 0; j < degree; ++j) q[perms_[a][j]] = j;
        inv_[a] = index_.at(q);
    }
    for (const Perm& g : generators) gens_.push_back(index_.at(g));
}

int FiniteGroup::find(const Perm& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

int FiniteGroup::mul(int a, int b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order() + b];
    return index_.at(compose(perms_[a], perms_[b]));
}

int FiniteGroup::element_order(int a) const {
    int k = 1;
    for (int x = a; x != 0; x = mul(x, a)) ++k;
    return k;
}

std::vector<int> generate_subgroup(const FiniteGroup& G, const std::vector<int>& gens) {
    std::vector<char> in(G.order(), 0);
    std::vector<int> out{0};
    in[0] = 1;
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (int g : gens) {
            int c = G.mul(g, out[k]);
            if (!in[c]) {
                in[c] = 1;
                out.push_back(c);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Bits::subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] & ~o.w_[i]) return false;
    return true;
}

std::size_t Bits::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t w : w_) h = (h ^ w) * 0x100000001b3ull + (h >> 17);
    return h;
}

namespace {

Subgroup make_subgroup(const FiniteGroup& G, std::vector<int> gens) {
    Subgroup s;
    s.elems = generate_subgroup(G, gens);
    s.gens = std::move(gens);
    s.bits = Bits(G.order());
    for (int x : s.elems) s.bits.set(x);
    return s;
}

}  // namespace

Lattice::Lattice(std::shared_ptr<const FiniteGroup> G) : G_(std::move(G)) {
    const FiniteGroup& g = *G_;
    const int n = g.order();
    std::vector<Subgroup> found;
    std::unordered_map<Bits, int, BitsHash> seen;
    auto add = [&](Subgroup s) {
        if (seen.emplace(s.bits, static_cast<int>(found.size())).second) found.push_back(std::move(s));
    };
    add(make_subgroup(g, {}));
    std::vector<int> cyclic_gens;
    for (int x = 1; x < n; ++x) {
        Subgroup c = make_subgroup(g, {x});
        if (!seen.count(c.bits)) cyclic_gens.push_back(x);
        add(std::move(c));
    }
    // Every subgroup is a join of cyclic ones; close under joining with a cyclic.
    for (std::size_t k = 0; k < found.size(); ++k) {
        for (int x : cyclic_gens) {
            if (found[k].contains(x)) continue;
            std::vector<int> gens = found[k].gens;
            gens.push_back(x);
            Subgroup j = make_subgroup(g, gens);
            if (!seen.count(j.bits)) add(std::move(j));
        }
    }
    std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size();
        return a.elems < b.elems;
    });
    subs_ = std::move(found);
    const int m = size();
    for (int i = 0; i < m; ++i) index_.emplace(subs_[i].bits, i);

    leq_.assign(static_cast<std::size_t>(m) * m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (subs_[a].order() <= subs_[b].order() && subs_[b].order() % subs_[a].order() == 0)
                leq_[static_cast<std::size_t>(a) * m + b] = subs_[a].bits.subset_of(subs_[b].bits);

    conj_.assign(static_cast<std::size_t>(n) * m, -1);
    for (int x = 0; x < n; ++x) {
        for (int a = 0; a < m; ++a) {
            Bits b(n);
            for (int y : subs_[a].elems) b.set(g.conj(x, y));
            conj_[static_cast<std::size_t>(x) * m + a] = index_.at(b);
        }
    }
    norm_.resize(m);
    cent_.resize(m);
    for (int a = 0; a < m; ++a) {
        std::vector<int> N, C;
        for (int x = 0; x < n; ++x) {
            if (conj(x, a) != a) continue;
            N.push_back(x);
            bool central = true;
            for (int y : subs_[a].gens)
                if (g.mul(x, y) != g.mul(y, x)) { central = false; break; }
            if (central) C.push_back(x);
        }
        norm_[a] = find_elems(N);
        cent_[a] = find_elems(C);
    }
    cls_.assign(m, -1);
    for (int a = 0; a < m; ++a) {
        if (cls_[a] >= 0) continue;
        for (int x = 0; x < n; ++x) cls_[conj(x, a)] = ncls_;
        ++ncls_;
    }
    pos_.assign(static_cast<std::size_t>(m) * n, -1);
    for (int a = 0; a < m; ++a)
        for (std::size_t i = 0; i < subs_[a].elems.size(); ++i)
            pos_[static_cast<std::size_t>(a) * n + subs_[a].elems[i]] = static_cast<int>(i);
}

int Lattice::find(const Bits& b) const {
    auto it = index_.find(b);
    return it == index_.end() ? -1 : it->second;
}

int Lattice::find_elems(const std::vector<int>& elems) const {
    Bits b(G_->order());
    for (int x : elems) b.set(x);
    return find(b);
}

int Lattice::join(int a, int b) const {
    std::vector<int> gens = subs_[a].gens;
    gens.insert(gens.end(), subs_[b].gens.begin(), subs_[b].gens.end());
    return generated(gens);
}

int Lattice::meet(int a, int b) const {
    std::vector<int> out;
    std::set_intersection(subs_[a].elems.begin(), subs_[a].elems.end(), subs_[b].elems.begin(),
                          subs_[b].elems.end(), std::back_inserter(out));
    return find_elems(out);
}

int Lattice::generated(const std::vector<int>& gens) const {
    return find_elems(generate_subgroup(*G_, gens));
}

std::vector<int> double_coset_reps_in(const FiniteGroup& G, const std::vector<int>& J,
                                      const std::vector<int>& K, const std::vector<int>& H) {
    std::vector<char> inJ(G.order(), 0), done(G.order(), 0);
    for (int x : J) inJ[x] = 1;
    for (int x : K)
        if (!inJ[x]) fail("grp", "double coset: left subgroup not contained in the group");
    for (int x : H)
        if (!inJ[x]) fail("grp", "double coset: right subgroup not contained in the group");
    std::vector<int> sorted = J;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> reps;
    for (int x : sorted) {
        if (done[x]) continue;
        reps.push_back(x);
        for (int k : K) {
            int kx = G.mul(k, x);
            for (int h : H) done[G.mul(kx, h)] = 1;
        }
    }
    return reps;
}

std::vector<int> double_coset_reps(const FiniteGroup& G, const std::vector<int>& K,
                                   const std::vector<int>& H) {
    std::vector<int> all(G.order());
    std::iota(all.begin(), all.end(), 0);
    return double_coset_reps_in(G, all, K, H);
}

LocalSubgroups local_subgroups(const FiniteGroup& G, const std::vector<int>& H) {
    std::vector<char> inH(G.order(), 0);
    for (int h : H) inH[h] = 1;
    LocalSubgroups out;
    for (int g = 0; g < G.order(); ++g) {
        bool norm = true, cent = true;
        for (int h : H) {
            int c = G.conj(g, h);
            if (!inH[c]) { norm = false; break; }
            if (c != h) cent = false;
        }
        if (norm) out.normalizer.push_back(g);
        if (norm && cent) out.centralizer.push_back(g);
    }
    return out;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_p_power(long n, int p) {
    if (n < 1) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

std::vector<int> sylow_subgroup(const FiniteGroup& G, int p) {
    require(is_prime(p), "grp", std::to_string(p) + " is not prime");
    long target = 1;
    for (long n = G.order(); n % p == 0; n /= p) target *= p;
    std::vector<int> P{0};
    std::vector<int> gens;
    while (static_cast<long>(P.size()) < target) {
        std::vector<char> inP(G.order(), 0);
        for (int x : P) inP[x] = 1;
        auto loc = local_subgroups(G, P);
        int pick = -1;
        for (int x : loc.normalizer) {
            if (inP[x]) continue;
            // x^p in P makes <P, x> a p-group of order p|P|.
            int y = 0;
            for (int i = 0; i < p; ++i) y = G.mul(y, x);
            if (inP[y]) { pick = x; break; }
        }
        if (pick < 0) fail("grp", "Sylow search stalled");
        gens.push_back(pick);
        P = generate_subgroup(G, gens);
    }
    return P;
}

}  // namespace fuscomp
