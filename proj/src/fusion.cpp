#include "fuscomp/fusion.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "fuscomp/error.hpp"

namespace fuscomp {

std::shared_ptr<const Universe> Universe::make(std::shared_ptr<const FiniteGroup> S) {
    auto U = std::make_shared<Universe>();
    U->S = S;
    U->L = std::make_shared<const Lattice>(S);
    return U;
}

int hom_apply(const Universe& U, const Hom& f, int x) {
    int i = U.lat().pos(f.src, x);
    if (i < 0) fail("fusion", "element outside the source of a hom");
    return f.table[i];
}

Hom hom_identity(const Universe& U, int A) {
    return Hom{A, A, U.elems(A)};
}

Hom hom_conj(const Universe& U, int g, int A) {
    Hom h{A, U.lat().conj(g, A), {}};
    h.table.reserve(U.elems(A).size());
    for (int x : U.elems(A)) h.table.push_back(U.G().conj(g, x));
    return h;
}

int hom_image(const Universe& U, const Hom& f, int C) {
    if (C == f.src) return f.img;
    std::vector<int> out;
    for (int x : U.elems(C)) out.push_back(hom_apply(U, f, x));
    return U.lat().find_elems(out);
}

Hom hom_compose(const Universe& U, const Hom& psi, const Hom& phi) {
    if (!U.lat().leq(phi.img, psi.src)) fail("fusion", "composition of non-composable homs");
    Hom h{phi.src, -1, {}};
    h.table.reserve(phi.table.size());
    for (int y : phi.table) h.table.push_back(hom_apply(U, psi, y));
    h.img = hom_image(U, psi, phi.img);
    return h;
}

Hom hom_restrict(const Universe& U, const Hom& f, int C) {
    if (C == f.src) return f;
    if (!U.lat().leq(C, f.src)) fail("fusion", "restriction to a subgroup outside the source");
    Hom h{C, -1, {}};
    for (int x : U.elems(C)) h.table.push_back(hom_apply(U, f, x));
    h.img = hom_image(U, f, C);
    return h;
}

Hom hom_inverse(const Universe& U, const Hom& f) {
    Hom h{f.img, f.src, std::vector<int>(f.table.size())};
    const auto& src = U.elems(f.src);
    for (std::size_t i = 0; i < src.size(); ++i) h.table[U.lat().pos(f.img, f.table[i])] = src[i];
    return h;
}

bool hom_from_generators(const Universe& U, int A, const std::vector<int>& gens,
                         const std::vector<int>& images, Hom& out) {
    const FiniteGroup& G = U.G();
    const auto& elems = U.elems(A);
    std::vector<int> map(elems.size(), -1);
    map[U.lat().pos(A, 0)] = 0;
    std::vector<int> queue{0};
    for (std::size_t k = 0; k < queue.size(); ++k) {
        int x = queue[k];
        int fx = map[U.lat().pos(A, x)];
        for (std::size_t i = 0; i < gens.size(); ++i) {
            int y = G.mul(gens[i], x);
            int fy = G.mul(images[i], fx);
            int py = U.lat().pos(A, y);
            if (py < 0) return false;
            if (map[py] < 0) {
                map[py] = fy;
                queue.push_back(y);
            } else if (map[py] != fy) {
                return false;
            }
        }
    }
    if (queue.size() != elems.size()) return false;
    out = Hom{A, -1, map};
    out.img = U.lat().find_elems(map);
    return out.img >= 0 && is_injective_hom(U, out);
}

bool is_injective_hom(const Universe& U, const Hom& f) {
    std::vector<int> t = f.table;
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) return false;
    const auto& gens = U.lat().sub(f.src).gens;
    for (int g : gens)
        for (int x : U.elems(f.src))
            if (hom_apply(U, f, U.G().mul(g, x)) != U.G().mul(hom_apply(U, f, g), hom_apply(U, f, x)))
                return false;
    return true;
}

Hom orbit_canonical(const Universe& U, const Hom& f, int B) {
    Hom best = f;
    std::vector<int> t(f.table.size());
    for (int b : U.elems(B)) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = U.G().conj(b, f.table[i]);
        if (t < best.table) best.table = t;
    }
    if (best.table != f.table) best.img = U.lat().find_elems(best.table);
    return best;
}

FusionSystem::FusionSystem(std::shared_ptr<const Universe> U, int top, int p,
                           std::vector<std::vector<Hom>> homs, std::string name)
    : U_(std::move(U)), top_(top), p_(p), homs_(std::move(homs)), name_(std::move(name)) {
    const Lattice& L = U_->lat();
    const int m = L.size();
    homs_.resize(m);
    for (int a = 0; a < m; ++a) {
        if (L.leq(a, top_)) subs_.push_back(a);
        else homs_[a].clear();
        std::sort(homs_[a].begin(), homs_[a].end());
        homs_[a].erase(std::unique(homs_[a].begin(), homs_[a].end()), homs_[a].end());
    }
    class_id_.assign(m, -1);
    for (int a : subs_) {
        if (class_id_[a] >= 0) continue;
        std::vector<int> cls;
        for (const Hom& h : homs_[a])
            if (class_id_[h.img] < 0) {
                class_id_[h.img] = static_cast<int>(classes_.size());
                cls.push_back(h.img);
            }
        if (class_id_[a] < 0) fail("fusion", "identity missing from a hom set");
        std::sort(cls.begin(), cls.end());
        classes_.push_back(std::move(cls));
    }
    centric_.assign(m, 0);
    fully_normalized_.assign(m, 0);
    for (int a : subs_) {
        bool centric = true;
        int best = 0;
        for (int k : iso_class(a)) {
            int c = L.meet(L.centralizer(k), top_);
            if (!L.leq(c, k)) centric = false;
            best = std::max(best, L.order(normalizer_in_top(k)));
        }
        centric_[a] = centric;
        fully_normalized_[a] = L.order(normalizer_in_top(a)) == best;
    }
}

int FusionSystem::normalizer_in_top(int A) const {
    return U_->lat().meet(U_->lat().normalizer(A), top_);
}

std::vector<Hom> FusionSystem::hom_set(int A, int B) const {
    if (!in_system(A) || !in_system(B)) fail("fusion", "subgroup not contained in the fusion system's p-group");
    std::vector<Hom> out;
    for (const Hom& h : homs_[A])
        if (U_->lat().leq(h.img, B)) out.push_back(h);
    return out;
}

int FusionSystem::hom_index(const Hom& f) const {
    if (f.src < 0 || f.src >= static_cast<int>(homs_.size())) return -1;
    const auto& v = homs_[f.src];
    auto it = std::lower_bound(v.begin(), v.end(), f);
    if (it == v.end() || *it != f) return -1;
    return static_cast<int>(it - v.begin());
}

bool FusionSystem::subconjugate(int K, int H) const {
    for (const Hom& h : homs_[K])
        if (U_->lat().leq(h.img, H)) return true;
    return false;
}

bool FusionSystem::is_fully_centralized(int A) const {
    const Lattice& L = U_->lat();
    int mine = L.order(L.meet(L.centralizer(A), top_));
    for (int k : iso_class(A))
        if (L.order(L.meet(L.centralizer(k), top_)) > mine) return false;
    return true;
}

int FusionSystem::class_rep(int A) const {
    for (int k : iso_class(A))
        if (fully_normalized_[k]) return k;
    fail("fusion", "F-class without a fully normalized member");
}

std::vector<int> FusionSystem::centrics() const {
    std::vector<int> out;
    for (int a : subs_)
        if (centric_[a]) out.push_back(a);
    return out;
}

std::vector<Hom> FusionSystem::orbit_hom_set(int A, int B) const {
    std::vector<Hom> out;
    for (const Hom& h : hom_set(A, B)) out.push_back(orbit_canonical(*U_, h, B));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void check_p_group(const Universe& U, int top, int p) {
    require(is_prime(p), "fusion", std::to_string(p) + " is not prime");
    require(is_p_power(U.order(top), p), "fusion", "S is not a " + std::to_string(p) + "-group");
}

}  // namespace

FusionPtr fusion_from_group(const FiniteGroup& G, std::shared_ptr<const Universe> U, int top, int p,
                            const std::string& name) {
    check_p_group(*U, top, p);
    const FiniteGroup& S = U->G();
    require(S.degree() == G.degree(), "fusion", "S and the ambient group act on different point sets");
    std::vector<int> emb(S.order());
    for (int s = 0; s < S.order(); ++s) {
        emb[s] = G.find(S.perm(s));
        require(emb[s] >= 0, "fusion", "S is not contained in the ambient group");
    }
    const Lattice& L = U->lat();
    std::vector<std::vector<Hom>> homs(L.size());
    for (int a = 0; a < L.size(); ++a) {
        if (!L.leq(a, top)) continue;
        std::set<std::vector<int>> seen;
        for (int g = 0; g < G.order(); ++g) {
            std::vector<int> t;
            t.reserve(U->order(a));
            bool inside = true;
            for (int x : U->elems(a)) {
                int y = S.find(G.perm(G.conj(g, emb[x])));
                if (y < 0 || !L.sub(top).contains(y)) { inside = false; break; }
                t.push_back(y);
            }
            if (!inside || !seen.insert(t).second) continue;
            Hom h{a, L.find_elems(t), std::move(t)};
            homs[a].push_back(std::move(h));
        }
    }
    return std::make_shared<FusionSystem>(U, top, p, std::move(homs), name.empty() ? G.name() : name);
}

FusionPtr fusion_from_group(const FiniteGroup& G, const std::vector<Perm>& S_gens, int p,
                            const std::string& name) {
    auto S = std::make_shared<const FiniteGroup>("S", G.degree(), S_gens, G.order());
    auto U = Universe::make(S);
    return fusion_from_group(G, U, U->lat().whole(), p, name);
}

FusionPtr fusion_of_subgroup(std::shared_ptr<const Universe> U, int H, int p) {
    check_p_group(*U, H, p);
    const Lattice& L = U->lat();
    std::vector<std::vector<Hom>> homs(L.size());
    for (int a = 0; a < L.size(); ++a) {
        if (!L.leq(a, H)) continue;
        for (int h : U->elems(H)) homs[a].push_back(hom_conj(*U, h, a));
    }
    return std::make_shared<FusionSystem>(U, H, p, std::move(homs), "F_H(H)");
}

namespace {

std::string describe(const Universe& U, const Hom& h) {
    std::string s = "[subgroup " + std::to_string(h.src) + " ->";
    for (std::size_t i = 0; i < h.table.size(); ++i)
        s += " " + std::to_string(U.elems(h.src)[i]) + ":" + std::to_string(h.table[i]);
    return s + "]";
}

}  // namespace

FusionPtr abstract_fusion(std::shared_ptr<const Universe> U, int p, const std::vector<GeneratorHom>& gens,
                          ClosureMode mode, const std::string& name) {
    const Lattice& L = U->lat();
    const int top = L.whole();
    check_p_group(*U, top, p);
    std::vector<std::set<Hom>> by_src(L.size());
    std::map<int, std::set<Hom>> by_img;
    std::deque<Hom> work;
    auto add = [&](const Hom& h) {
        if (by_src[h.src].insert(h).second) {
            by_img[h.img].insert(h);
            work.push_back(h);
        }
    };
    for (int a = 0; a < L.size(); ++a)
        for (int s : U->elems(top)) add(hom_conj(*U, s, a));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        int A = L.generated(gens[i].source_gens);
        Hom h;
        if (gens[i].images.size() != gens[i].source_gens.size() ||
            !hom_from_generators(*U, A, gens[i].source_gens, gens[i].images, h))
            fail("fusion", "hom " + std::to_string(i) + " does not define an injective homomorphism");
        add(h);
    }
    std::vector<std::set<Hom>> snapshot;
    if (mode == ClosureMode::Validate) snapshot = by_src;
    auto need = [&](const Hom& h, const std::string& why) {
        if (mode == ClosureMode::Validate && !snapshot[h.src].count(h))
            fail("fusion", "hom set not closed: missing " + why + " " + describe(*U, h));
        add(h);
    };
    while (!work.empty()) {
        Hom f = work.front();
        work.pop_front();
        for (int c = 0; c < L.size(); ++c)
            if (c != f.src && L.leq(c, f.src)) need(hom_restrict(*U, f, c), "restriction");
        need(hom_inverse(*U, f), "inverse");
        std::vector<Hom> after(by_src[f.img].begin(), by_src[f.img].end());
        for (const Hom& g : after) need(hom_compose(*U, g, f), "composite");
        std::vector<Hom> before(by_img[f.src].begin(), by_img[f.src].end());
        for (const Hom& g : before) need(hom_compose(*U, f, g), "composite");
    }
    std::vector<std::vector<Hom>> homs(L.size());
    for (int a = 0; a < L.size(); ++a) homs[a].assign(by_src[a].begin(), by_src[a].end());
    return std::make_shared<FusionSystem>(U, top, p, std::move(homs), name.empty() ? "abstract" : name);
}

int phi_normalizer(const FusionSystem& F, const Hom& phi) {
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    const FiniteGroup& G = U.G();
    int NA = F.normalizer_in_top(phi.src);
    int NB = F.normalizer_in_top(phi.img);
    const auto& img = U.elems(phi.img);
    std::set<std::vector<int>> induced;  // automorphisms of phi(A) induced by N_S(phi A)
    for (int z : U.elems(NB)) {
        std::vector<int> t;
        for (int y : img) t.push_back(G.conj(z, y));
        induced.insert(std::move(t));
    }
    Hom inv = hom_inverse(U, phi);
    std::vector<int> keep;
    for (int x : U.elems(NA)) {
        // phi c_x phi^-1 on phi(A)
        std::vector<int> t;
        for (int y : img) t.push_back(hom_apply(U, phi, G.conj(x, hom_apply(U, inv, y))));
        if (induced.count(t)) keep.push_back(x);
    }
    int N = L.find_elems(keep);
    if (N < 0) fail("fusion", "phi-normalizer is not a subgroup");
    return N;
}

SaturationReport check_saturation(const FusionSystem& F) {
    SaturationReport r;
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    const int S = F.top();
    long autF = static_cast<long>(F.auts(S).size());
    long autS = U.order(S) / U.order(L.meet(L.centralizer(S), S));
    if (autF % autS != 0 || (autF / autS) % F.p() == 0) {
        r.saturated = r.sylow_axiom = false;
        r.failure = "Aut_S(S) (order " + std::to_string(autS) + ") is not Sylow in Aut_F(S) (order " +
                    std::to_string(autF) + ")";
        return r;
    }
    for (int a : F.subgroups()) {
        for (const Hom& phi : F.homs_from(a)) {
            if (!F.is_fully_normalized(phi.img)) continue;
            int N = phi_normalizer(F, phi);
            bool ok = false;
            for (const Hom& ext : F.homs_from(N)) {
                bool match = true;
                for (std::size_t i = 0; i < phi.table.size() && match; ++i)
                    match = hom_apply(U, ext, U.elems(a)[i]) == phi.table[i];
                if (match) { ok = true; break; }
            }
            if (!ok) {
                r.saturated = false;
                r.failure = "a map from subgroup " + std::to_string(a) + " onto the fully normalized subgroup " +
                            std::to_string(phi.img) + " does not extend to its phi-normalizer (subgroup " +
                            std::to_string(N) + ")";
                return r;
            }
        }
    }
    return r;
}

FusionPtr normalizer_system(const FusionSystem& F, int H, bool literal) {
    require(F.in_system(H), "fusion", "subgroup outside S");
    require(F.is_fully_normalized(H), "fusion", "normalizer system requested for a subgroup that is not fully normalized");
    const Universe& U = F.U();
    const Lattice& L = U.lat();
    const int N = F.normalizer_in_top(H);
    std::vector<std::vector<Hom>> homs(L.size());
    for (int a = 0; a < L.size(); ++a) {
        if (!L.leq(a, N)) continue;
        const int AH = L.join(a, H);
        for (const Hom& phi : F.homs_from(a)) {
            if (!L.leq(phi.img, N)) continue;
            const int bound = literal ? L.join(phi.img, H) : -1;
            bool ok = false;
            for (const Hom& ext : F.homs_from(AH)) {
                if (literal ? !L.leq(ext.img, bound) : hom_image(U, ext, H) != H) continue;
                bool match = true;
                for (std::size_t i = 0; i < phi.table.size() && match; ++i)
                    match = hom_apply(U, ext, U.elems(a)[i]) == phi.table[i];
                if (match) { ok = true; break; }
            }
            if (ok) homs[a].push_back(phi);
        }
    }
    return std::make_shared<FusionSystem>(F.universe(), N, F.p(), std::move(homs), "N_F(H)");
}

bool same_fusion(const FusionSystem& A, const FusionSystem& B) {
    if (A.universe() != B.universe()) {
        const FiniteGroup& x = A.U().G();
        const FiniteGroup& y = B.U().G();
        if (x.order() != y.order() || x.degree() != y.degree()) return false;
        for (int i = 0; i < x.order(); ++i)
            if (x.perm(i) != y.perm(i)) return false;
    }
    if (A.top() != B.top()) return false;
    for (int a : A.subgroups())
        if (A.homs_from(a) != B.homs_from(a)) return false;
    return true;
}

}  // namespace fuscomp
