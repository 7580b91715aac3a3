#include "fuscomp/mackey.hpp"

#include <algorithm>

#include "fuscomp/error.hpp"

namespace fuscomp {

std::size_t VecHash::operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

namespace {

std::vector<int> make_key(int A, int B, int C, const std::vector<int>& table) {
    std::vector<int> k{A, B, C};
    k.insert(k.end(), table.begin(), table.end());
    return k;
}

}  // namespace

MackeyAlgebra::MackeyAlgebra(FusionPtr sys, FusionPtr ambient) : sys_(std::move(sys)), amb_(std::move(ambient)) {
    if (!amb_) amb_ = sys_;
    require(sys_->universe() == amb_->universe(), "mackey", "system and ambient live over different groups");
    const Universe& U = sys_->U();
    const Lattice& L = U.lat();
    const FiniteGroup& G = U.G();
    const auto& subs = sys_->subgroups();
    for (int A : subs)
        for (int B : subs)
            for (int C : subs) {
                if (!L.leq(C, A)) continue;
                for (const Hom& phi : sys_->hom_set(C, B)) {
                    if (index_.count(make_key(A, B, C, phi.table))) continue;
                    const int id = static_cast<int>(keys_.size());
                    // the whole class {(C^a, c_b phi c_a)} gets the same index
                    std::vector<std::vector<int>> members;
                    for (int a : U.elems(A)) {
                        const int Ca = L.conj(G.inv(a), C);
                        const auto& ce = U.elems(Ca);
                        for (int b : U.elems(B)) {
                            std::vector<int> t;
                            t.reserve(ce.size());
                            for (int y : ce) t.push_back(G.conj(b, hom_apply(U, phi, G.conj(a, y))));
                            members.push_back(make_key(A, B, Ca, t));
                        }
                    }
                    std::sort(members.begin(), members.end());
                    members.erase(std::unique(members.begin(), members.end()), members.end());
                    for (const auto& m : members) index_.emplace(m, id);
                    // representative: smallest (C, table)
                    const auto& best = members.front();
                    Hom rep{best[2], -1, std::vector<int>(best.begin() + 3, best.end())};
                    rep.img = L.find_elems(rep.table);
                    keys_.push_back(BasisKey{A, B, rep});
                    centric_.push_back(amb_->is_centric(rep.src));
                }
            }
}

int MackeyAlgebra::find(int A, int B, const Hom& phi) const {
    auto it = index_.find(make_key(A, B, phi.src, phi.table));
    return it == index_.end() ? -1 : it->second;
}

int MackeyAlgebra::find_or_fail(int A, int B, const Hom& phi) const {
    int i = find(A, B, phi);
    if (i < 0) fail("mackey", "no basis element for a map from subgroup " + std::to_string(phi.src) + " into " +
                                  std::to_string(B));
    return i;
}

int MackeyAlgebra::identity(int H) const { return find_or_fail(H, H, hom_identity(U(), H)); }
int MackeyAlgebra::restriction(int C, int A) const { return find_or_fail(A, C, hom_identity(U(), C)); }
int MackeyAlgebra::induction(int C, int B) const { return find_or_fail(C, B, hom_identity(U(), C)); }
int MackeyAlgebra::conjugation(const Hom& phi) const { return find_or_fail(phi.src, phi.img, phi); }

std::vector<int> MackeyAlgebra::centric_basis() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (centric_[i]) out.push_back(i);
    return out;
}

const std::vector<int>& MackeyAlgebra::product(int x, int y) const {
    const long long k = static_cast<long long>(x) * size() + y;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
    }
    auto v = compute_product(x, y);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(k, std::move(v)).first->second;
}

// (I c_phi R_C^A)(I_{psi D}^A c_psi R_D^{A''}) via the Mackey formula on
// R_C^A I_{psi D}^A.
std::vector<int> MackeyAlgebra::compute_product(int x, int y) const {
    const BasisKey& kx = keys_[x];
    const BasisKey& ky = keys_[y];
    std::vector<int> out;
    if (ky.B != kx.A) return out;
    const Universe& U = sys_->U();
    const Lattice& L = U.lat();
    const FiniteGroup& G = U.G();
    const Hom& phi = kx.phi;
    const Hom& psi = ky.phi;
    const int C = phi.src;
    const int psiD = psi.img;
    const Hom psi_inv = hom_inverse(U, psi);
    for (int r : double_coset_reps_in(G, U.elems(kx.A), U.elems(C), U.elems(psiD))) {
        const int W = L.meet(L.conj(G.inv(r), C), psiD);
        const int E = hom_image(U, psi_inv, W);
        Hom theta{E, -1, {}};
        for (int e : U.elems(E)) theta.table.push_back(hom_apply(U, phi, G.conj(r, hom_apply(U, psi, e))));
        auto it = index_.find(make_key(ky.A, kx.B, E, theta.table));
        if (it == index_.end()) fail("mackey", "product left the basis: composite map is not in the system");
        out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

BurnsideRing::BurnsideRing(FusionPtr F) : F_(std::move(F)) {
    for (int H : F_->centrics()) {
        int r = F_->class_rep(H);
        if (std::find(reps_.begin(), reps_.end(), r) == reps_.end()) reps_.push_back(r);
    }
    std::sort(reps_.begin(), reps_.end());
    const int n = size();
    table_.assign(static_cast<std::size_t>(n) * n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& pr : product_pairs(*F_, reps_[i], reps_[j]).pairs) ++table_[i * n + j][index_of(pr.A)];
}

int BurnsideRing::index_of(int H) const {
    int r = F_->class_rep(H);
    auto it = std::lower_bound(reps_.begin(), reps_.end(), r);
    if (it == reps_.end() || *it != r) fail("mackey", "subgroup " + std::to_string(H) + " is not centric");
    return static_cast<int>(it - reps_.begin());
}

}  // namespace fuscomp
