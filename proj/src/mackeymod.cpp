#include "fuscomp/mackeymod.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "fuscomp/error.hpp"
#include "fuscomp/orbitprod.hpp"

namespace fuscomp {

namespace {

FpMat zeros(const PrimeField& k, int r, int c) { return FpMat(r, c, k.zero()); }

FpVec to_vector(const std::vector<int>& pos, int n, const PrimeField& k, const FpElement& x) {
    FpVec v(n, k.zero());
    for (const auto& [i, c] : x)
        if (pos[i] >= 0) v[pos[i]] = c;
    return v;
}

FpElement to_element(const std::vector<int>& cb, const PrimeField& k, const FpVec& v) {
    FpElement x;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!k.is_zero(v[i])) x.emplace(cb[i], v[i]);
    return x;
}

// Basis elements of the form I c (no restriction) or pure restrictions; these
// generate the algebra.
bool is_elementary(const Universe& U, const BasisKey& key) {
    if (key.C() == key.A) return true;
    return key.B == key.C() && key.phi == hom_identity(U, key.C());
}

// Row space of linear equations, reduced in chunks to bound memory.
class EquationSystem {
public:
    EquationSystem(const PrimeField& k, int n) : k_(k), n_(n), rows_(0, n, k.zero()) {}

    void add(const FpVec& row) {
        bool nz = false;
        for (auto x : row)
            if (!k_.is_zero(x)) { nz = true; break; }
        if (!nz) return;
        pending_.push_back(row);
        if (static_cast<int>(pending_.size()) > std::max(64, n_)) flush();
    }

    FpMat solutions() {
        flush();
        return nullspace(k_, rows_);
    }

    // Quotient data for the row space: pivots and free columns.
    FpMat reduced() {
        flush();
        return rows_;
    }

private:
    void flush() {
        if (pending_.empty()) return;
        FpMat M(rows_.rows + static_cast<int>(pending_.size()), n_, k_.zero());
        std::copy(rows_.a.begin(), rows_.a.end(), M.a.begin());
        for (std::size_t i = 0; i < pending_.size(); ++i)
            std::copy(pending_[i].begin(), pending_[i].end(),
                      M.a.begin() + static_cast<std::ptrdiff_t>(rows_.rows + i) * n_);
        pending_.clear();
        auto piv = rref(k_, M);
        rows_ = FpMat(static_cast<int>(piv.size()), n_, k_.zero());
        std::copy(M.a.begin(), M.a.begin() + static_cast<std::ptrdiff_t>(rows_.rows) * n_, rows_.a.begin());
    }

    PrimeField k_;
    int n_;
    FpMat rows_;
    std::vector<FpVec> pending_;
};

// V / W with W in reduced echelon form: classes are read off the non-pivot
// coordinates after clearing pivots.
struct Quotient {
    FpMat W;
    std::vector<int> piv, free;

    Quotient(const PrimeField& k, FpMat rows) : W(std::move(rows)) {
        std::vector<char> is_piv(W.cols, 0);
        for (int r = 0; r < W.rows; ++r)
            for (int c = 0; c < W.cols; ++c)
                if (!k.is_zero(W(r, c))) {
                    piv.push_back(c);
                    is_piv[c] = 1;
                    break;
                }
        for (int c = 0; c < W.cols; ++c)
            if (!is_piv[c]) free.push_back(c);
    }

    FpVec reduce(const PrimeField& k, FpVec v) const {
        for (int r = 0; r < W.rows; ++r) {
            auto f = v[piv[r]];
            if (k.is_zero(f)) continue;
            for (int c = 0; c < W.cols; ++c) v[c] = k.sub(v[c], k.mul(f, W(r, c)));
        }
        FpVec out(free.size());
        for (std::size_t i = 0; i < free.size(); ++i) out[i] = v[free[i]];
        return out;
    }
};

// Centric basis elements grouped by target level.
std::map<int, std::vector<int>> centric_by_target(const MackeyAlgebra& M) {
    std::map<int, std::vector<int>> out;
    for (int i : M.centric_basis()) out[M.key(i).B].push_back(i);
    return out;
}

void add_block(const PrimeField& k, FpMat& dst, int r0, int c0, const FpMat& src) {
    for (int r = 0; r < src.rows; ++r)
        for (int c = 0; c < src.cols; ++c) dst(r0 + r, c0 + c) = k.add(dst(r0 + r, c0 + c), src(r, c));
}

// Precomputed terms of tr_H at every level of M.
struct TransferPlan {
    struct Term {
        int A, ic, cr;
    };
    std::vector<std::vector<Term>> terms;  // by level
};

TransferPlan transfer_plan(const MackeyModule& M, int H) {
    const FusionSystem& F = M.system();
    const Universe& U = M.U();
    require(F.in_system(H) && M.alg->ambient().is_centric(H), "mackeymod", "transfer from a non-centric subgroup");
    TransferPlan plan;
    plan.terms.resize(U.lat().size());
    for (int K : F.subgroups()) {
        if (M.dim[K] == 0) continue;
        for (const auto& pr : product_pairs(F, H, K).pairs) {
            if (M.dim[pr.A] == 0) continue;
            plan.terms[K].push_back({pr.A, M.alg->find_or_fail(pr.A, K, pr.phi),
                                     M.alg->find_or_fail(K, pr.A, hom_inverse(U, pr.phi))});
        }
    }
    return plan;
}

LevelMap apply_plan(const MackeyModule& M, const TransferPlan& plan, const LevelMap& f) {
    LevelMap out = map_identity(M);
    for (std::size_t K = 0; K < out.size(); ++K) {
        out[K] = zeros(M.k, M.dim[K], M.dim[K]);
        for (const auto& t : plan.terms[K])
            out[K] = mat_add(M.k, out[K], mat_mul(M.k, M.act[t.ic], mat_mul(M.k, f[t.A], M.act[t.cr])));
    }
    return out;
}

}  // namespace

int MackeyModule::total_dim() const { return std::accumulate(dim.begin(), dim.end(), 0); }

FpMat MackeyModule::apply(const FpElement& x, int A, int B) const {
    FpMat out = zeros(k, dim[B], dim[A]);
    for (const auto& [i, c] : x) {
        const auto& key = alg->key(i);
        if (key.A != A || key.B != B) continue;
        out = mat_add(k, out, mat_scale(k, c, act[i]));
    }
    return out;
}

MackeyModule zero_module(MackeyPtr alg, PrimeField k) {
    MackeyModule M{alg, k, std::vector<int>(alg->U().lat().size(), 0), {}};
    M.act.assign(alg->size(), zeros(k, 0, 0));
    return M;
}

std::string validate_module(const MackeyModule& M) {
    const MackeyAlgebra& A = *M.alg;
    const PrimeField& k = M.k;
    const int n = A.U().lat().size();
    if (static_cast<int>(M.dim.size()) != n || static_cast<int>(M.act.size()) != A.size()) return "shape of module data";
    for (int K = 0; K < n; ++K)
        if (M.dim[K] && (!A.system().in_system(K) || !A.ambient().is_centric(K)))
            return "nonzero level at non-centric subgroup " + std::to_string(K);
    for (int i = 0; i < A.size(); ++i) {
        const auto& key = A.key(i);
        if (M.act[i].rows != M.dim[key.B] || M.act[i].cols != M.dim[key.A])
            return "action matrix of basis element " + std::to_string(i) + " has the wrong shape";
        if (!A.is_centric(i) && !mat_is_zero(k, M.act[i]))
            return "basis element " + std::to_string(i) + " through a non-centric level acts nontrivially";
    }
    for (int H : A.system().subgroups())
        if (M.dim[H] && M.act[A.identity(H)] != mat_identity(k, M.dim[H]))
            return "I_H^H does not act as the identity at level " + std::to_string(H);
    const auto by_target = centric_by_target(A);
    for (int x : A.centric_basis()) {
        auto it = by_target.find(A.key(x).A);
        if (it == by_target.end()) continue;
        for (int y : it->second) {
            FpMat lhs = mat_mul(k, M.act[x], M.act[y]);
            FpMat rhs = zeros(k, lhs.rows, lhs.cols);
            for (int t : A.product(x, y))
                if (A.is_centric(t)) rhs = mat_add(k, rhs, M.act[t]);
            if (lhs != rhs)
                return "product relation fails for basis elements " + std::to_string(x) + " and " + std::to_string(y);
        }
    }
    return "";
}

MackeyModule cyclic_submodule(MackeyPtr alg, PrimeField k, const FpElement& x0) {
    const MackeyAlgebra& A = *alg;
    const FpElement x = centric_project<PrimeField>(A, x0);
    const auto cb = A.centric_basis();
    const int n = static_cast<int>(cb.size());
    std::vector<int> pos(A.size(), -1);
    for (int i = 0; i < n; ++i) pos[cb[i]] = i;

    MackeyModule M = zero_module(alg, k);
    std::vector<Subspace<PrimeField>> level(A.U().lat().size(), Subspace<PrimeField>(k, n));
    for (const auto& [K, bs] : centric_by_target(A)) {
        std::vector<FpVec> gens;
        for (int b : bs) gens.push_back(to_vector(pos, n, k, melem_mul(A, k, melem_basis(k, b), x, true)));
        level[K] = Subspace<PrimeField>(k, n, gens);
        M.dim[K] = level[K].dim();
    }
    for (int i = 0; i < A.size(); ++i) {
        const auto& key = A.key(i);
        M.act[i] = zeros(k, M.dim[key.B], M.dim[key.A]);
        if (!A.is_centric(i)) continue;
        for (int c = 0; c < M.dim[key.A]; ++c) {
            FpElement v = to_element(cb, k, level[key.A].vec(c));
            auto w = level[key.B].coords(to_vector(pos, n, k, melem_mul(A, k, melem_basis(k, i), v, true)));
            if (!w) fail("mackeymod", "cyclic module is not closed under the action");
            for (int r = 0; r < M.dim[key.B]; ++r) M.act[i](r, c) = (*w)[r];
        }
    }
    return M;
}

MackeyModule cyclic_module(MackeyPtr alg, PrimeField k, const FpElement& e) {
    const FpElement ec = centric_project<PrimeField>(*alg, e);
    if (melem_mul(*alg, k, ec, ec, true) != ec) fail("mackeymod", "generator of the cyclic module is not idempotent");
    return cyclic_submodule(std::move(alg), k, ec);
}

MackeyModule restrict_module(const MackeyModule& M, MackeyPtr sub) {
    const FusionSystem& H = sub->system();
    require(&H.U() == &M.U(), "mackeymod", "restriction to a system over another group");
    require(M.system().in_system(H.top()), "mackeymod", "restriction to a subsystem outside the system");
    MackeyModule R = zero_module(sub, M.k);
    for (int K : H.subgroups()) R.dim[K] = M.dim[K];
    for (int j = 0; j < sub->size(); ++j) {
        const auto& key = sub->key(j);
        if (!sub->is_centric(j)) {
            R.act[j] = zeros(M.k, R.dim[key.B], R.dim[key.A]);
            continue;
        }
        int i = M.alg->find(key.A, key.B, key.phi);
        if (i < 0) fail("mackeymod", "subsystem morphism missing from the system");
        R.act[j] = M.act[i];
    }
    return R;
}

MackeyModule induce_module(const MackeyModule& N, MackeyPtr big) {
    const MackeyAlgebra& Bg = *big;
    const MackeyAlgebra& Sb = *N.alg;
    const PrimeField& k = N.k;
    require(&Bg.U() == &Sb.U(), "mackeymod", "induction to a system over another group");
    require(Bg.system().in_system(Sb.system().top()), "mackeymod", "induction from a system outside the target");
    const int nsub = Bg.U().lat().size();
    const auto big_by_target = centric_by_target(Bg);
    const auto sub_by_target = centric_by_target(Sb);

    // Index in the big algebra of every centric basis element of the subalgebra.
    std::vector<int> lift(Sb.size(), -1);
    for (int h : Sb.centric_basis()) lift[h] = Bg.find_or_fail(Sb.key(h).A, Sb.key(h).B, Sb.key(h).phi);

    struct Level {
        std::vector<std::pair<int, int>> gens;  // (b, n)
        std::map<int, int> start;                // b -> first generator index
        std::optional<Quotient> q;
    };
    std::vector<Level> lv(nsub);
    for (const auto& [B, bs] : big_by_target) {
        Level& L = lv[B];
        for (int b : bs) {
            int A = Bg.key(b).A;
            if (!Sb.system().in_system(A) || N.dim[A] == 0) continue;
            L.start[b] = static_cast<int>(L.gens.size());
            for (int n = 0; n < N.dim[A]; ++n) L.gens.push_back({b, n});
        }
        const int m = static_cast<int>(L.gens.size());
        EquationSystem rel(k, m);
        for (const auto& [b, s0] : L.start) {
            int A = Bg.key(b).A;
            auto it = sub_by_target.find(A);
            if (it == sub_by_target.end()) continue;
            for (int h : it->second) {
                int A2 = Sb.key(h).A;
                for (int n2 = 0; n2 < N.dim[A2]; ++n2) {
                    FpVec row(m, k.zero());
                    for (int t : Bg.product(b, lift[h])) {
                        if (!Bg.is_centric(t)) continue;
                        int g = L.start.at(t) + n2;
                        row[g] = k.add(row[g], k.one());
                    }
                    for (int r = 0; r < N.dim[A]; ++r) row[s0 + r] = k.sub(row[s0 + r], N.act[h](r, n2));
                    rel.add(row);
                }
            }
        }
        L.q.emplace(k, rel.reduced());
    }

    MackeyModule M = zero_module(big, k);
    for (int K = 0; K < nsub; ++K)
        if (lv[K].q) M.dim[K] = static_cast<int>(lv[K].q->free.size());
    for (int x = 0; x < Bg.size(); ++x) {
        const auto& key = Bg.key(x);
        M.act[x] = zeros(k, M.dim[key.B], M.dim[key.A]);
        if (!Bg.is_centric(x) || M.dim[key.A] == 0 || M.dim[key.B] == 0) continue;
        const Level& src = lv[key.A];
        const Level& dst = lv[key.B];
        for (int c = 0; c < M.dim[key.A]; ++c) {
            auto [b, n] = src.gens[src.q->free[c]];
            FpVec v(dst.gens.size(), k.zero());
            for (int t : Bg.product(x, b)) {
                if (!Bg.is_centric(t)) continue;
                int g = dst.start.at(t) + n;
                v[g] = k.add(v[g], k.one());
            }
            FpVec w = dst.q->reduce(k, v);
            for (int r = 0; r < M.dim[key.B]; ++r) M.act[x](r, c) = w[r];
        }
    }
    return M;
}

MackeyModule induce_from_subgroup(const MackeyModule& N, MackeyPtr big) {
    const MackeyAlgebra& Bg = *big;
    const FusionSystem& F = Bg.system();
    const Universe& U = Bg.U();
    const PrimeField& k = N.k;
    const int H = N.system().top();
    require(F.in_system(H), "mackeymod", "induction from a subgroup outside the system");
    require(Bg.ambient().is_centric(H), "mackeymod", "induction from a non-centric subgroup");
    const int nsub = U.lat().size();

    std::vector<std::vector<ProductPair>> pairs(nsub);
    std::vector<std::vector<int>> offset(nsub);
    MackeyModule M = zero_module(big, k);
    for (int K : F.subgroups()) {
        if (!Bg.ambient().is_centric(K)) continue;
        pairs[K] = product_pairs(F, H, K).pairs;
        int off = 0;
        for (const auto& pr : pairs[K]) {
            offset[K].push_back(off);
            off += N.dim[pr.A];
        }
        M.dim[K] = off;
    }
    for (int x = 0; x < Bg.size(); ++x) {
        const auto& key = Bg.key(x);
        M.act[x] = zeros(k, M.dim[key.B], M.dim[key.A]);
        if (!Bg.is_centric(x) || M.dim[key.A] == 0 || M.dim[key.B] == 0) continue;
        const int B = key.B;
        const ProductSet P{H, B, pairs[B]};
        for (std::size_t j = 0; j < pairs[key.A].size(); ++j) {
            const auto& pj = pairs[key.A][j];
            if (N.dim[pj.A] == 0) continue;
            // x . (I c_phi (x) n) = sum of I c_theta R_E (x) n, then factor
            // I c_theta through a pair of [H x B].
            int g = Bg.find_or_fail(pj.A, key.A, pj.phi);
            for (int t : Bg.product(x, g)) {
                if (!Bg.is_centric(t)) continue;
                const auto& kt = Bg.key(t);
                const int E = kt.C();
                int h = 0;
                int i = factor_through(F, P, E, kt.phi, h);
                const auto& pi = pairs[B][i];
                int s = N.alg->find_or_fail(pj.A, pi.A, hom_conj(U, h, E));
                add_block(k, M.act[x], offset[B][i], offset[key.A][j], N.act[s]);
            }
        }
    }
    return M;
}

MackeyModule conjugate_module(const MackeyModule& N, const Hom& phi, MackeyPtr target) {
    const Universe& U = N.U();
    require(phi.src == N.system().top() && phi.img == target->system().top(), "mackeymod",
            "conjugation map does not match the two systems");
    const Hom inv = hom_inverse(U, phi);
    MackeyModule M = zero_module(target, N.k);
    for (int K : N.system().subgroups()) M.dim[hom_image(U, phi, K)] = N.dim[K];
    for (int j = 0; j < target->size(); ++j) {
        const auto& key = target->key(j);
        M.act[j] = zeros(N.k, M.dim[key.B], M.dim[key.A]);
        if (!target->is_centric(j)) continue;
        const int C = hom_image(U, inv, key.C());
        Hom psi = hom_compose(U, inv, hom_compose(U, key.phi, hom_restrict(U, phi, C)));
        int i = N.alg->find_or_fail(hom_image(U, inv, key.A), hom_image(U, inv, key.B), psi);
        M.act[j] = N.act[i];
    }
    return M;
}

MackeyModule direct_sum(const MackeyModule& a, const MackeyModule& b) {
    require(a.alg == b.alg, "mackeymod", "direct sum of modules over different algebras");
    MackeyModule M = zero_module(a.alg, a.k);
    for (std::size_t K = 0; K < M.dim.size(); ++K) M.dim[K] = a.dim[K] + b.dim[K];
    for (int x = 0; x < a.alg->size(); ++x) {
        const auto& key = a.alg->key(x);
        M.act[x] = zeros(a.k, M.dim[key.B], M.dim[key.A]);
        add_block(a.k, M.act[x], 0, 0, a.act[x]);
        add_block(a.k, M.act[x], a.dim[key.B], a.dim[key.A], b.act[x]);
    }
    return M;
}

LevelMap map_zero(const MackeyModule& src, const MackeyModule& dst) {
    LevelMap f(src.dim.size());
    for (std::size_t K = 0; K < f.size(); ++K) f[K] = zeros(src.k, dst.dim[K], src.dim[K]);
    return f;
}

LevelMap map_identity(const MackeyModule& M) {
    LevelMap f(M.dim.size());
    for (std::size_t K = 0; K < f.size(); ++K) f[K] = mat_identity(M.k, M.dim[K]);
    return f;
}

LevelMap map_compose(const PrimeField& k, const LevelMap& g, const LevelMap& f) {
    LevelMap h(f.size());
    for (std::size_t K = 0; K < f.size(); ++K) h[K] = mat_mul(k, g[K], f[K]);
    return h;
}

LevelMap map_add(const PrimeField& k, const LevelMap& a, const LevelMap& b) {
    LevelMap h(a.size());
    for (std::size_t K = 0; K < a.size(); ++K) h[K] = mat_add(k, a[K], b[K]);
    return h;
}

LevelMap map_scale(const PrimeField& k, PrimeField::value_type s, const LevelMap& a) {
    LevelMap h(a.size());
    for (std::size_t K = 0; K < a.size(); ++K) h[K] = mat_scale(k, s, a[K]);
    return h;
}

bool map_is_zero(const PrimeField& k, const LevelMap& a) {
    return std::all_of(a.begin(), a.end(), [&](const FpMat& m) { return mat_is_zero(k, m); });
}

bool is_module_map(const MackeyModule& src, const MackeyModule& dst, const LevelMap& f) {
    require(src.alg == dst.alg, "mackeymod", "module map between modules over different algebras");
    const PrimeField& k = src.k;
    for (int x : src.alg->centric_basis()) {
        const auto& key = src.alg->key(x);
        if (mat_mul(k, dst.act[x], f[key.A]) != mat_mul(k, f[key.B], src.act[x])) return false;
    }
    return true;
}

FpVec map_flatten(const LevelMap& f) {
    FpVec v;
    for (const auto& m : f) v.insert(v.end(), m.a.begin(), m.a.end());
    return v;
}

int map_space_dim(const MackeyModule& src, const MackeyModule& dst) {
    int n = 0;
    for (std::size_t K = 0; K < src.dim.size(); ++K) n += src.dim[K] * dst.dim[K];
    return n;
}

LevelMap map_unflatten(const MackeyModule& src, const MackeyModule& dst, const FpVec& v) {
    require(static_cast<int>(v.size()) == map_space_dim(src, dst), "mackeymod", "flattened map has the wrong length");
    LevelMap f = map_zero(src, dst);
    std::size_t p = 0;
    for (auto& m : f)
        for (auto& x : m.a) x = v[p++];
    return f;
}

std::vector<LevelMap> hom_basis(const MackeyModule& src, const MackeyModule& dst) {
    require(src.alg == dst.alg, "mackeymod", "Hom between modules over different algebras");
    const PrimeField& k = src.k;
    const MackeyAlgebra& A = *src.alg;
    const int nsub = static_cast<int>(src.dim.size());
    std::vector<int> off(nsub + 1, 0);
    for (int K = 0; K < nsub; ++K) off[K + 1] = off[K] + src.dim[K] * dst.dim[K];
    const int n = off[nsub];
    EquationSystem eq(k, n);
    for (int x : A.centric_basis()) {
        const auto& key = A.key(x);
        if (key.A == key.B && key.phi == hom_identity(A.U(), key.A)) continue;
        if (!is_elementary(A.U(), key)) continue;
        const int a = key.A, b = key.B;
        // dst.act[x] f_a - f_b src.act[x] = 0, entrywise on M_a -> N_b.
        for (int r = 0; r < dst.dim[b]; ++r)
            for (int c = 0; c < src.dim[a]; ++c) {
                FpVec row(n, k.zero());
                for (int m = 0; m < dst.dim[a]; ++m) {
                    int u = off[a] + m * src.dim[a] + c;
                    row[u] = k.add(row[u], dst.act[x](r, m));
                }
                for (int m = 0; m < src.dim[b]; ++m) {
                    int u = off[b] + r * src.dim[b] + m;
                    row[u] = k.sub(row[u], src.act[x](m, c));
                }
                eq.add(row);
            }
    }
    FpMat N = eq.solutions();
    std::vector<LevelMap> out;
    for (int c = 0; c < N.cols; ++c) {
        FpVec v(n);
        for (int r = 0; r < n; ++r) v[r] = N(r, c);
        out.push_back(map_unflatten(src, dst, v));
    }
    return out;
}

MackeyContext::MackeyContext(FusionPtr F) : F_(std::move(F)), full_(std::make_shared<const MackeyAlgebra>(F_)) {}

MackeyPtr MackeyContext::subgroup_algebra(int H) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sub_.find(H);
    if (it != sub_.end()) return it->second;
    require(F_->in_system(H), "mackeymod", "subgroup outside the system");
    auto A = std::make_shared<const MackeyAlgebra>(fusion_of_subgroup(F_->universe(), H, F_->p()), F_);
    sub_.emplace(H, A);
    return A;
}

MackeyPtr MackeyContext::normalizer_algebra(int H) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = norm_.find(H);
    if (it != norm_.end()) return it->second;
    auto A = std::make_shared<const MackeyAlgebra>(normalizer_system(*F_, H), F_);
    norm_.emplace(H, A);
    return A;
}

LevelMap end_restrict(const MackeyModule& M, const FusionSystem& sub, const LevelMap& f) {
    LevelMap g = f;
    for (std::size_t K = 0; K < g.size(); ++K)
        if (!sub.in_system(static_cast<int>(K))) g[K] = zeros(M.k, M.dim[K], M.dim[K]);
    return g;
}

LevelMap end_transfer(const MackeyModule& M, int H, const LevelMap& f) {
    return apply_plan(M, transfer_plan(M, H), f);
}

LevelMap end_conjugate(const MackeyModule& M, const Hom& phi, const LevelMap& f) {
    const Universe& U = M.U();
    LevelMap out = map_zero(M, M);
    for (int K : M.system().subgroups()) {
        if (!U.lat().leq(K, phi.src) || M.dim[K] == 0) continue;
        Hom c = hom_restrict(U, phi, K);
        const int K2 = c.img;
        const FpMat& to = M.act[M.alg->conjugation(c)];
        const FpMat& back = M.act[M.alg->conjugation(hom_inverse(U, c))];
        out[K2] = mat_mul(M.k, to, mat_mul(M.k, f[K], back));
    }
    return out;
}

LevelMap burnside_class_act(const MackeyModule& M, int H, const LevelMap& f) { return end_transfer(M, H, f); }

ThetaMaps theta_maps(const MackeyContext& ctx, const MackeyModule& M, int H) {
    const FusionSystem& F = M.system();
    const Universe& U = M.U();
    const PrimeField& k = M.k;
    MackeyModule MH = restrict_module(M, ctx.subgroup_algebra(H));
    ThetaMaps out{induce_from_subgroup(MH, M.alg), {}, {}};
    out.down = map_zero(out.induced, M);
    out.up = map_zero(M, out.induced);
    for (int K : F.subgroups()) {
        if (out.induced.dim[K] == 0 || M.dim[K] == 0) continue;
        int off = 0;
        for (const auto& pr : product_pairs(F, H, K).pairs) {
            const int d = M.dim[pr.A];
            if (d == 0) continue;
            add_block(k, out.down[K], 0, off, M.act[M.alg->find_or_fail(pr.A, K, pr.phi)]);
            add_block(k, out.up[K], off, 0, M.act[M.alg->find_or_fail(K, pr.A, hom_inverse(U, pr.phi))]);
            off += d;
        }
    }
    return out;
}

Subspace<PrimeField> transfer_image(const MackeyContext& ctx, const MackeyModule& M, int H) {
    return transfer_image(ctx, M, std::vector<int>{H});
}

Subspace<PrimeField> transfer_image(const MackeyContext& ctx, const MackeyModule& M, const std::vector<int>& family) {
    std::vector<FpVec> gens;
    for (int H : family) {
        const auto plan = transfer_plan(M, H);
        for (const auto& f : end_basis(restrict_module(M, ctx.subgroup_algebra(H))))
            gens.push_back(map_flatten(apply_plan(M, plan, f)));
    }
    return Subspace<PrimeField>(M.k, map_space_dim(M, M), gens);
}

LevelMap transfer_from_normalizer(const MackeyContext& ctx, const MackeyModule& M, int H, const LevelMap& f) {
    const FusionSystem& F = ctx.system();
    require(M.alg->system_ptr() == ctx.system_ptr(), "mackeymod", "module is not over the context's system");
    require(F.is_fully_normalized(H) && F.is_centric(H), "mackeymod",
            "transfer from the normalizer needs a fully normalized centric subgroup");
    const FusionSystem& NF = ctx.normalizer_algebra(H)->system();
    BurnsideRing B(ctx.system_ptr());
    auto unit = burnside_unit(B, M.k);
    if (!unit) fail("mackeymod", "class of S is not invertible in the centric Burnside ring over F_" +
                                     std::to_string(M.k.characteristic()));
    LevelMap sum = map_zero(M, M);
    for (const auto& block : decompose_product(F, NF, H, F.top())) {
        // end_conjugate reads only the levels below N, i.e. the restriction of f.
        LevelMap g = end_conjugate(M, block.ext, f);
        sum = map_add(M.k, sum, end_transfer(M, block.ext.img, g));
    }
    LevelMap out = map_zero(M, M);
    for (int i = 0; i < B.size(); ++i) {
        const auto c = unit->S_inverse[i];
        if (M.k.is_zero(c)) continue;
        out = map_add(M.k, out, map_scale(M.k, c, burnside_class_act(M, B.rep(i), sum)));
    }
    return out;
}

ProjectivityResult relative_projectivity(const MackeyContext& ctx, const MackeyModule& M,
                                         const std::vector<int>& family) {
    const PrimeField& k = M.k;
    ProjectivityResult res;
    const int n = map_space_dim(M, M);
    std::vector<std::pair<int, LevelMap>> sources;
    std::vector<FpVec> cols;
    for (int H : family) {
        const auto plan = transfer_plan(M, H);
        for (auto& f : end_basis(restrict_module(M, ctx.subgroup_algebra(H)))) {
            cols.push_back(map_flatten(apply_plan(M, plan, f)));
            sources.emplace_back(H, std::move(f));
        }
    }
    FpMat A(n, static_cast<int>(cols.size()), k.zero());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r = 0; r < n; ++r) A(r, static_cast<int>(c)) = cols[c][r];
    const FpVec id = map_flatten(map_identity(M));
    FpMat rhs(n, 1, k.zero());
    for (int r = 0; r < n; ++r) rhs(r, 0) = id[r];
    auto x = solve(k, A, rhs);
    if (!x) return res;
    res.projective = true;
    std::map<int, LevelMap> acc;
    for (std::size_t c = 0; c < sources.size(); ++c) {
        const auto s = (*x)(static_cast<int>(c), 0);
        const auto& [H, f] = sources[c];
        auto it = acc.find(H);
        if (it == acc.end()) it = acc.emplace(H, map_scale(k, k.zero(), f)).first;
        if (!k.is_zero(s)) it->second = map_add(k, it->second, map_scale(k, s, f));
    }
    for (auto& [H, f] : acc) res.witness.emplace_back(H, std::move(f));
    return res;
}

std::vector<int> family_closure(const FusionSystem& F, const std::vector<int>& gens) {
    std::vector<int> out;
    for (int K : F.centrics()) {
        if (F.class_rep(K) != K) continue;
        for (int g : gens)
            if (F.subconjugate(K, g)) {
                out.push_back(K);
                break;
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<int> maximal_classes(const FusionSystem& F, const std::vector<int>& fam) {
    std::vector<int> out;
    for (int m : fam) {
        bool maximal = true;
        for (int x : fam)
            if (x != m && F.subconjugate(m, x) && !F.is_iso(m, x)) maximal = false;
        if (maximal) out.push_back(m);
    }
    return out;
}

}  // namespace

DefectData defect_data(const MackeyContext& ctx, const MackeyModule& M) {
    const FusionSystem& F = M.system();
    DefectData d;
    std::vector<int> fam = family_closure(F, {F.top()});
    if (M.is_zero()) fam.clear();
    if (!M.is_zero() && !relative_projectivity(ctx, M, fam).projective)
        fail("mackeymod", "module is not projective relative to S; the coefficient field is not p-local");
    bool changed = true;
    while (changed && !fam.empty()) {
        changed = false;
        auto maxes = maximal_classes(F, fam);
        std::sort(maxes.begin(), maxes.end(),
                  [&](int a, int b) { return F.U().order(a) != F.U().order(b) ? F.U().order(a) > F.U().order(b) : a < b; });
        for (int m : maxes) {
            std::vector<int> smaller;
            for (int x : fam)
                if (x != m) smaller.push_back(x);
            if (relative_projectivity(ctx, M, smaller).projective) {
                fam = std::move(smaller);
                changed = true;
                break;
            }
        }
    }
    d.defect_set = fam;
    d.defect_groups = maximal_classes(F, fam);
    if (d.defect_groups.size() == 1) d.vertex = d.defect_groups[0];
    return d;
}

std::string module_json(const MackeyModule& M) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["field"] = M.k.characteristic();
    j["system"] = M.system().name();
    ordered_json levels = ordered_json::array();
    for (std::size_t K = 0; K < M.dim.size(); ++K)
        if (M.dim[K]) levels.push_back({{"subgroup", K}, {"dim", M.dim[K]}});
    j["levels"] = levels;
    ordered_json act = ordered_json::array();
    for (int x = 0; x < M.alg->size(); ++x) {
        const FpMat& m = M.act[x];
        if (mat_is_zero(M.k, m)) continue;
        ordered_json entries = ordered_json::array();
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c)
                if (m(r, c)) entries.push_back({r, c, m(r, c)});
        const auto& key = M.alg->key(x);
        act.push_back({{"basis", x}, {"A", key.A}, {"B", key.B}, {"C", key.C()}, {"entries", entries}});
    }
    j["action"] = act;
    return j.dump(2);
}

}  // namespace fuscomp
