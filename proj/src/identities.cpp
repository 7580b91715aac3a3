#include "fuscomp/identities.hpp"

#include <random>

#include "fuscomp/error.hpp"
#include "fuscomp/orbitprod.hpp"

namespace fuscomp {

namespace {

// Maps of a restricted module, written with M's level shapes.
LevelMap widen(const MackeyModule& M, const MackeyModule& sub, const LevelMap& f) {
    LevelMap out = map_zero(M, M);
    for (std::size_t K = 0; K < M.dim.size(); ++K)
        if (sub.dim[K] > 0) out[K] = f[K];
    return out;
}

LevelMap narrow(const MackeyModule& sub, const LevelMap& f) {
    LevelMap out = map_zero(sub, sub);
    for (std::size_t K = 0; K < sub.dim.size(); ++K)
        if (sub.dim[K] > 0) out[K] = f[K];
    return out;
}

class Calculus {
public:
    Calculus(const MackeyContext& ctx, const MackeyModule& M) : ctx_(ctx), M_(M) {}

    const MackeyModule& restricted(int H) {
        auto it = sub_.find(H);
        if (it == sub_.end()) it = sub_.emplace(H, restrict_module(M_, ctx_.subgroup_algebra(H))).first;
        return it->second;
    }
    const std::vector<LevelMap>& sub_end(int H) {
        auto it = ends_.find(H);
        if (it == ends_.end()) {
            std::vector<LevelMap> v;
            for (const auto& g : end_basis(restricted(H))) v.push_back(widen(M_, restricted(H), g));
            it = ends_.emplace(H, std::move(v)).first;
        }
        return it->second;
    }
    LevelMap r(int H, const LevelMap& f) { return end_restrict(M_, ctx_.subgroup_algebra(H)->system(), f); }
    LevelMap tr(int H, const LevelMap& g) { return end_transfer(M_, H, g); }
    // Transfer from F_H(H) to F_K(K) inside the restriction to F_K(K).
    LevelMap tr_in(int K, int H, const LevelMap& g) {
        const auto& MK = restricted(K);
        return widen(M_, MK, end_transfer(MK, H, narrow(MK, g)));
    }
    LevelMap conj(const Hom& phi, const LevelMap& g) { return end_conjugate(M_, phi, g); }

private:
    const MackeyContext& ctx_;
    const MackeyModule& M_;
    std::map<int, MackeyModule> sub_;
    std::map<int, std::vector<LevelMap>> ends_;
};

std::string tag(std::initializer_list<std::pair<const char*, int>> kv) {
    std::string s;
    for (const auto& [key, v] : kv) s += std::string(s.empty() ? "" : " ") + key + "=" + std::to_string(v);
    return s;
}

// Isomorphisms phi : A -> phi(A) of F with A centric.
std::vector<Hom> isos_from(const FusionSystem& F, int A) { return F.homs_from(A); }

}  // namespace

WorkaroundSides workaround_sides(const MackeyContext& ctx, const MackeyModule& M, int H, const LevelMap& f,
                                 const std::vector<int>& h_shift, const std::vector<int>& n_shift) {
    const FusionSystem& F = ctx.system();
    const Universe& U = F.U();
    const PrimeField& k = M.k;
    auto NA = ctx.normalizer_algebra(H);
    const FusionSystem& NF = NA->system();
    const int NS = NF.top();
    MackeyModule MN = restrict_module(M, NA);
    Calculus calc(ctx, M);

    // The action of the inverse of the class of N_S on the restriction.
    BurnsideRing BN(NA->system_ptr());
    auto unit = burnside_unit(BN, k);
    if (!unit) fail("identities", "class of N_S(H) is not invertible in the centric Burnside ring of N_F(H)");
    LevelMap ninv = map_zero(MN, MN);
    for (int i = 0; i < BN.size(); ++i) {
        const auto c = unit->S_inverse[i];
        if (k.is_zero(c) || !F.is_centric(BN.rep(i))) continue;
        ninv = map_add(k, ninv, map_scale(k, c, end_transfer(MN, BN.rep(i), map_identity(MN))));
    }
    const LevelMap ninv_wide = widen(M, MN, ninv);

    WorkaroundSides s;
    s.lhs = narrow(MN, calc.tr(H, f));
    s.rhs = end_transfer(MN, H, narrow(MN, f));
    const auto pairs = product_pairs(F, H, NS).pairs;
    require(h_shift.size() >= pairs.size() && n_shift.size() >= pairs.size(), "identities",
            "not enough representative shifts");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const int h = h_shift[i], n = n_shift[i];
        const int A = U.lat().conj(U.G().inv(h), pairs[i].A);
        const Hom phi = hom_compose(U, hom_conj(U, n, pairs[i].phi.img),
                                    hom_compose(U, pairs[i].phi, hom_conj(U, h, A)));
        const int K = phi.img;
        if (K == H) continue;
        LevelMap fK = map_compose(k, calc.r(K, ninv_wide), calc.conj(phi, calc.r(A, f)));
        s.rhs = map_add(k, s.rhs, end_transfer(MN, K, narrow(MN, fK)));
    }
    return s;
}

std::vector<IdentityItem> verify_transfer_identities(const MackeyContext& ctx, const MackeyModule& M, int rechoices,
                                                     std::uint64_t seed) {
    const FusionSystem& F = M.system();
    const Universe& U = F.U();
    const PrimeField& k = M.k;
    require(M.alg->system_ptr() == ctx.system_ptr(), "identities", "module is not over the context's system");
    Calculus calc(ctx, M);
    const auto cs = F.centrics();
    const auto full = end_basis(M);
    std::vector<IdentityItem> out;
    auto item = [&](const std::string& name) -> IdentityItem& {
        out.push_back({name, 0, {}});
        return out.back();
    };
    auto check = [](IdentityItem& it, bool ok, const std::string& where) {
        ++it.checked;
        if (!ok && it.failures.size() < 20) it.failures.push_back(where);
    };
    auto leq = [&](int a, int b) { return U.lat().leq(a, b); };

    {
        auto& it = item("1");
        for (int H : cs)
            for (const auto& g : calc.sub_end(H)) {
                check(it, calc.tr_in(H, H, g) == g, tag({{"H", H}}));
                check(it, calc.r(H, g) == g, tag({{"H", H}}));
                for (int h : U.elems(H)) check(it, calc.conj(hom_conj(U, h, H), g) == g, tag({{"H", H}, {"h", h}}));
            }
    }
    {
        auto& it = item("2");
        for (int K : cs)
            for (int H : cs)
                if (leq(H, K))
                    for (const auto& f : full) check(it, calc.r(H, calc.r(K, f)) == calc.r(H, f), tag({{"H", H}, {"K", K}}));
        for (int H : cs) {
            if (!F.is_fully_normalized(H)) continue;
            const FusionSystem& NF = ctx.normalizer_algebra(H)->system();
            for (const auto& f : full)
                check(it, calc.r(H, end_restrict(M, NF, f)) == calc.r(H, f), tag({{"H", H}, {"via_normalizer", 1}}));
        }
    }
    {
        auto& it = item("3");
        for (int K : cs)
            for (int H : cs)
                if (leq(H, K))
                    for (const auto& g : calc.sub_end(H))
                        check(it, calc.tr(K, calc.tr_in(K, H, g)) == calc.tr(H, g), tag({{"H", H}, {"K", K}}));
    }
    {
        auto& it = item("4");
        for (int A : cs)
            for (const auto& phi : isos_from(F, A))
                for (const auto& psi : isos_from(F, phi.img)) {
                    const Hom pp = hom_compose(U, psi, phi);
                    for (const auto& g : calc.sub_end(A))
                        check(it, calc.conj(psi, calc.conj(phi, g)) == calc.conj(pp, g), tag({{"A", A}}));
                }
    }
    {
        auto& it5 = item("5");
        auto& it6 = item("6");
        for (int K : cs)
            for (int H : cs) {
                if (!leq(H, K)) continue;
                for (const auto& phi : isos_from(F, K)) {
                    const Hom phiH = hom_restrict(U, phi, H);
                    for (const auto& g : calc.sub_end(H))
                        check(it5, calc.conj(phi, calc.tr_in(K, H, g)) == calc.tr_in(phi.img, phiH.img, calc.conj(phiH, g)),
                              tag({{"H", H}, {"K", K}}));
                    for (const auto& f : calc.sub_end(K))
                        check(it6, calc.conj(phi, calc.r(H, f)) == calc.r(phiH.img, calc.conj(phi, f)),
                              tag({{"H", H}, {"K", K}}));
                }
            }
    }
    {
        auto& it7 = item("7");
        auto& it8 = item("8");
        for (int H : cs)
            for (const auto& phi : isos_from(F, H)) {
                for (const auto& g : calc.sub_end(H))
                    check(it7, calc.tr(phi.img, calc.conj(phi, g)) == calc.tr(H, g), tag({{"H", H}}));
                for (const auto& f : full)
                    check(it8, calc.conj(phi, calc.r(H, f)) == calc.r(phi.img, f), tag({{"H", H}}));
            }
    }
    {
        auto& it = item("9");
        for (int H : cs)
            for (int K : cs) {
                const auto pairs = product_pairs(F, H, K).pairs;
                for (const auto& g : calc.sub_end(H)) {
                    LevelMap rhs = map_zero(M, M);
                    for (const auto& pr : pairs)
                        rhs = map_add(k, rhs, calc.tr_in(K, pr.phi.img, calc.conj(pr.phi, calc.r(pr.A, g))));
                    check(it, calc.r(K, calc.tr(H, g)) == rhs, tag({{"H", H}, {"K", K}}));
                }
            }
    }
    {
        auto& it = item("10");
        for (int H : cs)
            for (const auto& g : calc.sub_end(H)) {
                const LevelMap tg = calc.tr(H, g);
                for (const auto& f : full) {
                    check(it, map_compose(k, f, tg) == calc.tr(H, map_compose(k, calc.r(H, f), g)), tag({{"H", H}}));
                    check(it, map_compose(k, tg, f) == calc.tr(H, map_compose(k, g, calc.r(H, f))), tag({{"H", H}}));
                }
            }
    }
    {
        // The Burnside action computed independently through Gamma(H).
        auto& it = item("11");
        for (int H : cs) {
            const FpElement G = gamma(*M.alg, k, H);
            LevelMap act = map_zero(M, M);
            for (int K : F.subgroups())
                if (M.dim[K]) act[K] = M.apply(G, K, K);
            for (const auto& f : full) check(it, calc.tr(H, calc.r(H, f)) == map_compose(k, act, f), tag({{"H", H}}));
        }
    }

    std::vector<int> reps;
    for (int H : cs)
        if (F.is_fully_normalized(H) && F.class_rep(H) == H) reps.push_back(H);
    {
        auto& it = item("normalizer-transfer");
        for (int H : reps) {
            try {
                auto NA = ctx.normalizer_algebra(H);
                MackeyModule MN = restrict_module(M, NA);
                std::vector<FpVec> img;
                for (const auto& g : calc.sub_end(H)) {
                    const LevelMap inner = widen(M, MN, end_transfer(MN, H, narrow(MN, g)));
                    const LevelMap t = transfer_from_normalizer(ctx, M, H, inner);
                    check(it, t == calc.tr(H, g), tag({{"H", H}}));
                    img.push_back(map_flatten(t));
                }
                const Subspace<PrimeField> image(k, map_space_dim(M, M), img);
                check(it, image == transfer_image(ctx, M, H), tag({{"H", H}, {"image", 1}}));
            } catch (const std::exception& e) {
                check(it, false, tag({{"H", H}}) + " " + e.what());
            }
        }
    }
    {
        auto& it = item("workaround");
        std::mt19937_64 rng(seed);
        for (int H : reps) {
            try {
                const int NS = F.normalizer_in_top(H);
                const auto npairs = product_pairs(F, H, NS).pairs.size();
                const auto& He = U.elems(H);
                const auto& Ne = U.elems(NS);
                for (int round = 0; round <= rechoices; ++round) {
                    std::vector<int> hs(npairs, 0), ns(npairs, 0);
                    if (round > 0)
                        for (std::size_t i = 0; i < npairs; ++i) {
                            hs[i] = He[rng() % He.size()];
                            ns[i] = Ne[rng() % Ne.size()];
                        }
                    for (const auto& g : calc.sub_end(H)) {
                        auto s = workaround_sides(ctx, M, H, g, hs, ns);
                        check(it, s.lhs == s.rhs, tag({{"H", H}, {"choice", round}}));
                    }
                }
            } catch (const std::exception& e) {
                check(it, false, tag({{"H", H}}) + " " + e.what());
            }
        }
    }
    {
        auto& it = item("averaging");
        for (int H : reps) {
            if (!same_fusion(F, ctx.normalizer_algebra(H)->system())) continue;
            const FpElement GS = gamma(*M.alg, k, F.top());
            LevelMap act = map_zero(M, M);
            for (int K : F.subgroups())
                if (M.dim[K]) act[K] = M.apply(GS, K, K);
            const auto homs = F.orbit_hom_set(H, F.top());
            for (const auto& g : calc.sub_end(H)) {
                LevelMap sum = map_zero(M, M);
                for (const auto& phi : homs) sum = map_add(k, sum, calc.tr(phi.img, calc.conj(phi, g)));
                check(it, sum == map_compose(k, act, calc.tr(H, g)), tag({{"H", H}}));
            }
        }
    }
    return out;
}

}  // namespace fuscomp
