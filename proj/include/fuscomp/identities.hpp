// Numerical checks of the transfer, restriction and conjugation calculus on
// the endomorphism ring of a centric Mackey functor.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuscomp/mackeymod.hpp"

namespace fuscomp {

struct IdentityItem {
    std::string name;
    int checked = 0;
    std::vector<std::string> failures;
};

// Items "1".."11" range over every admissible centric H, K and morphism phi.
// "normalizer-transfer" checks that the transfer from N_F(H) composes with
// the transfer from F_H(H), and "workaround" the decomposition of the
// restriction to N_F(H) of a transfer, over `rechoices` random choices of
// product representatives. "averaging" runs only when F = N_F(H).
std::vector<IdentityItem> verify_transfer_identities(const MackeyContext& ctx, const MackeyModule& M,
                                                     int rechoices = 3, std::uint64_t seed = 1);

// The decomposition r_{N_F}(tr_H(f)) = tr_H^{N_F}(f) + sum_K tr_K^{N_F}(f_K)
// computed with the product representatives moved by (h, n) per pair; both
// sides as endomorphisms of M restricted to N_F(H). h_shift[i] in H and
// n_shift[i] in N_S(H) act on the i-th pair of [H x N_S(H)].
struct WorkaroundSides {
    LevelMap lhs, rhs;
};
WorkaroundSides workaround_sides(const MackeyContext& ctx, const MackeyModule& M, int H, const LevelMap& f,
                                 const std::vector<int>& h_shift, const std::vector<int>& n_shift);

}  // namespace fuscomp
