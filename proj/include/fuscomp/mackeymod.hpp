// Centric Mackey functors as explicit modules over the Mackey algebra, the
// induction/restriction/conjugation functors, and the transfer calculus on
// endomorphism rings.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fuscomp/linalg.hpp"
#include "fuscomp/mackey.hpp"

namespace fuscomp {

using FpMat = Matrix<PrimeField>;
using FpVec = Vec<PrimeField>;
using FpElement = MackeyElement<PrimeField>;

// Levels M_K = I_K^K M for every subgroup of the universe (zero outside the
// system and at non-centric levels) and one action matrix per basis element.
struct MackeyModule {
    MackeyPtr alg;
    PrimeField k;
    std::vector<int> dim;      // indexed by subgroup id
    std::vector<FpMat> act;    // indexed by basis element: dim[B] x dim[A]

    const FusionSystem& system() const { return alg->system(); }
    const Universe& U() const { return alg->U(); }
    int total_dim() const;
    bool is_zero() const { return total_dim() == 0; }
    // Action of an algebra element as a map M_A -> M_B.
    FpMat apply(const FpElement& x, int A, int B) const;
};

MackeyModule zero_module(MackeyPtr alg, PrimeField k);
// Empty string when every relation holds instance-wise, otherwise the first
// violation.
std::string validate_module(const MackeyModule& M);

// (mu/I) x for an arbitrary element x of the centric quotient.
MackeyModule cyclic_submodule(MackeyPtr alg, PrimeField k, const FpElement& x);
// Same, but x must be idempotent.
MackeyModule cyclic_module(MackeyPtr alg, PrimeField k, const FpElement& e);

// sub is an algebra over a subsystem of M's system.
MackeyModule restrict_module(const MackeyModule& M, MackeyPtr sub);
// mu(big) 1_sub (x)_{mu(sub)} N, as a quotient of the free tensor space.
MackeyModule induce_module(const MackeyModule& N, MackeyPtr big);
// Same functor for N over F_H(H): level K is the sum of N_A over (A, phi) in
// [H x K], with the action obtained by factoring through product pairs.
MackeyModule induce_from_subgroup(const MackeyModule& N, MackeyPtr big);
// phi : H -> phi(H) an isomorphism of the ambient system; N over F_H(H),
// target over F_{phi H}(phi H).
MackeyModule conjugate_module(const MackeyModule& N, const Hom& phi, MackeyPtr target);
MackeyModule direct_sum(const MackeyModule& a, const MackeyModule& b);

// Per-level linear maps between two modules over the same algebra.
using LevelMap = std::vector<FpMat>;

LevelMap map_zero(const MackeyModule& src, const MackeyModule& dst);
LevelMap map_identity(const MackeyModule& M);
LevelMap map_compose(const PrimeField& k, const LevelMap& g, const LevelMap& f);  // g o f
LevelMap map_add(const PrimeField& k, const LevelMap& a, const LevelMap& b);
LevelMap map_scale(const PrimeField& k, PrimeField::value_type s, const LevelMap& a);
bool map_is_zero(const PrimeField& k, const LevelMap& a);
bool is_module_map(const MackeyModule& src, const MackeyModule& dst, const LevelMap& f);

// Flattened coordinates: levels in increasing id order, row-major.
FpVec map_flatten(const LevelMap& f);
LevelMap map_unflatten(const MackeyModule& src, const MackeyModule& dst, const FpVec& v);
int map_space_dim(const MackeyModule& src, const MackeyModule& dst);

// Basis of Hom(src, dst) by solving the commutation equations.
std::vector<LevelMap> hom_basis(const MackeyModule& src, const MackeyModule& dst);
inline std::vector<LevelMap> end_basis(const MackeyModule& M) { return hom_basis(M, M); }

// Algebras for the subsystems used by the transfer calculus, with centricity
// measured in F.
class MackeyContext {
public:
    explicit MackeyContext(FusionPtr F);

    const FusionSystem& system() const { return *F_; }
    FusionPtr system_ptr() const { return F_; }
    MackeyPtr algebra() const { return full_; }
    MackeyPtr subgroup_algebra(int H) const;    // F_H(H)
    MackeyPtr normalizer_algebra(int H) const;  // N_F(H)

private:
    FusionPtr F_;
    MackeyPtr full_;
    mutable std::mutex mu_;
    mutable std::map<int, MackeyPtr> sub_, norm_;
};

// Endomorphisms of restrictions are LevelMaps indexed by the same subgroup ids,
// meaningful at the levels of the subsystem. end_restrict zeroes every level
// outside the subsystem.
LevelMap end_restrict(const MackeyModule& M, const FusionSystem& sub, const LevelMap& f);
// tr_H(f)_K = sum over (A, phi) in [H x K] of I c_phi f_A c_phi^-1 R, for f
// an endomorphism of the restriction to F_H(H).
LevelMap end_transfer(const MackeyModule& M, int H, const LevelMap& f);
// ^phi f = c_phi f c_phi^-1, moving an endomorphism living at levels <= H to
// levels <= phi(H).
LevelMap end_conjugate(const MackeyModule& M, const Hom& phi, const LevelMap& f);
// The Burnside action of the class of H: tr_H r_H applied to f.
LevelMap burnside_class_act(const MackeyModule& M, int H, const LevelMap& f);

// The theta maps for M_H = M restricted to F_H(H) and induced back.
struct ThetaMaps {
    MackeyModule induced;  // M_H
    LevelMap down;         // theta_H : M_H -> M
    LevelMap up;           // theta^H : M -> M_H
};
ThetaMaps theta_maps(const MackeyContext& ctx, const MackeyModule& M, int H);

// Tr_H as a subspace of flattened End(M).
Subspace<PrimeField> transfer_image(const MackeyContext& ctx, const MackeyModule& M, int H);
Subspace<PrimeField> transfer_image(const MackeyContext& ctx, const MackeyModule& M, const std::vector<int>& family);

// tr_{N_F}^F for f in End(M restricted to N_F(H)): the inverse of the class of
// S in the centric Burnside ring applied to the sum over (A, phi) in [N_F x S]
// of tr ^phi-hat r(f), phi-hat the extension of phi to N_phi. Throws when
// that class is not invertible over k.
LevelMap transfer_from_normalizer(const MackeyContext& ctx, const MackeyModule& M, int H, const LevelMap& f);

struct ProjectivityResult {
    bool projective = false;
    // (H, f_H) with sum of tr_H(f_H) equal to Id_M; f_H lives in End of the
    // restriction to F_H(H).
    std::vector<std::pair<int, LevelMap>> witness;
};
// Id_M in Tr_X, decided by a linear solve.
ProjectivityResult relative_projectivity(const MackeyContext& ctx, const MackeyModule& M,
                                         const std::vector<int>& family);

struct DefectData {
    std::vector<int> defect_set;     // class representatives, sorted
    std::vector<int> defect_groups;  // maximal classes
    std::optional<int> vertex;       // fully normalized representative
};
// Subconjugacy-closed family generated by the given subgroups, as sorted
// centric class representatives.
std::vector<int> family_closure(const FusionSystem& F, const std::vector<int>& gens);
DefectData defect_data(const MackeyContext& ctx, const MackeyModule& M);

// Module dump with sparse action triples in basis order.
std::string module_json(const MackeyModule& M);

}  // namespace fuscomp
