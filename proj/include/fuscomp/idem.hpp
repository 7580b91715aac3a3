// Finite-dimensional algebras over F_p: Jacobson radical, decomposition into
// local idempotents, conjugacy of idempotents, near isomorphisms, and the
// correspondence of local idempotents through a pair of near isomorphisms.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuscomp/linalg.hpp"
#include "fuscomp/mackeymod.hpp"

namespace fuscomp {

// A subalgebra of n x n matrices over F_p, kept with a reduced basis so that
// elements are coordinate vectors.
class FiniteAlgebra {
public:
    FiniteAlgebra() = default;
    // Spanning set of matrices, assumed closed under products. A linearly
    // independent set is kept as the basis; otherwise the echelon basis is used.
    FiniteAlgebra(PrimeField k, int n, const std::vector<FpMat>& span);
    // Abstract algebra from structure constants table[i][j] = coords of e_i e_j,
    // realized on its unitalization so the representation is faithful.
    static FiniteAlgebra from_table(PrimeField k, int d, const std::vector<std::vector<FpVec>>& table);

    const PrimeField& field() const { return k_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int rep_dim() const { return n_; }
    const FpMat& basis_matrix(int i) const { return basis_[i]; }

    FpVec zero() const { return FpVec(dim(), k_.zero()); }
    FpVec unit_vector(int i) const;
    std::optional<FpVec> one() const;
    FpMat matrix(const FpVec& x) const;
    std::optional<FpVec> coords(const FpMat& m) const;
    FpVec from_matrix(const FpMat& m) const;  // throws outside the algebra
    FpVec mul(const FpVec& x, const FpVec& y) const;
    FpVec add(const FpVec& x, const FpVec& y) const;
    FpVec sub(const FpVec& x, const FpVec& y) const;
    FpVec structure(int i, int j) const { return mul(unit_vector(i), unit_vector(j)); }
    bool is_idempotent(const FpVec& e) const { return mul(e, e) == e; }
    bool is_nilpotent(const FpVec& x) const;

    // Subspaces of coordinates.
    Subspace<PrimeField> span(const std::vector<FpVec>& v) const { return Subspace<PrimeField>(k_, dim(), v); }
    Subspace<PrimeField> whole() const;
    // x A y as a subspace.
    Subspace<PrimeField> corner(const FpVec& x, const FpVec& y) const;
    bool is_two_sided_ideal(const Subspace<PrimeField>& I) const;
    // {x y : x in X, y in Y} spanned.
    Subspace<PrimeField> product_space(const Subspace<PrimeField>& X, const Subspace<PrimeField>& Y) const;

    // Jacobson radical by the trace-form filtration: successive kernels of the
    // p-power trace forms on the faithful representation.
    const Subspace<PrimeField>& radical() const;

private:
    PrimeField k_{2};
    int n_ = 0;
    std::vector<FpMat> basis_;
    Subspace<PrimeField> span_;  // flattened, echelon form
    FpMat T_;                    // echelon coordinates to basis coordinates
    mutable std::optional<Subspace<PrimeField>> radical_;
};

// The algebra eAe on the space eV, for an idempotent e.
FiniteAlgebra corner_algebra(const FiniteAlgebra& A, const FpVec& e);
// e A e modulo its radical is a field.
bool is_local_idempotent(const FiniteAlgebra& A, const FpVec& e);

struct IdempotentDecomposition {
    std::vector<FpVec> idempotents;   // orthogonal, local, summing to the input
    std::vector<int> corner_dims;     // dim e_i A e_i
    std::uint64_t seed = 0;
};

// Default seed for the splitting-element search.
constexpr std::uint64_t kDefaultSeed = 20240607;

IdempotentDecomposition decompose_idempotent(const FiniteAlgebra& A, const FpVec& e,
                                             std::uint64_t seed = kDefaultSeed);
IdempotentDecomposition decompose_identity(const FiniteAlgebra& A, std::uint64_t seed = kDefaultSeed);
// Empty string when the decomposition is valid, otherwise the failed check.
std::string check_decomposition(const FiniteAlgebra& A, const FpVec& e, const IdempotentDecomposition& d);

// Local idempotents e, f are conjugate iff some x in eAf, y in fAe has xy
// invertible in eAe.
bool local_idempotents_conjugate(const FiniteAlgebra& A, const FpVec& e, const FpVec& f);
// Multiplicities of conjugacy classes of local summands; e is conjugate to f
// when they agree, and e is conjugate to a summand of f when they are dominated.
bool idempotents_conjugate(const FiniteAlgebra& A, const FpVec& e, const FpVec& f, std::uint64_t seed = kDefaultSeed);
bool idempotent_dominated(const FiniteAlgebra& A, const FpVec& e, const FpVec& f, std::uint64_t seed = kDefaultSeed);

// A / I for a two-sided ideal I; proj receives the projection matrix.
FiniteAlgebra quotient_algebra(const FiniteAlgebra& A, const Subspace<PrimeField>& I, FpMat* proj = nullptr);
// f : A -> B given by its matrix in coordinates (dim B x dim A).
bool is_ring_morphism(const FiniteAlgebra& A, const FiniteAlgebra& B, const FpMat& f);
bool is_near_isomorphism(const FiniteAlgebra& A, const FiniteAlgebra& B, const FpMat& f);

// Data of the endomorphism correspondence: ideals C, J of A, I of C, K of B,
// f : A -> B (used on C) and g : B -> A, all in coordinates.
struct CorrespondenceData {
    const FiniteAlgebra* A = nullptr;
    const FiniteAlgebra* B = nullptr;
    Subspace<PrimeField> C, I, J, K;
    FpMat f, g;
};

struct Correspondent {
    FpVec a;                       // the distinguished local summand of g(b)
    std::vector<FpVec> summands;   // decomposition of g(b)
    int index = -1;
    FpVec g_minus_a;               // g(b) - a, lies in J
    FpVec fa_minus_b;              // f(a) - b, lies in K
};

// Checks conditions (1)-(7) on the data (throwing with the condition number
// on failure), then decomposes g(b) and returns the unique summand in C but
// not in J.
Correspondent near_iso_correspond(const CorrespondenceData& d, const FpVec& b, std::uint64_t seed = kDefaultSeed);

// End(M) as a matrix algebra on the total space of M (block diagonal by level).
FiniteAlgebra end_algebra(const MackeyModule& M);
FpVec end_coords(const FiniteAlgebra& E, const MackeyModule& M, const LevelMap& f);
LevelMap end_element(const FiniteAlgebra& E, const MackeyModule& M, const FpVec& x);

// Summand I_e M for an idempotent endomorphism e.
MackeyModule image_module(const MackeyModule& M, const LevelMap& e);
// Isomorphism and summand tests through idempotents of End(a + b).
bool modules_isomorphic(const MackeyModule& a, const MackeyModule& b, std::uint64_t seed = kDefaultSeed);
bool is_summand_of(const MackeyModule& a, const MackeyModule& b, std::uint64_t seed = kDefaultSeed);
bool is_indecomposable(const MackeyModule& M);

}  // namespace fuscomp
