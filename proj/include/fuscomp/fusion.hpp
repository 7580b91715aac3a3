// Fusion systems over a finite p-group, with materialized hom sets.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fuscomp/grp.hpp"

namespace fuscomp {

// The p-group S with its subgroup lattice. Every fusion system in one
// computation (F, a normalizer subsystem, F_H(H), ...) shares one universe.
struct Universe {
    std::shared_ptr<const FiniteGroup> S;
    std::shared_ptr<const Lattice> L;

    static std::shared_ptr<const Universe> make(std::shared_ptr<const FiniteGroup> S);
    const FiniteGroup& G() const { return *S; }
    const Lattice& lat() const { return *L; }
    const std::vector<int>& elems(int id) const { return L->sub(id).elems; }
    int order(int id) const { return L->order(id); }
};

// Injective homomorphism src -> S; table[i] is the image of the i-th element of src.
struct Hom {
    int src = -1;
    int img = -1;
    std::vector<int> table;

    bool operator==(const Hom& o) const { return src == o.src && table == o.table; }
    bool operator!=(const Hom& o) const { return !(*this == o); }
    bool operator<(const Hom& o) const { return src != o.src ? src < o.src : table < o.table; }
};

int hom_apply(const Universe& U, const Hom& f, int x);
Hom hom_identity(const Universe& U, int A);
Hom hom_conj(const Universe& U, int g, int A);  // x -> g x g^-1 on A
Hom hom_compose(const Universe& U, const Hom& psi, const Hom& phi);  // psi o phi
Hom hom_restrict(const Universe& U, const Hom& f, int C);
Hom hom_inverse(const Universe& U, const Hom& f);  // img -> src
int hom_image(const Universe& U, const Hom& f, int C);
// Build from generator images; empty result if the assignment does not extend.
bool hom_from_generators(const Universe& U, int A, const std::vector<int>& gens,
                         const std::vector<int>& images, Hom& out);
// Minimal member of {c_b o f : b in B}.
Hom orbit_canonical(const Universe& U, const Hom& f, int B);
bool is_injective_hom(const Universe& U, const Hom& f);

class FusionSystem {
public:
    FusionSystem(std::shared_ptr<const Universe> U, int top, int p, std::vector<std::vector<Hom>> homs,
                 std::string name);

    const Universe& U() const { return *U_; }
    std::shared_ptr<const Universe> universe() const { return U_; }
    int top() const { return top_; }
    int p() const { return p_; }
    const std::string& name() const { return name_; }

    // Subgroups of the underlying p-group, by universe id.
    const std::vector<int>& subgroups() const { return subs_; }
    bool in_system(int A) const { return U_->lat().leq(A, top_); }
    // Hom_F(A, top), sorted by table.
    const std::vector<Hom>& homs_from(int A) const { return homs_[A]; }
    std::vector<Hom> hom_set(int A, int B) const;
    std::vector<Hom> auts(int A) const { return hom_set(A, A); }
    int hom_index(const Hom& f) const;  // position in homs_from(f.src), or -1
    bool contains(const Hom& f) const { return hom_index(f) >= 0; }

    const std::vector<int>& iso_class(int A) const { return classes_[class_id_[A]]; }
    int class_id(int A) const { return class_id_[A]; }
    bool is_iso(int A, int B) const { return class_id_[A] == class_id_[B]; }
    bool subconjugate(int K, int H) const;  // K <=_F H
    bool is_centric(int A) const { return centric_[A]; }
    bool is_fully_normalized(int A) const { return fully_normalized_[A]; }
    bool is_fully_centralized(int A) const;
    // Smallest fully normalized member of the F-class of A.
    int class_rep(int A) const;
    std::vector<int> centrics() const;
    // Canonical representatives of Aut_B(B) \ Hom_F(A, B).
    std::vector<Hom> orbit_hom_set(int A, int B) const;
    // Normalizer of A in the top group.
    int normalizer_in_top(int A) const;

private:
    std::shared_ptr<const Universe> U_;
    int top_, p_;
    std::vector<std::vector<Hom>> homs_;
    std::string name_;
    std::vector<int> subs_;
    std::vector<int> class_id_;
    std::vector<std::vector<int>> classes_;
    std::vector<char> centric_, fully_normalized_;
};

using FusionPtr = std::shared_ptr<const FusionSystem>;

// F_S(G): S is given by generators living in G's permutation domain.
FusionPtr fusion_from_group(const FiniteGroup& ambient, const std::vector<Perm>& S_gens, int p,
                            const std::string& name = "");
// Same but reusing an existing universe; top is the id of the p-subgroup used.
FusionPtr fusion_from_group(const FiniteGroup& ambient, std::shared_ptr<const Universe> U, int top, int p,
                            const std::string& name = "");
FusionPtr fusion_of_subgroup(std::shared_ptr<const Universe> U, int H, int p);  // F_H(H)

struct GeneratorHom {
    std::vector<int> source_gens;  // universe elements generating the source
    std::vector<int> images;
};
enum class ClosureMode { Generate, Validate };
// Closure under conjugation, composition, restriction and inverses; in Validate
// mode a missing composite is reported instead of added.
FusionPtr abstract_fusion(std::shared_ptr<const Universe> U, int p, const std::vector<GeneratorHom>& gens,
                          ClosureMode mode, const std::string& name = "");

struct SaturationReport {
    bool saturated = true;
    bool sylow_axiom = true;
    std::string failure;  // first violated condition, human-readable
};
SaturationReport check_saturation(const FusionSystem& F);
inline bool is_saturated(const FusionSystem& F) { return check_saturation(F).saturated; }

// N_phi = {x in N_S(A) : exists z in N_S(phi A), phi c_x = c_z phi on A}.
int phi_normalizer(const FusionSystem& F, const Hom& phi);

// N_F(H) over N_S(H): phi : A -> N_S(H) survives when some F-map on AH extends it
// and maps H onto H. With literal = true the condition on H is dropped.
FusionPtr normalizer_system(const FusionSystem& F, int H, bool literal = false);

// Hom-set-by-hom-set equality (same universe required).
bool same_fusion(const FusionSystem& A, const FusionSystem& B);

}  // namespace fuscomp
