// Permutation groups with full element enumeration.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace fuscomp {

// Images of 0..n-1. Composition convention: (a*b)(x) = a(b(x)).
using Perm = std::vector<int>;

struct PermHash {
    std::size_t operator()(const Perm& p) const noexcept;
};

// Bound on enumerated group orders; FUSCOMP_MAX_GROUP overrides the default.
std::size_t max_group_order();

class FiniteGroup {
public:
    FiniteGroup(std::string name, int degree, const std::vector<Perm>& generators,
                std::size_t bound = max_group_order());

    const std::string& name() const { return name_; }
    int degree() const { return degree_; }
    int order() const { return static_cast<int>(perms_.size()); }

    // Elements are indexed by their rank in the lexicographic order of
    // permutation images, so the identity is always 0.
    const Perm& perm(int i) const { return perms_[i]; }
    const std::vector<int>& generators() const { return gens_; }
    int find(const Perm& p) const;

    int mul(int a, int b) const;
    int inv(int a) const { return inv_[a]; }
    int conj(int g, int x) const { return mul(mul(g, x), inv_[g]); }  // g x g^-1
    int element_order(int a) const;

private:
    std::string name_;
    int degree_;
    std::vector<Perm> perms_;
    std::unordered_map<Perm, int, PermHash> index_;
    std::vector<int> inv_;
    std::vector<int> gens_;
    std::vector<int> table_;  // multiplication table when small enough
};

Perm compose(const Perm& a, const Perm& b);
Perm perm_from_cycles(int degree, const std::vector<std::vector<int>>& cycles_one_based);
std::vector<std::vector<int>> perm_to_cycles(const Perm& p);  // one-based

// Sorted element list of the subgroup generated by gens.
std::vector<int> generate_subgroup(const FiniteGroup& G, const std::vector<int>& gens);

// Bitset over the elements of a fixed group.
class Bits {
public:
    Bits() = default;
    explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}
    void set(int i) { w_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    bool subset_of(const Bits& o) const;
    bool operator==(const Bits& o) const { return w_ == o.w_; }
    std::size_t hash() const;
    int size() const { return n_; }

private:
    int n_ = 0;
    std::vector<uint64_t> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const noexcept { return b.hash(); }
};

struct Subgroup {
    std::vector<int> elems;  // sorted
    std::vector<int> gens;   // small generating set
    Bits bits;
    int order() const { return static_cast<int>(elems.size()); }
    bool contains(int x) const { return bits.test(x); }
};

// Every subgroup of G, ordered by size and then by sorted element list.
class Lattice {
public:
    explicit Lattice(std::shared_ptr<const FiniteGroup> G);

    const FiniteGroup& group() const { return *G_; }
    std::shared_ptr<const FiniteGroup> group_ptr() const { return G_; }
    int size() const { return static_cast<int>(subs_.size()); }
    const Subgroup& sub(int id) const { return subs_[id]; }
    int order(int id) const { return subs_[id].order(); }
    int find(const Bits& b) const;
    int find_elems(const std::vector<int>& elems) const;
    int trivial() const { return 0; }
    int whole() const { return size() - 1; }

    bool leq(int a, int b) const { return leq_[static_cast<std::size_t>(a) * subs_.size() + b]; }
    int conj(int g, int id) const { return conj_[static_cast<std::size_t>(g) * subs_.size() + id]; }  // g A g^-1
    int normalizer(int id) const { return norm_[id]; }
    int centralizer(int id) const { return cent_[id]; }
    int class_of(int id) const { return cls_[id]; }
    int num_classes() const { return ncls_; }
    // Position of x in the sorted element list of sub(id), or -1.
    int pos(int id, int x) const { return pos_[static_cast<std::size_t>(id) * G_->order() + x]; }
    int join(int a, int b) const;
    int meet(int a, int b) const;
    // Subgroup generated by a list of elements.
    int generated(const std::vector<int>& gens) const;

private:
    std::shared_ptr<const FiniteGroup> G_;
    std::vector<Subgroup> subs_;
    std::unordered_map<Bits, int, BitsHash> index_;
    std::vector<char> leq_;
    std::vector<int> conj_, norm_, cent_, cls_, pos_;
    int ncls_ = 0;
};

// One representative per double coset K x H, each the minimal element of its coset.
std::vector<int> double_coset_reps(const FiniteGroup& G, const std::vector<int>& K,
                                   const std::vector<int>& H);
// Same, inside a subgroup J given by its element list.
std::vector<int> double_coset_reps_in(const FiniteGroup& G, const std::vector<int>& J,
                                      const std::vector<int>& K, const std::vector<int>& H);

struct LocalSubgroups {
    std::vector<int> normalizer;
    std::vector<int> centralizer;
};
LocalSubgroups local_subgroups(const FiniteGroup& G, const std::vector<int>& H);

// Grows a p-subgroup one step at a time inside its normalizer, always taking the
// smallest admissible element, until the order is the full p-part of |G|.
std::vector<int> sylow_subgroup(const FiniteGroup& G, int p);

bool is_prime(long n);
bool is_p_power(long n, int p);

}  // namespace fuscomp
