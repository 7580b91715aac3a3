// Exact dense linear algebra over a prime field or the rationals.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuscomp/error.hpp"

namespace fuscomp {

struct PrimeField {
    using value_type = uint32_t;
    uint32_t p = 2;

    explicit PrimeField(uint32_t prime = 2) : p(prime) {}
    value_type zero() const { return 0; }
    value_type one() const { return 1 % p; }
    value_type from_int(long long v) const {
        long long r = v % static_cast<long long>(p);
        return static_cast<value_type>(r < 0 ? r + p : r);
    }
    // Reduction of a/b; fails when p divides b.
    value_type from_fraction(long long a, long long b) const {
        value_type d = from_int(b);
        require(d != 0, "linalg", "denominator divisible by the characteristic");
        return mul(from_int(a), inv(d));
    }
    value_type add(value_type a, value_type b) const { return static_cast<value_type>((uint64_t{a} + b) % p); }
    value_type sub(value_type a, value_type b) const { return static_cast<value_type>((uint64_t{a} + p - b) % p); }
    value_type mul(value_type a, value_type b) const { return static_cast<value_type>((uint64_t{a} * b) % p); }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type inv(value_type a) const {
        require(a != 0, "linalg", "inverse of zero");
        // Fermat
        uint64_t r = 1, b = a, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<value_type>(r);
    }
    bool is_zero(value_type a) const { return a == 0; }
    int characteristic() const { return static_cast<int>(p); }
    std::string str(value_type a) const { return std::to_string(a); }
    long long to_int(value_type a) const { return a; }
};

struct RationalField {
    using value_type = mpq_class;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long long v) const { return mpq_class(static_cast<long>(v)); }
    value_type from_fraction(long long a, long long b) const {
        mpq_class q(static_cast<long>(a), static_cast<long>(b));
        q.canonicalize();
        return q;
    }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const {
        require(a != 0, "linalg", "inverse of zero");
        return 1 / a;
    }
    bool is_zero(const value_type& a) const { return a == 0; }
    int characteristic() const { return 0; }
    std::string str(const value_type& a) const { return a.get_str(); }
};

template <class K>
struct Matrix {
    using T = typename K::value_type;
    int rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(int r, int c, const T& z) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, z) {}
    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }
};

template <class K>
using Vec = std::vector<typename K::value_type>;

template <class K>
Matrix<K> mat_zero(const K& k, int r, int c) {
    return Matrix<K>(r, c, k.zero());
}

template <class K>
Matrix<K> mat_identity(const K& k, int n) {
    Matrix<K> m(n, n, k.zero());
    for (int i = 0; i < n; ++i) m(i, i) = k.one();
    return m;
}

template <class K>
bool mat_is_zero(const K& k, const Matrix<K>& m) {
    for (const auto& x : m.a)
        if (!k.is_zero(x)) return false;
    return true;
}

template <class K>
Matrix<K> mat_mul(const K& k, const Matrix<K>& A, const Matrix<K>& B) {
    require(A.cols == B.rows, "linalg", "matrix shape mismatch in product");
    Matrix<K> C(A.rows, B.cols, k.zero());
    for (int i = 0; i < A.rows; ++i)
        for (int l = 0; l < A.cols; ++l) {
            const auto& x = A(i, l);
            if (k.is_zero(x)) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) = k.add(C(i, j), k.mul(x, B(l, j)));
        }
    return C;
}

template <class K>
Matrix<K> mat_add(const K& k, const Matrix<K>& A, const Matrix<K>& B) {
    require(A.rows == B.rows && A.cols == B.cols, "linalg", "matrix shape mismatch in sum");
    Matrix<K> C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = k.add(C.a[i], B.a[i]);
    return C;
}

template <class K>
Matrix<K> mat_sub(const K& k, const Matrix<K>& A, const Matrix<K>& B) {
    require(A.rows == B.rows && A.cols == B.cols, "linalg", "matrix shape mismatch in difference");
    Matrix<K> C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = k.sub(C.a[i], B.a[i]);
    return C;
}

template <class K>
Matrix<K> mat_scale(const K& k, const typename K::value_type& s, const Matrix<K>& A) {
    Matrix<K> C = A;
    for (auto& x : C.a) x = k.mul(s, x);
    return C;
}

template <class K>
Vec<K> mat_vec(const K& k, const Matrix<K>& A, const Vec<K>& v) {
    require(static_cast<int>(v.size()) == A.cols, "linalg", "matrix-vector shape mismatch");
    Vec<K> out(A.rows, k.zero());
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (!k.is_zero(v[j])) out[i] = k.add(out[i], k.mul(A(i, j), v[j]));
    return out;
}

template <class K>
Matrix<K> transpose(const Matrix<K>& A) {
    Matrix<K> T(A.cols, A.rows, typename K::value_type{});
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

// Row-reduce in place to reduced echelon form; returns pivot columns.
template <class K>
std::vector<int> rref(const K& k, Matrix<K>& A) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < A.cols && r < A.rows; ++c) {
        int s = -1;
        for (int i = r; i < A.rows; ++i)
            if (!k.is_zero(A(i, c))) { s = i; break; }
        if (s < 0) continue;
        if (s != r)
            for (int j = 0; j < A.cols; ++j) std::swap(A(s, j), A(r, j));
        auto iv = k.inv(A(r, c));
        for (int j = c; j < A.cols; ++j) A(r, j) = k.mul(A(r, j), iv);
        for (int i = 0; i < A.rows; ++i) {
            if (i == r || k.is_zero(A(i, c))) continue;
            auto f = A(i, c);
            for (int j = c; j < A.cols; ++j) A(i, j) = k.sub(A(i, j), k.mul(f, A(r, j)));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class K>
int rank(const K& k, Matrix<K> A) {
    return static_cast<int>(rref(k, A).size());
}

// Columns form a basis of {x : A x = 0}.
template <class K>
Matrix<K> nullspace(const K& k, Matrix<K> A) {
    auto piv = rref(k, A);
    std::vector<char> is_piv(A.cols, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<int> free;
    for (int c = 0; c < A.cols; ++c)
        if (!is_piv[c]) free.push_back(c);
    Matrix<K> N(A.cols, static_cast<int>(free.size()), k.zero());
    for (std::size_t f = 0; f < free.size(); ++f) {
        N(free[f], static_cast<int>(f)) = k.one();
        for (std::size_t r = 0; r < piv.size(); ++r) N(piv[r], static_cast<int>(f)) = k.neg(A(static_cast<int>(r), free[f]));
    }
    return N;
}

// Some X with A X = B, if one exists.
template <class K>
std::optional<Matrix<K>> solve(const K& k, const Matrix<K>& A, const Matrix<K>& B) {
    require(A.rows == B.rows, "linalg", "solve: row mismatch");
    Matrix<K> M(A.rows, A.cols + B.cols, k.zero());
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) M(i, A.cols + j) = B(i, j);
    }
    auto piv = rref(k, M);
    Matrix<K> X(A.cols, B.cols, k.zero());
    for (std::size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] >= A.cols) return std::nullopt;
        for (int j = 0; j < B.cols; ++j) X(piv[r], j) = M(static_cast<int>(r), A.cols + j);
    }
    return X;
}

template <class K>
std::optional<Matrix<K>> inverse(const K& k, const Matrix<K>& A) {
    if (A.rows != A.cols) return std::nullopt;
    auto X = solve(k, A, mat_identity(k, A.rows));
    if (!X || mat_mul(k, A, *X) != mat_identity(k, A.rows)) return std::nullopt;
    return X;
}

// A subspace of K^n kept as a reduced row-echelon basis.
template <class K>
class Subspace {
public:
    Subspace() = default;
    Subspace(const K& k, int n) : k_(k), n_(n), basis_(0, n, k.zero()) {}
    Subspace(const K& k, int n, const std::vector<Vec<K>>& gens) : k_(k), n_(n) {
        Matrix<K> M(static_cast<int>(gens.size()), n, k.zero());
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (int j = 0; j < n; ++j) M(static_cast<int>(i), j) = gens[i][j];
        reduce(M);
    }

    int ambient() const { return n_; }
    int dim() const { return basis_.rows; }
    Vec<K> vec(int i) const {
        return Vec<K>(basis_.a.begin() + static_cast<std::ptrdiff_t>(i) * n_,
                      basis_.a.begin() + static_cast<std::ptrdiff_t>(i + 1) * n_);
    }
    std::vector<Vec<K>> vectors() const {
        std::vector<Vec<K>> out;
        for (int i = 0; i < dim(); ++i) out.push_back(vec(i));
        return out;
    }
    const std::vector<int>& pivots() const { return piv_; }

    // Coordinates of v in this basis, or nullopt when v is outside.
    std::optional<Vec<K>> coords(const Vec<K>& v) const {
        Vec<K> r = v;
        Vec<K> c(dim(), k_.zero());
        for (int i = 0; i < dim(); ++i) {
            auto f = r[piv_[i]];
            if (k_.is_zero(f)) continue;
            c[i] = f;
            for (int j = 0; j < n_; ++j) r[j] = k_.sub(r[j], k_.mul(f, basis_(i, j)));
        }
        for (const auto& x : r)
            if (!k_.is_zero(x)) return std::nullopt;
        return c;
    }
    bool contains(const Vec<K>& v) const { return coords(v).has_value(); }
    bool contains(const Subspace& o) const {
        for (int i = 0; i < o.dim(); ++i)
            if (!contains(o.vec(i))) return false;
        return true;
    }
    Subspace plus(const Subspace& o) const {
        auto g = vectors();
        auto h = o.vectors();
        g.insert(g.end(), h.begin(), h.end());
        return Subspace(k_, n_, g);
    }
    Subspace meet(const Subspace& o) const {
        // Solve sum a_i u_i = sum b_j w_j.
        int d1 = dim(), d2 = o.dim();
        Matrix<K> M(n_, d1 + d2, k_.zero());
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < n_; ++j) M(j, i) = basis_(i, j);
        for (int i = 0; i < d2; ++i)
            for (int j = 0; j < n_; ++j) M(j, d1 + i) = k_.neg(o.basis_(i, j));
        Matrix<K> N = nullspace(k_, M);
        std::vector<Vec<K>> gens;
        for (int c = 0; c < N.cols; ++c) {
            Vec<K> v(n_, k_.zero());
            for (int i = 0; i < d1; ++i)
                for (int j = 0; j < n_; ++j) v[j] = k_.add(v[j], k_.mul(N(i, c), basis_(i, j)));
            gens.push_back(std::move(v));
        }
        return Subspace(k_, n_, gens);
    }
    bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }

private:
    void reduce(Matrix<K>& M) {
        piv_ = rref(k_, M);
        basis_ = Matrix<K>(static_cast<int>(piv_.size()), n_, k_.zero());
        for (int i = 0; i < basis_.rows; ++i)
            for (int j = 0; j < n_; ++j) basis_(i, j) = M(i, j);
    }

    K k_{};
    int n_ = 0;
    Matrix<K> basis_;
    std::vector<int> piv_;
};

}  // namespace fuscomp
