#include "fuscomp/idem.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "fuscomp/error.hpp"

namespace fuscomp {

namespace {

FpVec flatten(const FpMat& m) { return m.a; }

FpMat unflatten(int n, const FpVec& v) {
    FpMat m(n, n, 0);
    m.a = v;
    return m;
}

// x^e for e >= n, by repeated squaring; enough for Fitting and nilpotency.
FpMat stable_power(const PrimeField& k, FpMat x, int n) {
    for (int e = 1; e < n; e *= 2) x = mat_mul(k, x, x);
    return x;
}

FpMat column_basis(const PrimeField& k, const FpMat& m) {
    std::vector<FpVec> cols;
    for (int c = 0; c < m.cols; ++c) {
        FpVec v(m.rows);
        for (int r = 0; r < m.rows; ++r) v[r] = m(r, c);
        cols.push_back(std::move(v));
    }
    Subspace<PrimeField> s(k, m.rows, cols);
    FpMat T(m.rows, s.dim(), k.zero());
    for (int i = 0; i < s.dim(); ++i) {
        auto v = s.vec(i);
        for (int r = 0; r < m.rows; ++r) T(r, i) = v[r];
    }
    return T;
}

// Projection onto im(z^n) along ker(z^n).
FpMat fitting_projection(const PrimeField& k, const FpMat& z) {
    const int n = z.rows;
    FpMat W = stable_power(k, z, n);
    FpMat im = column_basis(k, W);
    FpMat ker = nullspace(k, W);
    require(im.cols + ker.cols == n, "idem", "Fitting decomposition has the wrong dimension");
    FpMat T(n, n, k.zero()), D(n, n, k.zero());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < im.cols; ++c) T(r, c) = im(r, c);
        for (int c = 0; c < ker.cols; ++c) T(r, im.cols + c) = ker(r, c);
    }
    for (int i = 0; i < im.cols; ++i) D(i, i) = k.one();
    auto Ti = inverse(k, T);
    require(Ti.has_value(), "idem", "Fitting decomposition is not direct");
    return mat_mul(k, T, mat_mul(k, D, *Ti));
}

// Monic polynomials, coefficients from low to high degree.
using Poly = std::vector<uint32_t>;

bool divides(const PrimeField& k, const Poly& d, Poly a) {
    const int dd = static_cast<int>(d.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= dd; --i) {
        auto c = a[i];
        if (c == 0) continue;
        for (int j = 0; j <= dd; ++j) a[i - dd + j] = k.sub(a[i - dd + j], k.mul(c, d[j]));
    }
    for (int i = 0; i < dd; ++i)
        if (a[i]) return false;
    return true;
}

std::vector<Poly> irreducibles(const PrimeField& k) {
    const int p = k.characteristic();
    const int maxdeg = p == 2 ? 4 : p == 3 ? 3 : 2;
    std::vector<Poly> out;
    for (int deg = 1; deg <= maxdeg; ++deg) {
        long total = 1;
        for (int i = 0; i < deg; ++i) total *= p;
        for (long code = 0; code < total; ++code) {
            Poly f(deg + 1, 0);
            long c = code;
            for (int i = 0; i < deg; ++i, c /= p) f[i] = static_cast<uint32_t>(c % p);
            f[deg] = 1;
            bool irr = true;
            for (const auto& g : out)
                if (2 * (static_cast<int>(g.size()) - 1) <= deg && divides(k, g, f)) irr = false;
            if (irr) out.push_back(f);
        }
    }
    return out;
}

FpMat poly_eval(const PrimeField& k, const Poly& f, const FpMat& x, const FpMat& e) {
    FpMat r = mat_scale(k, f.back(), e);
    for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i)
        r = mat_add(k, mat_mul(k, r, x), mat_scale(k, f[i], e));
    return r;
}

// Coordinates modulo a subspace in reduced echelon form.
FpVec reduce_mod(const PrimeField& k, const Subspace<PrimeField>& I, FpVec v) {
    const auto& piv = I.pivots();
    for (int r = 0; r < I.dim(); ++r) {
        auto f = v[piv[r]];
        if (k.is_zero(f)) continue;
        auto row = I.vec(r);
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = k.sub(v[c], k.mul(f, row[c]));
    }
    return v;
}

FpVec vec_sub(const PrimeField& k, FpVec a, const FpVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = k.sub(a[i], b[i]);
    return a;
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(PrimeField k, int n, const std::vector<FpMat>& span) : k_(k), n_(n) {
    const int m = static_cast<int>(span.size());
    const int w = n * n;
    // Row-reduce [span | I] to get a basis and the change of coordinates.
    FpMat G(m, w + m, k.zero());
    for (int i = 0; i < m; ++i) {
        require(span[i].rows == n && span[i].cols == n, "idem", "algebra element of the wrong size");
        std::copy(span[i].a.begin(), span[i].a.end(), G.a.begin() + static_cast<std::ptrdiff_t>(i) * (w + m));
        G(i, w + i) = k.one();
    }
    auto piv = rref(k, G);
    int rank = 0;
    while (rank < static_cast<int>(piv.size()) && piv[rank] < w) ++rank;
    const bool independent = rank == m;
    std::vector<FpVec> rows;
    for (int r = 0; r < rank; ++r) rows.emplace_back(G.a.begin() + static_cast<std::ptrdiff_t>(r) * (w + m),
                                                     G.a.begin() + static_cast<std::ptrdiff_t>(r) * (w + m) + w);
    span_ = Subspace<PrimeField>(k, w, rows);
    if (independent) {
        // Keep the given basis; coords(v) = (echelon coords) * T.
        basis_ = span;
        T_ = FpMat(rank, m, k.zero());
        for (int r = 0; r < rank; ++r)
            for (int c = 0; c < m; ++c) T_(r, c) = G(r, w + c);
    } else {
        for (const auto& v : rows) basis_.push_back(unflatten(n, v));
        T_ = mat_identity(k, rank);
    }
}

FiniteAlgebra FiniteAlgebra::from_table(PrimeField k, int d, const std::vector<std::vector<FpVec>>& table) {
    std::vector<FpMat> L;
    for (int i = 0; i < d; ++i) {
        FpMat m(d + 1, d + 1, k.zero());
        m(i + 1, 0) = k.one();
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < d; ++t) m(t + 1, j + 1) = table[i][j][t];
        L.push_back(std::move(m));
    }
    FiniteAlgebra A(k, d + 1, L);
    require(A.dim() == d, "idem", "structure constants do not define a faithful product");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            require(A.mul(A.unit_vector(i), A.unit_vector(j)) == table[i][j], "idem",
                    "structure constants are not associative");
    return A;
}

FpVec FiniteAlgebra::unit_vector(int i) const {
    FpVec v = zero();
    v[i] = k_.one();
    return v;
}

std::optional<FpVec> FiniteAlgebra::one() const {
    if (auto u = coords(mat_identity(k_, n_))) return u;
    // Not the identity matrix (e.g. a unitalized representation): solve
    // u e_j = e_j u = e_j.
    const int d = dim();
    FpMat Mx(2 * d * d, d, k_.zero()), rhs(2 * d * d, 1, k_.zero());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const FpVec l = structure(i, j), r = structure(j, i);
            for (int t = 0; t < d; ++t) {
                Mx(j * d + t, i) = l[t];
                Mx(d * d + j * d + t, i) = r[t];
            }
        }
    for (int j = 0; j < d; ++j) rhs(j * d + j, 0) = rhs(d * d + j * d + j, 0) = k_.one();
    auto X = solve(k_, Mx, rhs);
    if (!X) return std::nullopt;
    FpVec u(d);
    for (int i = 0; i < d; ++i) u[i] = (*X)(i, 0);
    return u;
}

FpMat FiniteAlgebra::matrix(const FpVec& x) const {
    FpMat m(n_, n_, k_.zero());
    for (int i = 0; i < dim(); ++i) {
        if (k_.is_zero(x[i])) continue;
        for (std::size_t t = 0; t < m.a.size(); ++t) m.a[t] = k_.add(m.a[t], k_.mul(x[i], basis_[i].a[t]));
    }
    return m;
}

std::optional<FpVec> FiniteAlgebra::coords(const FpMat& m) const {
    auto c = span_.coords(flatten(m));
    if (!c) return std::nullopt;
    FpVec out = zero();
    for (int r = 0; r < static_cast<int>(c->size()); ++r) {
        if (k_.is_zero((*c)[r])) continue;
        for (int j = 0; j < dim(); ++j) out[j] = k_.add(out[j], k_.mul((*c)[r], T_(r, j)));
    }
    return out;
}

FpVec FiniteAlgebra::from_matrix(const FpMat& m) const {
    auto c = coords(m);
    if (!c) fail("idem", "matrix is not in the algebra");
    return *c;
}

FpVec FiniteAlgebra::mul(const FpVec& x, const FpVec& y) const {
    return from_matrix(mat_mul(k_, matrix(x), matrix(y)));
}

FpVec FiniteAlgebra::add(const FpVec& x, const FpVec& y) const {
    FpVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = k_.add(x[i], y[i]);
    return z;
}

FpVec FiniteAlgebra::sub(const FpVec& x, const FpVec& y) const { return vec_sub(k_, x, y); }

bool FiniteAlgebra::is_nilpotent(const FpVec& x) const {
    return mat_is_zero(k_, stable_power(k_, matrix(x), std::max(n_, 1)));
}

Subspace<PrimeField> FiniteAlgebra::whole() const {
    std::vector<FpVec> v;
    for (int i = 0; i < dim(); ++i) v.push_back(unit_vector(i));
    return span(v);
}

Subspace<PrimeField> FiniteAlgebra::corner(const FpVec& x, const FpVec& y) const {
    const FpMat X = matrix(x), Y = matrix(y);
    std::vector<FpVec> v;
    for (int i = 0; i < dim(); ++i) v.push_back(from_matrix(mat_mul(k_, X, mat_mul(k_, basis_[i], Y))));
    return span(v);
}

bool FiniteAlgebra::is_two_sided_ideal(const Subspace<PrimeField>& I) const {
    for (int i = 0; i < I.dim(); ++i) {
        const FpVec x = I.vec(i);
        for (int j = 0; j < dim(); ++j) {
            if (!I.contains(mul(x, unit_vector(j))) || !I.contains(mul(unit_vector(j), x))) return false;
        }
    }
    return true;
}

Subspace<PrimeField> FiniteAlgebra::product_space(const Subspace<PrimeField>& X, const Subspace<PrimeField>& Y) const {
    std::vector<FpVec> v;
    for (int i = 0; i < X.dim(); ++i)
        for (int j = 0; j < Y.dim(); ++j) v.push_back(mul(X.vec(i), Y.vec(j)));
    return span(v);
}

const Subspace<PrimeField>& FiniteAlgebra::radical() const {
    if (radical_) return *radical_;
    const int p = k_.characteristic();
    const int d = dim();
    int l = 0;
    for (long q = p; q <= n_; q *= p) ++l;
    // Current ideal as coordinate vectors.
    std::vector<FpVec> cur;
    for (int i = 0; i < d; ++i) cur.push_back(unit_vector(i));
    uint64_t pi = 1;
    for (int i = 0; i <= l && !cur.empty(); ++i, pi *= p) {
        const uint64_t q = pi * p;
        // g_i(a) = (Tr(lift(a)^{p^i}) mod p^{i+1}) / p^i.
        auto g = [&](const FpMat& a) -> uint32_t {
            std::vector<uint64_t> x(a.a.begin(), a.a.end());
            std::vector<uint64_t> r(x.size());
            for (uint64_t e = 1; e < pi; e *= p) {
                // x <- x^p mod q
                std::vector<uint64_t> acc = x;
                for (int t = 1; t < p; ++t) {
                    std::fill(r.begin(), r.end(), 0);
                    for (int a1 = 0; a1 < n_; ++a1)
                        for (int b1 = 0; b1 < n_; ++b1) {
                            uint64_t v = acc[a1 * n_ + b1];
                            if (!v) continue;
                            for (int c1 = 0; c1 < n_; ++c1) r[a1 * n_ + c1] = (r[a1 * n_ + c1] + v * x[b1 * n_ + c1]) % q;
                        }
                    acc = r;
                }
                x = acc;
            }
            uint64_t tr = 0;
            for (int t = 0; t < n_; ++t) tr = (tr + x[t * n_ + t]) % q;
            require(tr % pi == 0, "idem", "trace form is not divisible as expected");
            return static_cast<uint32_t>((tr / pi) % p);
        };
        const int m = static_cast<int>(cur.size());
        FpMat Gm(d, m, k_.zero());
        std::vector<FpMat> cm;
        for (const auto& u : cur) cm.push_back(matrix(u));
        for (int b = 0; b < d; ++b)
            for (int j = 0; j < m; ++j) Gm(b, j) = g(mat_mul(k_, cm[j], basis_[b]));
        FpMat N = nullspace(k_, Gm);
        std::vector<FpVec> next;
        for (int c = 0; c < N.cols; ++c) {
            FpVec v = zero();
            for (int j = 0; j < m; ++j)
                if (!k_.is_zero(N(j, c)))
                    for (int t = 0; t < d; ++t) v[t] = k_.add(v[t], k_.mul(N(j, c), cur[j][t]));
            next.push_back(std::move(v));
        }
        cur = std::move(next);
    }
    radical_ = span(cur);
    return *radical_;
}

FiniteAlgebra corner_algebra(const FiniteAlgebra& A, const FpVec& e) {
    const PrimeField& k = A.field();
    const FpMat E = A.matrix(e);
    const FpMat T = column_basis(k, E);
    std::vector<FpMat> mats;
    const auto C = A.corner(e, e);
    for (int i = 0; i < C.dim(); ++i) {
        FpMat z = A.matrix(C.vec(i));
        auto Y = solve(k, T, mat_mul(k, z, T));
        require(Y.has_value(), "idem", "corner element does not preserve the image of the idempotent");
        mats.push_back(*Y);
    }
    return FiniteAlgebra(k, T.cols, mats);
}

bool is_local_idempotent(const FiniteAlgebra& A, const FpVec& e) {
    const PrimeField& k = A.field();
    if (std::all_of(e.begin(), e.end(), [&](auto x) { return k.is_zero(x); })) return false;
    if (!A.is_idempotent(e)) return false;
    FiniteAlgebra C = corner_algebra(A, e);
    const auto& R = C.radical();
    const int m = C.dim() - R.dim();
    if (m <= 0) return false;
    for (int i = 0; i < C.dim(); ++i)
        for (int j = i + 1; j < C.dim(); ++j) {
            auto x = C.unit_vector(i), y = C.unit_vector(j);
            if (!R.contains(C.sub(C.mul(x, y), C.mul(y, x)))) return false;
        }
    // Commutative semisimple quotient: the number of field factors is the
    // dimension of the Frobenius-fixed subalgebra.
    std::vector<FpVec> v = R.vectors();
    for (int i = 0; i < C.dim(); ++i) {
        FpVec x = C.unit_vector(i), xp = x;
        for (int t = 1; t < k.characteristic(); ++t) xp = C.mul(xp, x);
        v.push_back(C.sub(xp, x));
    }
    const int rank = Subspace<PrimeField>(k, C.dim(), v).dim() - R.dim();
    return m - rank == 1;
}

namespace {

bool is_zero_vec(const PrimeField& k, const FpVec& v) {
    return std::all_of(v.begin(), v.end(), [&](auto x) { return k.is_zero(x); });
}

// A nontrivial idempotent P in eAe with P != e, found through Fitting
// projections of polynomials in random elements.
std::optional<FpVec> try_split(const FiniteAlgebra& A, const FpVec& e, std::mt19937_64& rng, int attempts,
                               const std::vector<Poly>& polys) {
    const PrimeField& k = A.field();
    const int p = k.characteristic();
    const FpMat E = A.matrix(e);
    const int re = rank(k, E);
    if (re <= 1) return std::nullopt;
    for (int a = 0; a < attempts; ++a) {
        FpVec r = A.zero();
        for (auto& c : r) c = static_cast<uint32_t>(rng() % static_cast<uint64_t>(p));
        const FpMat x = mat_mul(k, E, mat_mul(k, A.matrix(r), E));
        for (const auto& f : polys) {
            FpMat z = poly_eval(k, f, x, E);
            FpMat P = fitting_projection(k, z);
            const int rp = rank(k, P);
            if (rp == 0 || rp == re) continue;
            return A.from_matrix(P);
        }
    }
    return std::nullopt;
}

std::vector<uint32_t> sort_key(const FiniteAlgebra& A, const FpVec& e) {
    std::vector<uint32_t> key{static_cast<uint32_t>(A.corner(e, e).dim())};
    key.insert(key.end(), e.begin(), e.end());
    return key;
}

}  // namespace

IdempotentDecomposition decompose_idempotent(const FiniteAlgebra& A, const FpVec& e, std::uint64_t seed) {
    const PrimeField& k = A.field();
    require(A.is_idempotent(e), "idem", "element to decompose is not idempotent");
    IdempotentDecomposition out;
    out.seed = seed;
    if (is_zero_vec(k, e)) return out;
    std::mt19937_64 rng(seed);
    const auto polys = irreducibles(k);
    std::vector<FpVec> work{e};
    while (!work.empty()) {
        FpVec x = work.back();
        work.pop_back();
        auto P = try_split(A, x, rng, 4, polys);
        if (!P && !is_local_idempotent(A, x)) {
            P = try_split(A, x, rng, 400, polys);
            if (!P) fail("idem", "no splitting element found for a non-local idempotent (seed " + std::to_string(seed) + ")");
        }
        if (P) {
            work.push_back(A.sub(x, *P));
            work.push_back(*P);
        } else {
            out.idempotents.push_back(std::move(x));
        }
    }
    std::sort(out.idempotents.begin(), out.idempotents.end(),
              [&](const FpVec& a, const FpVec& b) { return sort_key(A, a) < sort_key(A, b); });
    for (const auto& x : out.idempotents) out.corner_dims.push_back(A.corner(x, x).dim());
    return out;
}

IdempotentDecomposition decompose_identity(const FiniteAlgebra& A, std::uint64_t seed) {
    auto one = A.one();
    require(one.has_value(), "idem", "algebra has no unit");
    return decompose_idempotent(A, *one, seed);
}

std::string check_decomposition(const FiniteAlgebra& A, const FpVec& e, const IdempotentDecomposition& d) {
    FpVec sum = A.zero();
    for (std::size_t i = 0; i < d.idempotents.size(); ++i) {
        const auto& x = d.idempotents[i];
        if (!A.is_idempotent(x)) return "summand " + std::to_string(i) + " is not idempotent";
        if (!is_local_idempotent(A, x)) return "summand " + std::to_string(i) + " is not local";
        for (std::size_t j = 0; j < d.idempotents.size(); ++j)
            if (i != j && !is_zero_vec(A.field(), A.mul(x, d.idempotents[j])))
                return "summands " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal";
        sum = A.add(sum, x);
    }
    if (sum != e) return "summands do not add up to the decomposed idempotent";
    return "";
}

bool local_idempotents_conjugate(const FiniteAlgebra& A, const FpVec& e, const FpVec& f) {
    const auto X = A.corner(e, f);
    const auto Y = A.corner(f, e);
    for (int i = 0; i < X.dim(); ++i)
        for (int j = 0; j < Y.dim(); ++j)
            if (!A.is_nilpotent(A.mul(X.vec(i), Y.vec(j)))) return true;
    return false;
}

namespace {

// Class multiplicities of local summands of e and f under conjugacy.
std::pair<std::vector<int>, std::vector<int>> class_counts(const FiniteAlgebra& A, const FpVec& e, const FpVec& f,
                                                           std::uint64_t seed) {
    auto de = decompose_idempotent(A, e, seed).idempotents;
    auto df = decompose_idempotent(A, f, seed).idempotents;
    std::vector<FpVec> all = de;
    all.insert(all.end(), df.begin(), df.end());
    std::vector<int> cls(all.size(), -1);
    int ncls = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = ncls;
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (cls[j] < 0 && A.corner(all[i], all[i]).dim() == A.corner(all[j], all[j]).dim() &&
                local_idempotents_conjugate(A, all[i], all[j]))
                cls[j] = ncls;
        ++ncls;
    }
    std::vector<int> ce(ncls, 0), cf(ncls, 0);
    for (std::size_t i = 0; i < all.size(); ++i) (i < de.size() ? ce : cf)[cls[i]]++;
    return {ce, cf};
}

}  // namespace

bool idempotents_conjugate(const FiniteAlgebra& A, const FpVec& e, const FpVec& f, std::uint64_t seed) {
    auto [ce, cf] = class_counts(A, e, f, seed);
    return ce == cf;
}

bool idempotent_dominated(const FiniteAlgebra& A, const FpVec& e, const FpVec& f, std::uint64_t seed) {
    auto [ce, cf] = class_counts(A, e, f, seed);
    for (std::size_t i = 0; i < ce.size(); ++i)
        if (ce[i] > cf[i]) return false;
    return true;
}

FiniteAlgebra quotient_algebra(const FiniteAlgebra& A, const Subspace<PrimeField>& I, FpMat* proj) {
    const PrimeField& k = A.field();
    const int d = A.dim();
    std::vector<char> is_piv(d, 0);
    for (int c : I.pivots()) is_piv[c] = 1;
    std::vector<int> free;
    for (int c = 0; c < d; ++c)
        if (!is_piv[c]) free.push_back(c);
    const int m = static_cast<int>(free.size());
    auto to_q = [&](const FpVec& v) {
        FpVec r = reduce_mod(k, I, v);
        FpVec out(m);
        for (int i = 0; i < m; ++i) out[i] = r[free[i]];
        return out;
    };
    if (proj) {
        *proj = FpMat(m, d, k.zero());
        for (int c = 0; c < d; ++c) {
            auto q = to_q(A.unit_vector(c));
            for (int r = 0; r < m; ++r) (*proj)(r, c) = q[r];
        }
    }
    std::vector<std::vector<FpVec>> table(m, std::vector<FpVec>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) table[i][j] = to_q(A.mul(A.unit_vector(free[i]), A.unit_vector(free[j])));
    return FiniteAlgebra::from_table(k, m, table);
}

bool is_ring_morphism(const FiniteAlgebra& A, const FiniteAlgebra& B, const FpMat& f) {
    const PrimeField& k = A.field();
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            auto x = A.unit_vector(i), y = A.unit_vector(j);
            if (mat_vec(k, f, A.mul(x, y)) != B.mul(mat_vec(k, f, x), mat_vec(k, f, y))) return false;
        }
    return true;
}

bool is_near_isomorphism(const FiniteAlgebra& A, const FiniteAlgebra& B, const FpMat& f) {
    const PrimeField& k = A.field();
    if (f.rows != B.dim() || f.cols != A.dim()) return false;
    if (!is_ring_morphism(A, B, f)) return false;
    if (rank(k, f) != B.dim()) return false;
    FpMat N = nullspace(k, f);
    for (int c = 0; c < N.cols; ++c) {
        FpVec x(A.dim());
        for (int r = 0; r < A.dim(); ++r) x[r] = N(r, c);
        for (int i = 0; i < A.dim(); ++i) {
            if (!is_zero_vec(k, A.mul(A.unit_vector(i), x)) || !is_zero_vec(k, A.mul(x, A.unit_vector(i)))) return false;
        }
    }
    return true;
}

Correspondent near_iso_correspond(const CorrespondenceData& d, const FpVec& b, std::uint64_t seed) {
    const FiniteAlgebra& A = *d.A;
    const FiniteAlgebra& B = *d.B;
    const PrimeField& k = A.field();
    auto f = [&](const FpVec& x) { return mat_vec(k, d.f, x); };
    auto g = [&](const FpVec& x) { return mat_vec(k, d.g, x); };
    auto cond = [](bool ok, int n, const std::string& what) {
        if (!ok) fail("idem", "condition (" + std::to_string(n) + ") fails: " + what);
    };

    const auto CJ = d.C.meet(d.J);
    cond(CJ.contains(d.I), 1, "I is not contained in C meet J");
    cond(d.I.contains(A.product_space(CJ, d.C)) && d.I.contains(A.product_space(d.C, CJ)), 1,
         "(C meet J) C or C (C meet J) is not contained in I");
    for (int i = 0; i < d.K.dim(); ++i) cond(d.J.contains(g(d.K.vec(i))), 2, "g(K) is not contained in J");
    for (int i = 0; i < d.I.dim(); ++i) cond(d.K.contains(f(d.I.vec(i))), 3, "f(I) is not contained in K");
    {
        std::vector<FpVec> img;
        for (int i = 0; i < d.C.dim(); ++i) img.push_back(f(d.C.vec(i)));
        cond(B.span(img).dim() == B.dim(), 4, "f is not surjective");
    }
    require(B.is_idempotent(b) && is_local_idempotent(B, b), "idem", "b is not a local idempotent");
    require(!d.K.contains(b), "idem", "b lies in K");
    const FpVec gb = g(b);
    cond(A.is_idempotent(gb), 5, "g(b) is not idempotent");
    for (int i = 0; i < d.C.dim(); ++i)
        for (int j = 0; j < d.C.dim(); ++j) {
            auto x = d.C.vec(i), y = d.C.vec(j);
            cond(d.K.contains(B.sub(f(A.mul(x, y)), B.mul(f(x), f(y)))), 6, "f is not multiplicative modulo K");
        }
    for (int i = 0; i < B.dim(); ++i)
        for (int j = 0; j < B.dim(); ++j) {
            auto v = B.unit_vector(i), w = B.unit_vector(j);
            cond(d.J.contains(A.sub(g(B.mul(v, w)), A.mul(g(v), g(w)))), 6, "g is not multiplicative modulo J");
        }
    for (int i = 0; i < d.C.dim(); ++i)
        cond(d.J.contains(A.sub(g(f(d.C.vec(i))), d.C.vec(i))), 7, "g f differs from the identity modulo J");

    Correspondent out;
    out.summands = decompose_idempotent(A, gb, seed).idempotents;
    for (std::size_t i = 0; i < out.summands.size(); ++i)
        if (d.C.contains(out.summands[i]) && !d.J.contains(out.summands[i])) {
            if (out.index >= 0) fail("idem", "more than one summand lies in C outside J");
            out.index = static_cast<int>(i);
        }
    if (out.index < 0) fail("idem", "no summand lies in C outside J");
    out.a = out.summands[out.index];
    out.g_minus_a = A.sub(gb, out.a);
    out.fa_minus_b = B.sub(f(out.a), b);
    require(d.J.contains(out.g_minus_a) && d.K.contains(out.fa_minus_b), "idem", "correspondent congruences fail");
    return out;
}

namespace {

std::vector<int> level_offsets(const MackeyModule& M) {
    std::vector<int> off(M.dim.size() + 1, 0);
    for (std::size_t K = 0; K < M.dim.size(); ++K) off[K + 1] = off[K] + M.dim[K];
    return off;
}

FpMat block_diagonal(const MackeyModule& M, const LevelMap& f) {
    const auto off = level_offsets(M);
    FpMat m(off.back(), off.back(), M.k.zero());
    for (std::size_t K = 0; K < M.dim.size(); ++K)
        for (int r = 0; r < M.dim[K]; ++r)
            for (int c = 0; c < M.dim[K]; ++c) m(off[K] + r, off[K] + c) = f[K](r, c);
    return m;
}

}  // namespace

FiniteAlgebra end_algebra(const MackeyModule& M) {
    std::vector<FpMat> mats;
    for (const auto& f : end_basis(M)) mats.push_back(block_diagonal(M, f));
    return FiniteAlgebra(M.k, M.total_dim(), mats);
}

FpVec end_coords(const FiniteAlgebra& E, const MackeyModule& M, const LevelMap& f) {
    return E.from_matrix(block_diagonal(M, f));
}

LevelMap end_element(const FiniteAlgebra& E, const MackeyModule& M, const FpVec& x) {
    const auto off = level_offsets(M);
    const FpMat m = E.matrix(x);
    LevelMap f = map_zero(M, M);
    for (std::size_t K = 0; K < M.dim.size(); ++K)
        for (int r = 0; r < M.dim[K]; ++r)
            for (int c = 0; c < M.dim[K]; ++c) f[K](r, c) = m(off[K] + r, off[K] + c);
    return f;
}

MackeyModule image_module(const MackeyModule& M, const LevelMap& e) {
    const PrimeField& k = M.k;
    MackeyModule out = zero_module(M.alg, k);
    std::vector<FpMat> T(M.dim.size());
    for (std::size_t K = 0; K < M.dim.size(); ++K) {
        T[K] = column_basis(k, e[K]);
        out.dim[K] = T[K].cols;
    }
    for (int x = 0; x < M.alg->size(); ++x) {
        const auto& key = M.alg->key(x);
        out.act[x] = FpMat(out.dim[key.B], out.dim[key.A], k.zero());
        if (!out.dim[key.A] || !out.dim[key.B]) continue;
        auto Y = solve(k, T[key.B], mat_mul(k, M.act[x], T[key.A]));
        require(Y.has_value(), "idem", "image of the idempotent is not a submodule");
        out.act[x] = *Y;
    }
    return out;
}

namespace {

// End(a + b) with the two block projections.
struct PairAlgebra {
    FiniteAlgebra E;
    FpVec ea, eb;
};

PairAlgebra pair_algebra(const MackeyModule& a, const MackeyModule& b) {
    MackeyModule X = direct_sum(a, b);
    PairAlgebra P{end_algebra(X), {}, {}};
    LevelMap pa = map_zero(X, X), pb = map_zero(X, X);
    for (std::size_t K = 0; K < X.dim.size(); ++K) {
        for (int i = 0; i < a.dim[K]; ++i) pa[K](i, i) = a.k.one();
        for (int i = 0; i < b.dim[K]; ++i) pb[K](a.dim[K] + i, a.dim[K] + i) = a.k.one();
    }
    P.ea = end_coords(P.E, X, pa);
    P.eb = end_coords(P.E, X, pb);
    return P;
}

}  // namespace

bool modules_isomorphic(const MackeyModule& a, const MackeyModule& b, std::uint64_t seed) {
    if (a.dim != b.dim) return false;
    if (a.is_zero()) return true;
    auto P = pair_algebra(a, b);
    return idempotents_conjugate(P.E, P.ea, P.eb, seed);
}

bool is_summand_of(const MackeyModule& a, const MackeyModule& b, std::uint64_t seed) {
    if (a.is_zero()) return true;
    for (std::size_t K = 0; K < a.dim.size(); ++K)
        if (a.dim[K] > b.dim[K]) return false;
    auto P = pair_algebra(a, b);
    return idempotent_dominated(P.E, P.ea, P.eb, seed);
}

bool is_indecomposable(const MackeyModule& M) {
    if (M.is_zero()) return false;
    FiniteAlgebra E = end_algebra(M);
    return is_local_idempotent(E, *E.one());
}

}  // namespace fuscomp
