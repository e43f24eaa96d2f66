#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "field.hpp"
#include "packed.hpp"

namespace semirank {

// ---------------------------------------------------------------------------
// Echelon forms over packed vectors
// ---------------------------------------------------------------------------

/// Brings `rows` to reduced row echelon form in place (pivot = lowest nonzero
/// coordinate, normalized to 1, rows sorted by pivot, zero rows dropped).
/// Returns the rank.
template <unsigned Q>
std::size_t reduce_rows(std::vector<PackedVec<Q>>& rows) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        // Reduce the incoming row against the pivots found so far.
        PackedVec<Q> r = rows[i];
        for (std::size_t k = 0; k < rank; ++k) {
            const unsigned piv = static_cast<unsigned>(lowest_nonzero(rows[k]));
            const unsigned c = r.get(piv);
            if (c) r.axpy(Q - c, rows[k]);
        }
        if (r.is_zero()) continue;
        r = projective_normal(r);
        const unsigned piv = static_cast<unsigned>(lowest_nonzero(r));
        for (std::size_t k = 0; k < rank; ++k) {
            const unsigned c = rows[k].get(piv);
            if (c) rows[k].axpy(Q - c, r);
        }
        rows[rank++] = r;
    }
    rows.resize(rank);
    std::sort(rows.begin(), rows.end(), [](const PackedVec<Q>& a, const PackedVec<Q>& b) {
        return lowest_nonzero(a) < lowest_nonzero(b);
    });
    return rank;
}

/// Reduces v modulo the span of an RREF basis; the result is zero iff v is in
/// the span, and two vectors share a residue iff they differ by a span element.
template <unsigned Q>
PackedVec<Q> residue(PackedVec<Q> v, std::span<const PackedVec<Q>> rref) {
    for (const auto& b : rref) {
        const unsigned c = v.get(static_cast<unsigned>(lowest_nonzero(b)));
        if (c) v.axpy(Q - c, b);
    }
    return v;
}

template <unsigned Q>
std::size_t rank_of(std::vector<PackedVec<Q>> rows) {
    return reduce_rows(rows);
}

/// Coefficients c with sum c_i * basis_i == target, if any exist.
template <unsigned Q>
std::optional<std::vector<unsigned>> express(std::span<const PackedVec<Q>> basis, const PackedVec<Q>& target) {
    const std::size_t k = basis.size();
    if (k > kPackedCapacity) throw TooLarge("express: more than 64 basis vectors");
    // Echelon rows with the combination of inputs that produced each of them.
    std::vector<std::pair<PackedVec<Q>, PackedVec<Q>>> ech;
    for (std::size_t i = 0; i < k; ++i) {
        PackedVec<Q> r = basis[i];
        PackedVec<Q> comb;
        comb.set(static_cast<unsigned>(i), 1);
        for (const auto& [row, rc] : ech) {
            const unsigned c = r.get(static_cast<unsigned>(lowest_nonzero(row)));
            if (c) {
                r.axpy(Q - c, row);
                comb.axpy(Q - c, rc);
            }
        }
        if (r.is_zero()) continue;
        const unsigned lead = r.get(static_cast<unsigned>(lowest_nonzero(r)));
        const unsigned inv = Fq<Q>::inv(lead);
        ech.emplace_back(r.scaled(inv), comb.scaled(inv));
    }
    PackedVec<Q> t = target;
    PackedVec<Q> coeffs;
    for (const auto& [row, rc] : ech) {
        const unsigned c = t.get(static_cast<unsigned>(lowest_nonzero(row)));
        if (c) {
            t.axpy(Q - c, row);
            coeffs.axpy(c, rc);
        }
    }
    if (!t.is_zero()) return std::nullopt;
    std::vector<unsigned> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = coeffs.get(static_cast<unsigned>(i));
    return out;
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

template <unsigned Q>
struct Vec {
    unsigned n = 0;
    PackedVec<Q> v;

    Vec() = default;
    explicit Vec(unsigned len) : n(len) {}
    Vec(unsigned len, PackedVec<Q> packed) : n(len), v(packed) {}
    Vec(std::initializer_list<unsigned> xs) : n(static_cast<unsigned>(xs.size())) {
        unsigned i = 0;
        for (unsigned x : xs) v.set(i++, x % Q);
    }
    static Vec from(const std::vector<unsigned>& xs) {
        Vec r(static_cast<unsigned>(xs.size()));
        for (unsigned i = 0; i < r.n; ++i) r.v.set(i, xs[i] % Q);
        return r;
    }
    static Vec unit(unsigned len, unsigned i) {
        Vec r(len);
        r.v.set(i, 1);
        return r;
    }

    unsigned operator[](unsigned i) const { return v.get(i); }
    void set(unsigned i, unsigned x) { v.set(i, x % Q); }
    bool is_zero() const { return v.is_zero(); }
    std::vector<unsigned> to_vector() const {
        std::vector<unsigned> r(n);
        for (unsigned i = 0; i < n; ++i) r[i] = v.get(i);
        return r;
    }

    friend Vec operator+(Vec a, const Vec& b) { a.v += b.v; return a; }
    friend Vec operator-(Vec a, const Vec& b) { a.v -= b.v; return a; }
    Vec scaled(unsigned c) const { return {n, v.scaled(c % Q)}; }
    friend bool operator==(const Vec&, const Vec&) = default;
};

template <unsigned Q>
unsigned dot(const Vec<Q>& a, const Vec<Q>& b) {
    unsigned s = 0;
    for (unsigned i = 0; i < a.n; ++i) s += a[i] * b[i];
    return s % Q;
}

// ---------------------------------------------------------------------------
// Square matrices, n <= 8, row-major: entry (i,j) is coordinate i*n + j
// ---------------------------------------------------------------------------

template <unsigned Q>
struct Mat {
    unsigned n = 0;
    PackedVec<Q> v;

    Mat() = default;
    explicit Mat(unsigned dim) : n(dim) {
        if (dim * dim > kPackedCapacity) throw TooLarge("matrices are limited to n <= 8");
    }
    Mat(unsigned dim, PackedVec<Q> packed) : n(dim), v(packed) {}

    static Mat zero(unsigned dim) { return Mat(dim); }
    static Mat identity(unsigned dim) {
        Mat m(dim);
        for (unsigned i = 0; i < dim; ++i) m.set(i, i, 1);
        return m;
    }
    static Mat unit(unsigned dim, unsigned i, unsigned j) {
        Mat m(dim);
        m.set(i, j, 1);
        return m;
    }
    static Mat from_rows(std::initializer_list<std::initializer_list<unsigned>> rows) {
        Mat m(static_cast<unsigned>(rows.size()));
        unsigned i = 0;
        for (const auto& r : rows) {
            if (r.size() != m.n) throw DimensionMismatch("matrix rows must have n entries");
            unsigned j = 0;
            for (unsigned x : r) m.set(i, j++, x);
            ++i;
        }
        return m;
    }
    /// u * w^T
    static Mat outer(const Vec<Q>& u, const Vec<Q>& w) {
        Mat m(u.n);
        for (unsigned i = 0; i < u.n; ++i)
            if (u[i]) m.v += w.v.scaled(u[i]).shifted(i * u.n);
        return m;
    }

    unsigned at(unsigned i, unsigned j) const { return v.get(i * n + j); }
    void set(unsigned i, unsigned j, unsigned x) { v.set(i * n + j, x % Q); }
    PackedVec<Q> row(unsigned i) const { return v.extract(i * n, n); }
    Vec<Q> row_vec(unsigned i) const { return {n, row(i)}; }
    bool is_zero() const { return v.is_zero(); }

    friend Mat operator+(Mat a, const Mat& b) { a.v += b.v; return a; }
    friend Mat operator-(Mat a, const Mat& b) { a.v -= b.v; return a; }
    Mat scaled(unsigned c) const { return {n, v.scaled(c % Q)}; }
    friend bool operator==(const Mat&, const Mat&) = default;

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.n != b.n) throw DimensionMismatch("matrix product of different sizes");
        const unsigned n = a.n;
        Mat c(n);
        std::array<PackedVec<Q>, 8> brow;
        for (unsigned j = 0; j < n; ++j) brow[j] = b.row(j);
        for (unsigned i = 0; i < n; ++i) {
            PackedVec<Q> acc;
            for (unsigned j = 0; j < n; ++j) {
                const unsigned x = a.at(i, j);
                if (x) acc.axpy(x, brow[j]);
            }
            c.v += acc.shifted(i * n);
        }
        return c;
    }

    /// Row vector times matrix.
    friend Vec<Q> operator*(const Vec<Q>& y, const Mat& m) {
        PackedVec<Q> acc;
        for (unsigned j = 0; j < m.n; ++j)
            if (y[j]) acc.axpy(y[j], m.row(j));
        return {m.n, acc};
    }

    Mat transpose() const {
        Mat t(n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) t.set(j, i, at(i, j));
        return t;
    }

    std::vector<PackedVec<Q>> rows() const {
        std::vector<PackedVec<Q>> r(n);
        for (unsigned i = 0; i < n; ++i) r[i] = row(i);
        return r;
    }

    unsigned rank() const {
        std::array<PackedVec<Q>, 8> r;
        unsigned rk = 0;
        for (unsigned i = 0; i < n; ++i) {
            PackedVec<Q> x = row(i);
            for (unsigned k = 0; k < rk; ++k) {
                const unsigned c = x.get(static_cast<unsigned>(lowest_nonzero(r[k])));
                if (c) x.axpy(Q - c, r[k]);
            }
            if (!x.is_zero()) r[rk++] = projective_normal(x);
        }
        return rk;
    }
    bool is_invertible() const { return rank() == n; }

    Fq<Q> det() const {
        std::array<PackedVec<Q>, 8> r;
        for (unsigned i = 0; i < n; ++i) r[i] = row(i);
        unsigned d = 1;
        for (unsigned col = 0; col < n; ++col) {
            unsigned p = col;
            while (p < n && r[p].get(col) == 0) ++p;
            if (p == n) return Fq<Q>(0);
            if (p != col) {
                std::swap(r[p], r[col]);
                d = d * (Q - 1) % Q;
            }
            const unsigned pv = r[col].get(col);
            d = d * pv % Q;
            const unsigned inv = Fq<Q>::inv(pv);
            for (unsigned k = col + 1; k < n; ++k) {
                const unsigned c = r[k].get(col);
                if (c) r[k].axpy(Q - c * inv % Q, r[col]);
            }
        }
        return Fq<Q>(d);
    }

    Mat inverse() const {
        // Gauss-Jordan on [M | I] packed into rows of width 2n.
        std::array<PackedVec<Q>, 8> r;
        for (unsigned i = 0; i < n; ++i) {
            r[i] = row(i);
            r[i].set(n + i, 1);
        }
        for (unsigned col = 0; col < n; ++col) {
            unsigned p = col;
            while (p < n && r[p].get(col) == 0) ++p;
            if (p == n) throw SingularMatrix("matrix has no inverse");
            std::swap(r[p], r[col]);
            r[col] = r[col].scaled(Fq<Q>::inv(r[col].get(col)));
            for (unsigned k = 0; k < n; ++k) {
                if (k == col) continue;
                const unsigned c = r[k].get(col);
                if (c) r[k].axpy(Q - c, r[col]);
            }
        }
        Mat inv(n);
        for (unsigned i = 0; i < n; ++i) inv.v += r[i].extract(n, n).shifted(i * n);
        return inv;
    }
};

template <unsigned Q>
std::ostream& operator<<(std::ostream& os, const Mat<Q>& m) {
    for (unsigned i = 0; i < m.n; ++i) {
        for (unsigned j = 0; j < m.n; ++j) os << m.at(i, j);
        if (i + 1 < m.n) os << '/';
    }
    return os;
}

template <unsigned Q>
struct MatHash {
    std::size_t operator()(const Mat<Q>& m) const { return m.v.hash() ^ m.n; }
};

/// Factor a rank-one matrix as u * w^T with the first nonzero entry of w equal to 1.
template <unsigned Q>
std::pair<Vec<Q>, Vec<Q>> rank_one_factor(const Mat<Q>& m) {
    if (m.rank() != 1) throw NotRankOne("matrix has rank " + std::to_string(m.rank()));
    unsigned r0 = 0;
    while (m.row(r0).is_zero()) ++r0;
    const Vec<Q> w{m.n, projective_normal(m.row(r0))};
    const unsigned lead = static_cast<unsigned>(lowest_nonzero(w.v));
    Vec<Q> u(m.n);
    for (unsigned i = 0; i < m.n; ++i) u.set(i, m.at(i, lead));
    return {u, w};
}

/// Coefficients expressing `target` in terms of `basis`, or nullopt if it lies
/// outside their span.
template <unsigned Q>
std::optional<Vec<Q>> solve_membership(std::span<const Mat<Q>> basis, const Mat<Q>& target) {
    std::vector<PackedVec<Q>> b;
    b.reserve(basis.size());
    for (const auto& m : basis) {
        if (m.n != target.n) throw DimensionMismatch("solve_membership: mixed matrix sizes");
        b.push_back(m.v);
    }
    auto c = express<Q>(b, target.v);
    if (!c) return std::nullopt;
    return Vec<Q>::from(*c);
}

}  // namespace semirank
