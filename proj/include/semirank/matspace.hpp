#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "codec.hpp"
#include "linalg.hpp"

namespace semirank {

/// Subspace of M_n(F_Q), stored as the reduced row echelon basis of the
/// n^2-coordinate vectors. Two MatSpaces are equal iff they are the same subspace.
template <unsigned Q>
class MatSpace {
public:
    MatSpace() = default;
    explicit MatSpace(unsigned n) : n_(n) {}

    static MatSpace span(unsigned n, std::span<const Mat<Q>> mats) {
        MatSpace s(n);
        s.basis_.reserve(mats.size());
        for (const auto& m : mats) {
            if (m.n != n) throw DimensionMismatch("MatSpace::span: matrix of wrong size");
            s.basis_.push_back(m.v);
        }
        reduce_rows(s.basis_);
        return s;
    }
    static MatSpace span(unsigned n, const std::vector<Mat<Q>>& mats) {
        return span(n, std::span<const Mat<Q>>(mats));
    }
    static MatSpace from_encodings(unsigned n, const std::vector<std::uint64_t>& enc) {
        return span(n, decode_all<Q>(enc, n));
    }
    static MatSpace from_rref(unsigned n, std::vector<PackedVec<Q>> rref) {
        MatSpace s(n);
        s.basis_ = std::move(rref);
        return s;
    }
    static MatSpace diag(unsigned n) {
        std::vector<Mat<Q>> e;
        for (unsigned i = 0; i < n; ++i) e.push_back(Mat<Q>::unit(n, i, i));
        return span(n, e);
    }

    unsigned n() const { return n_; }
    unsigned dim() const { return static_cast<unsigned>(basis_.size()); }
    const std::vector<PackedVec<Q>>& rref() const { return basis_; }
    std::vector<Mat<Q>> basis() const {
        std::vector<Mat<Q>> out;
        out.reserve(basis_.size());
        for (const auto& b : basis_) out.emplace_back(n_, b);
        return out;
    }

    PackedVec<Q> residue_of(const PackedVec<Q>& v) const { return residue<Q>(v, basis_); }
    bool contains(const Mat<Q>& m) const { return residue_of(m.v).is_zero(); }
    bool contains(const MatSpace& o) const {
        for (const auto& b : o.basis_)
            if (!residue_of(b).is_zero()) return false;
        return true;
    }

    MatSpace extended(const Mat<Q>& m) const {
        MatSpace s = *this;
        s.basis_.push_back(m.v);
        reduce_rows(s.basis_);
        return s;
    }
    MatSpace extended(std::span<const Mat<Q>> ms) const {
        MatSpace s = *this;
        for (const auto& m : ms) s.basis_.push_back(m.v);
        reduce_rows(s.basis_);
        return s;
    }

    friend MatSpace operator+(const MatSpace& a, const MatSpace& b) {
        MatSpace s = a;
        s.basis_.insert(s.basis_.end(), b.basis_.begin(), b.basis_.end());
        reduce_rows(s.basis_);
        return s;
    }
    friend unsigned intersection_dim(const MatSpace& a, const MatSpace& b) {
        return a.dim() + b.dim() - (a + b).dim();
    }

    /// Visits every element (including zero unless skip_zero) as a Mat.
    template <class F>
    void for_each_element(F&& f, bool skip_zero = true) const {
        const unsigned d = dim();
        std::vector<unsigned> digit(d, 0);
        PackedVec<Q> sum;
        if (!skip_zero) f(Mat<Q>(n_, sum));
        while (true) {
            unsigned i = 0;
            while (i < d && digit[i] == Q - 1) {
                digit[i] = 0;
                sum += basis_[i];
                ++i;
            }
            if (i == d) return;
            ++digit[i];
            sum += basis_[i];
            f(Mat<Q>(n_, sum));
        }
    }

    /// Visits one representative per 1-dimensional subspace (nonzero elements
    /// whose highest nonzero basis coefficient is 1).
    template <class F>
    void for_each_projective(F&& f) const {
        const unsigned d = dim();
        std::vector<unsigned> digit(d, 0);
        PackedVec<Q> sum;
        while (true) {
            unsigned i = 0;
            while (i < d && digit[i] == Q - 1) {
                digit[i] = 0;
                sum += basis_[i];
                ++i;
            }
            if (i == d) return;
            ++digit[i];
            sum += basis_[i];
            unsigned top = d;
            while (top > 0 && digit[top - 1] == 0) --top;
            if (digit[top - 1] == 1) f(Mat<Q>(n_, sum));
        }
    }

    std::uint64_t size() const {
        std::uint64_t s = 1;
        for (unsigned i = 0; i < dim(); ++i) s *= Q;
        return s;
    }

    /// Sorted encodings of the canonical basis; identical iff spaces are equal.
    std::vector<std::uint64_t> key() const {
        std::vector<std::uint64_t> k;
        k.reserve(basis_.size());
        for (const auto& b : basis_) k.push_back(encode(Mat<Q>(n_, b)));
        std::sort(k.begin(), k.end());
        return k;
    }

    friend bool operator==(const MatSpace& a, const MatSpace& b) { return a.n_ == b.n_ && a.basis_ == b.basis_; }

    std::size_t hash() const {
        std::size_t h = n_;
        for (const auto& b : basis_) h = h * 0x100000001B3ull ^ b.hash();
        return h;
    }

private:
    unsigned n_ = 0;
    std::vector<PackedVec<Q>> basis_;
};

template <unsigned Q>
struct MatSpaceHash {
    std::size_t operator()(const MatSpace<Q>& s) const { return s.hash(); }
};

/// Lexicographic order on canonical keys; used to pick deterministic representatives.
template <unsigned Q>
bool key_less(const MatSpace<Q>& a, const MatSpace<Q>& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.key() < b.key();
}

/// Number of rank-one matrices in M_n(F_q), (q^n - 1)^2 / (q - 1).
inline std::uint64_t rank_one_count(unsigned q, unsigned n) {
    std::uint64_t qn = 1;
    for (unsigned i = 0; i < n; ++i) qn *= q;
    return (qn - 1) * (qn - 1) / (q - 1);
}

}  // namespace semirank
