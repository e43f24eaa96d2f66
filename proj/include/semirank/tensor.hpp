#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "linalg.hpp"

namespace semirank {

/// Dense tensor of order t over F_Q with shape (d_1, ..., d_t), stored
/// row-major (the last slot varies fastest). Slots are numbered from 0.
template <unsigned Q>
class GeneralTensor {
public:
    GeneralTensor() : data_(1, 0) {}
    explicit GeneralTensor(std::vector<unsigned> dims) : dims_(std::move(dims)) {
        data_.assign(volume(dims_), 0);
    }

    static GeneralTensor pure(const std::vector<Vec<Q>>& factors) {
        std::vector<unsigned> dims;
        for (const auto& f : factors) dims.push_back(f.n);
        GeneralTensor t(dims);
        std::vector<unsigned> idx(dims.size(), 0);
        for (std::size_t flat = 0; flat < t.data_.size(); ++flat) {
            unsigned prod = 1;
            for (std::size_t s = 0; s < dims.size() && prod; ++s) prod = prod * factors[s][idx[s]] % Q;
            t.data_[flat] = static_cast<std::uint8_t>(prod);
            t.advance(idx);
        }
        return t;
    }
    static GeneralTensor from_flat(std::vector<unsigned> dims, const PackedVec<Q>& flat) {
        GeneralTensor t(std::move(dims));
        if (t.data_.size() > kPackedCapacity) throw TooLarge("tensor volume above 64");
        for (std::size_t i = 0; i < t.data_.size(); ++i) t.data_[i] = static_cast<std::uint8_t>(flat.get(static_cast<unsigned>(i)));
        return t;
    }

    unsigned order() const { return static_cast<unsigned>(dims_.size()); }
    const std::vector<unsigned>& dims() const { return dims_; }
    std::size_t volume() const { return data_.size(); }
    unsigned at_flat(std::size_t i) const { return data_[i]; }
    void set_flat(std::size_t i, unsigned v) { data_[i] = static_cast<std::uint8_t>(v % Q); }
    unsigned at(const std::vector<unsigned>& idx) const { return data_[flat_index(idx)]; }
    void set(const std::vector<unsigned>& idx, unsigned v) { data_[flat_index(idx)] = static_cast<std::uint8_t>(v % Q); }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](auto x) { return x == 0; });
    }

    PackedVec<Q> flat() const {
        if (data_.size() > kPackedCapacity) throw TooLarge("tensor volume above 64");
        PackedVec<Q> v;
        for (std::size_t i = 0; i < data_.size(); ++i) v.set(static_cast<unsigned>(i), data_[i]);
        return v;
    }

    GeneralTensor& operator+=(const GeneralTensor& o) {
        if (dims_ != o.dims_) throw DimensionMismatch("tensor sum of different shapes");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = static_cast<std::uint8_t>((data_[i] + o.data_[i]) % Q);
        return *this;
    }
    friend GeneralTensor operator+(GeneralTensor a, const GeneralTensor& b) { return a += b; }
    GeneralTensor scaled(unsigned c) const {
        GeneralTensor r = *this;
        for (auto& x : r.data_) x = static_cast<std::uint8_t>(x * (c % Q) % Q);
        return r;
    }
    friend bool operator==(const GeneralTensor&, const GeneralTensor&) = default;

    /// Pairs slot `slot` with the covector f, giving a tensor of order t-1.
    GeneralTensor contract(unsigned slot, const Vec<Q>& f) const {
        if (slot >= order()) throw BadSlot("slot " + std::to_string(slot) + " of an order-" + std::to_string(order()) + " tensor");
        if (f.n != dims_[slot]) throw DimensionMismatch("covector length does not match slot dimension");
        std::vector<unsigned> rest;
        for (unsigned s = 0; s < order(); ++s)
            if (s != slot) rest.push_back(dims_[s]);
        GeneralTensor out(rest);
        std::vector<unsigned> idx(order(), 0);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            const unsigned c = data_[i] * f[idx[slot]] % Q;
            if (c) {
                std::size_t j = 0;
                for (unsigned s = 0; s < order(); ++s)
                    if (s != slot) j = j * dims_[s] + idx[s];
                out.data_[j] = static_cast<std::uint8_t>((out.data_[j] + c) % Q);
            }
            advance(idx);
        }
        return out;
    }

    /// Tensor obtained by moving slot s to position perm[s].
    GeneralTensor permuted(const std::vector<unsigned>& perm) const {
        if (perm.size() != order()) throw BadParameters("permutation length must equal the order");
        std::vector<unsigned> nd(order());
        for (unsigned s = 0; s < order(); ++s) nd[perm[s]] = dims_[s];
        GeneralTensor out(nd);
        std::vector<unsigned> idx(order(), 0), to(order());
        for (std::size_t i = 0; i < data_.size(); ++i) {
            for (unsigned s = 0; s < order(); ++s) to[perm[s]] = idx[s];
            out.data_[out.flat_index(to)] = data_[i];
            advance(idx);
        }
        return out;
    }

private:
    static std::size_t volume(const std::vector<unsigned>& d) {
        return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
    }
    std::size_t flat_index(const std::vector<unsigned>& idx) const {
        std::size_t j = 0;
        for (std::size_t s = 0; s < dims_.size(); ++s) j = j * dims_[s] + idx[s];
        return j;
    }
    void advance(std::vector<unsigned>& idx) const {
        for (std::size_t s = dims_.size(); s-- > 0;) {
            if (++idx[s] < dims_[s]) return;
            idx[s] = 0;
        }
    }

    std::vector<unsigned> dims_;
    std::vector<std::uint8_t> data_;
};

/// Basis (reduced, flattened) of the slot-`slot` contraction space.
template <unsigned Q>
std::vector<PackedVec<Q>> contraction_space(const GeneralTensor<Q>& t, unsigned slot) {
    if (slot >= t.order()) throw BadSlot("slot out of range");
    std::vector<PackedVec<Q>> rows;
    for (unsigned i = 0; i < t.dims()[slot]; ++i) rows.push_back(t.contract(slot, Vec<Q>::unit(t.dims()[slot], i)).flat());
    reduce_rows(rows);
    return rows;
}

template <unsigned Q>
bool is_concise(const GeneralTensor<Q>& t) {
    for (unsigned s = 0; s < t.order(); ++s)
        if (contraction_space(t, s).size() != t.dims()[s]) return false;
    return true;
}

/// Multiplication tensor of an n-dimensional algebra: x o y = sum c[i][j][k] x_i y_j e_k.
template <unsigned Q>
class Hypercube {
public:
    Hypercube() = default;
    explicit Hypercube(unsigned n) : n_(n), t_({n, n, n}) {}
    explicit Hypercube(GeneralTensor<Q> t) : n_(t.dims().empty() ? 0 : t.dims()[0]), t_(std::move(t)) {
        const auto& d = t_.dims();
        if (d.size() != 3 || d[0] != d[1] || d[1] != d[2]) throw DimensionMismatch("hypercube must be n x n x n");
    }

    unsigned n() const { return n_; }
    unsigned at(unsigned i, unsigned j, unsigned k) const { return t_.at_flat((std::size_t(i) * n_ + j) * n_ + k); }
    void set(unsigned i, unsigned j, unsigned k, unsigned v) { t_.set_flat((std::size_t(i) * n_ + j) * n_ + k, v); }
    const GeneralTensor<Q>& tensor() const { return t_; }
    friend bool operator==(const Hypercube&, const Hypercube&) = default;

    /// Slot-0 contraction by the covector x: the matrix of y -> x o y on row vectors.
    Mat<Q> left_matrix(const Vec<Q>& x) const {
        Mat<Q> m(n_);
        for (unsigned i = 0; i < n_; ++i) {
            if (!x[i]) continue;
            for (unsigned j = 0; j < n_; ++j)
                for (unsigned k = 0; k < n_; ++k) m.set(j, k, m.at(j, k) + x[i] * at(i, j, k));
        }
        return m;
    }

private:
    unsigned n_ = 0;
    GeneralTensor<Q> t_;
};

template <unsigned Q>
Vec<Q> multiply(const Hypercube<Q>& h, const Vec<Q>& x, const Vec<Q>& y) {
    if (x.n != h.n() || y.n != h.n()) throw DimensionMismatch("multiply: operand length");
    return y * h.left_matrix(x);
}

/// The S_3 action on the three index positions: slot s moves to sigma[s].
/// Composition: knuth_act(knuth_act(H, s), t) == knuth_act(H, t o s).
template <unsigned Q>
Hypercube<Q> knuth_act(const Hypercube<Q>& h, const std::array<unsigned, 3>& sigma) {
    return Hypercube<Q>(h.tensor().permuted({sigma[0], sigma[1], sigma[2]}));
}

inline std::array<std::array<unsigned, 3>, 6> all_s3() {
    return {{{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}}};
}

inline std::array<unsigned, 3> compose(const std::array<unsigned, 3>& tau, const std::array<unsigned, 3>& sigma) {
    return {tau[sigma[0]], tau[sigma[1]], tau[sigma[2]]};
}

}  // namespace semirank
