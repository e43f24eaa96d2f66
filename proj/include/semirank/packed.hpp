#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>

#include "field.hpp"

namespace semirank {

// Fixed-capacity vector of up to 64 residues over F_Q. Coordinates beyond the
// logical length are always zero, so whole-word comparisons are meaningful.
//
// F_2 packs one bit per coordinate. F_3 uses two bit-planes: `p` marks the
// coordinates equal to 1, `m` those equal to 2. Larger primes fall back to a
// byte per coordinate; they only appear in small cases.
template <unsigned Q>
struct PackedVec;

inline constexpr unsigned kPackedCapacity = 64;

inline std::uint64_t low_mask(unsigned len) {
    return len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
}

template <>
struct PackedVec<2> {
    std::uint64_t bits = 0;

    unsigned get(unsigned i) const { return (bits >> i) & 1u; }
    void set(unsigned i, unsigned v) {
        bits = (bits & ~(std::uint64_t{1} << i)) | (std::uint64_t(v & 1u) << i);
    }
    PackedVec& operator+=(const PackedVec& o) { bits ^= o.bits; return *this; }
    PackedVec& operator-=(const PackedVec& o) { bits ^= o.bits; return *this; }
    PackedVec scaled(unsigned c) const { return (c & 1u) ? *this : PackedVec{}; }
    void axpy(unsigned c, const PackedVec& x) { if (c & 1u) bits ^= x.bits; }
    bool is_zero() const { return bits == 0; }
    std::uint64_t support() const { return bits; }
    PackedVec extract(unsigned off, unsigned len) const { return {(bits >> off) & low_mask(len)}; }
    PackedVec shifted(unsigned off) const { return {bits << off}; }

    friend PackedVec operator+(PackedVec a, const PackedVec& b) { return a += b; }
    friend PackedVec operator-(PackedVec a, const PackedVec& b) { return a -= b; }
    friend bool operator==(const PackedVec&, const PackedVec&) = default;
    friend auto operator<=>(const PackedVec&, const PackedVec&) = default;
    std::size_t hash() const { return std::hash<std::uint64_t>{}(bits * 0x9E3779B97F4A7C15ull); }
};

template <>
struct PackedVec<3> {
    std::uint64_t p = 0;  // coordinate == 1
    std::uint64_t m = 0;  // coordinate == 2

    unsigned get(unsigned i) const { return ((p >> i) & 1u) | (((m >> i) & 1u) << 1); }
    void set(unsigned i, unsigned v) {
        const std::uint64_t b = std::uint64_t{1} << i;
        p &= ~b;
        m &= ~b;
        v %= 3;
        if (v == 1) p |= b;
        if (v == 2) m |= b;
    }
    PackedVec& operator+=(const PackedVec& o) {
        const std::uint64_t za = ~(p | m), zb = ~(o.p | o.m);
        const std::uint64_t np = (za & o.p) | (zb & p) | (m & o.m);
        const std::uint64_t nm = (za & o.m) | (zb & m) | (p & o.p);
        p = np;
        m = nm;
        return *this;
    }
    PackedVec negated() const { return {m, p}; }
    PackedVec& operator-=(const PackedVec& o) { return *this += o.negated(); }
    PackedVec scaled(unsigned c) const {
        c %= 3;
        return c == 0 ? PackedVec{} : (c == 1 ? *this : negated());
    }
    void axpy(unsigned c, const PackedVec& x) {
        c %= 3;
        if (c == 1) *this += x;
        else if (c == 2) *this -= x;
    }
    bool is_zero() const { return (p | m) == 0; }
    std::uint64_t support() const { return p | m; }
    PackedVec extract(unsigned off, unsigned len) const {
        const std::uint64_t mask = low_mask(len);
        return {(p >> off) & mask, (m >> off) & mask};
    }
    PackedVec shifted(unsigned off) const { return {p << off, m << off}; }

    friend PackedVec operator+(PackedVec a, const PackedVec& b) { return a += b; }
    friend PackedVec operator-(PackedVec a, const PackedVec& b) { return a -= b; }
    friend bool operator==(const PackedVec&, const PackedVec&) = default;
    friend auto operator<=>(const PackedVec&, const PackedVec&) = default;
    std::size_t hash() const {
        return std::hash<std::uint64_t>{}(p * 0x9E3779B97F4A7C15ull ^ (m + 0x632BE59BD9B4E019ull) * 0xBF58476D1CE4E5B9ull);
    }
};

template <unsigned Q>
struct PackedVec {
    static_assert(Q == 5 || Q == 7);
    std::array<std::uint8_t, kPackedCapacity> e{};

    unsigned get(unsigned i) const { return e[i]; }
    void set(unsigned i, unsigned v) { e[i] = static_cast<std::uint8_t>(v % Q); }
    PackedVec& operator+=(const PackedVec& o) {
        for (unsigned i = 0; i < kPackedCapacity; ++i) e[i] = static_cast<std::uint8_t>((e[i] + o.e[i]) % Q);
        return *this;
    }
    PackedVec& operator-=(const PackedVec& o) {
        for (unsigned i = 0; i < kPackedCapacity; ++i) e[i] = static_cast<std::uint8_t>((e[i] + Q - o.e[i]) % Q);
        return *this;
    }
    PackedVec scaled(unsigned c) const {
        PackedVec r;
        for (unsigned i = 0; i < kPackedCapacity; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] * (c % Q) % Q);
        return r;
    }
    void axpy(unsigned c, const PackedVec& x) {
        c %= Q;
        if (c == 0) return;
        for (unsigned i = 0; i < kPackedCapacity; ++i) e[i] = static_cast<std::uint8_t>((e[i] + c * x.e[i]) % Q);
    }
    bool is_zero() const { return support() == 0; }
    std::uint64_t support() const {
        std::uint64_t s = 0;
        for (unsigned i = 0; i < kPackedCapacity; ++i)
            if (e[i]) s |= std::uint64_t{1} << i;
        return s;
    }
    PackedVec extract(unsigned off, unsigned len) const {
        PackedVec r;
        for (unsigned i = 0; i < len && off + i < kPackedCapacity; ++i) r.e[i] = e[off + i];
        return r;
    }
    PackedVec shifted(unsigned off) const {
        PackedVec r;
        for (unsigned i = 0; i + off < kPackedCapacity; ++i) r.e[i + off] = e[i];
        return r;
    }

    friend PackedVec operator+(PackedVec a, const PackedVec& b) { return a += b; }
    friend PackedVec operator-(PackedVec a, const PackedVec& b) { return a -= b; }
    friend bool operator==(const PackedVec&, const PackedVec&) = default;
    friend auto operator<=>(const PackedVec&, const PackedVec&) = default;
    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : e) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

template <unsigned Q>
int lowest_nonzero(const PackedVec<Q>& v) {
    const std::uint64_t s = v.support();
    return s == 0 ? -1 : std::countr_zero(s);
}

template <unsigned Q>
unsigned weight(const PackedVec<Q>& v) {
    return static_cast<unsigned>(std::popcount(v.support()));
}

// Scales v so that its lowest nonzero coordinate is 1 (projective normal form).
template <unsigned Q>
PackedVec<Q> projective_normal(const PackedVec<Q>& v) {
    const int lead = lowest_nonzero(v);
    if (lead < 0) return v;
    return v.scaled(Fq<Q>::inv(v.get(static_cast<unsigned>(lead))));
}

template <unsigned Q>
struct PackedVecHash {
    std::size_t operator()(const PackedVec<Q>& v) const { return v.hash(); }
};

}  // namespace semirank
