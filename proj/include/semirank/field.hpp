#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace semirank {

// Base class for every error raised by the library. Each failure mode named
// in the interface has its own subclass so callers can catch precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SEMIRANK_ERROR(Name)                                                   \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}   \
    }

SEMIRANK_ERROR(SingularMatrix);
SEMIRANK_ERROR(NotRankOne);
SEMIRANK_ERROR(EncodingOverflow);
SEMIRANK_ERROR(DimensionMismatch);
SEMIRANK_ERROR(NotIrreducible);
SEMIRANK_ERROR(NotNonsingular);
SEMIRANK_ERROR(BadParameters);
SEMIRANK_ERROR(BadSlot);
SEMIRANK_ERROR(NotInvertible);
SEMIRANK_ERROR(NotContained);
SEMIRANK_ERROR(DependentGenerators);
SEMIRANK_ERROR(TooLarge);
SEMIRANK_ERROR(Unknown);
SEMIRANK_ERROR(NotFound);
SEMIRANK_ERROR(RankExceedsCap);
SEMIRANK_ERROR(PruningUnavailable);
SEMIRANK_ERROR(UnsupportedField);

#undef SEMIRANK_ERROR

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("ParseError at line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

template <unsigned Q>
concept SupportedPrime = (Q == 2 || Q == 3 || Q == 5 || Q == 7);

/// An element of the prime field F_Q.
template <unsigned Q>
    requires SupportedPrime<Q>
struct Fq {
    static constexpr unsigned q = Q;
    std::uint8_t v = 0;

    constexpr Fq() = default;
    constexpr explicit Fq(unsigned x) : v(static_cast<std::uint8_t>(x % Q)) {}

    constexpr unsigned value() const { return v; }
    constexpr bool is_zero() const { return v == 0; }

    friend constexpr Fq operator+(Fq a, Fq b) { return Fq(a.v + b.v); }
    friend constexpr Fq operator-(Fq a, Fq b) { return Fq(a.v + Q - b.v); }
    friend constexpr Fq operator*(Fq a, Fq b) { return Fq(unsigned(a.v) * b.v); }
    constexpr Fq operator-() const { return Fq(Q - v); }
    Fq& operator+=(Fq b) { return *this = *this + b; }
    Fq& operator-=(Fq b) { return *this = *this - b; }
    Fq& operator*=(Fq b) { return *this = *this * b; }

    constexpr Fq inverse() const {
        if (v == 0) throw SingularMatrix("inverse of zero in F_" + std::to_string(Q));
        return Fq(inv(v));
    }
    friend constexpr Fq operator/(Fq a, Fq b) { return a * b.inverse(); }

    friend constexpr bool operator==(Fq, Fq) = default;

    // Multiplicative inverse of a nonzero residue.
    static constexpr unsigned inv(unsigned x) {
        unsigned r = 1;
        for (unsigned e = 0; e < Q - 2; ++e) r = r * x % Q;
        return r;
    }
};

inline bool is_supported_prime(unsigned q) { return q == 2 || q == 3 || q == 5 || q == 7; }

/// Invokes `f.template operator()<Q>()` with Q bound to the runtime modulus.
template <class F>
decltype(auto) with_field(unsigned q, F&& f) {
    switch (q) {
        case 2: return std::forward<F>(f).template operator()<2>();
        case 3: return std::forward<F>(f).template operator()<3>();
        case 5: return std::forward<F>(f).template operator()<5>();
        case 7: return std::forward<F>(f).template operator()<7>();
        default: throw UnsupportedField("q = " + std::to_string(q) + " (supported: 2, 3, 5, 7)");
    }
}

// Integer power with overflow detection; returns false on overflow.
inline bool checked_pow(std::uint64_t base, unsigned exp, std::uint64_t& out) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (r > UINT64_MAX / base) return false;
        r *= base;
    }
    out = r;
    return true;
}

}  // namespace semirank
