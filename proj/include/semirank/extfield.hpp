#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace semirank {

/// Polynomial over F_Q, coefficients lowest degree first, no trailing zeros.
template <unsigned Q>
struct Poly {
    std::vector<unsigned> c;

    Poly() = default;
    explicit Poly(std::vector<unsigned> coeffs) : c(std::move(coeffs)) {
        for (auto& x : c) x %= Q;
        trim();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    friend bool operator==(const Poly&, const Poly&) = default;

    /// Remainder of *this modulo a nonzero divisor.
    Poly mod(const Poly& d) const {
        Poly r = *this;
        const unsigned inv = Fq<Q>::inv(d.c.back());
        while (r.degree() >= d.degree()) {
            const unsigned f = r.c.back() * inv % Q;
            const std::size_t shift = r.c.size() - d.c.size();
            for (std::size_t i = 0; i < d.c.size(); ++i)
                r.c[shift + i] = (r.c[shift + i] + (Q - f) * d.c[i]) % Q;
            r.trim();
        }
        return r;
    }
};

/// True if the polynomial of degree >= 1 has no factor of degree 1..deg/2.
template <unsigned Q>
bool is_irreducible(const Poly<Q>& f) {
    const int n = f.degree();
    if (n < 1) return false;
    for (int d = 1; 2 * d <= n; ++d) {
        // Every monic polynomial of degree d.
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= Q;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<unsigned> c(static_cast<std::size_t>(d) + 1);
            std::uint64_t t = idx;
            for (int i = 0; i < d; ++i) {
                c[static_cast<std::size_t>(i)] = static_cast<unsigned>(t % Q);
                t /= Q;
            }
            c[static_cast<std::size_t>(d)] = 1;
            if (f.mod(Poly<Q>(c)).is_zero()) return false;
        }
    }
    return true;
}

/// F_{Q^n} as F_Q[x]/(modulus); elements are coordinate vectors in the power
/// basis 1, x, ..., x^{n-1}.
template <unsigned Q>
class ExtField {
public:
    using Elem = Vec<Q>;

    /// `modulus` lists the coefficients of a monic degree-n polynomial, lowest first.
    explicit ExtField(std::vector<unsigned> modulus) : mod_(std::move(modulus)) {
        if (mod_.degree() < 1 || mod_.c.back() != 1)
            throw BadParameters("modulus must be monic of degree >= 1");
        n_ = static_cast<unsigned>(mod_.degree());
        if (n_ > 8) throw TooLarge("extension degree above 8");
        if (!is_irreducible(mod_)) throw NotIrreducible("modulus polynomial is reducible");
    }

    unsigned degree() const { return n_; }
    const Poly<Q>& modulus() const { return mod_; }

    Elem zero() const { return Elem(n_); }
    Elem one() const { return Elem::unit(n_, 0); }
    /// The class of x^i.
    Elem x_pow(unsigned i) const { return pow(generator(), i); }
    Elem generator() const { return n_ == 1 ? reduce(Poly<Q>({0, 1})) : Elem::unit(n_, 1); }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<unsigned> prod(2 * n_, 0);
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % Q;
        return reduce(Poly<Q>(prod));
    }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Elem inverse(const Elem& a) const {
        if (a.is_zero()) throw SingularMatrix("inverse of zero field element");
        return pow(a, order() - 2);
    }
    /// a^(q^i)
    Elem frobenius(const Elem& a, unsigned i) const {
        Elem r = a;
        for (unsigned k = 0; k < i; ++k) r = pow(r, Q);
        return r;
    }
    std::uint64_t order() const {
        std::uint64_t o = 1;
        for (unsigned i = 0; i < n_; ++i) o *= Q;
        return o;
    }
    /// Element with index `idx` in base-Q digit order (coordinate i is digit i).
    Elem element(std::uint64_t idx) const {
        Elem e(n_);
        for (unsigned i = 0; i < n_; ++i) {
            e.set(i, static_cast<unsigned>(idx % Q));
            idx /= Q;
        }
        return e;
    }

    /// Matrix of y -> a*y acting on row vectors: row j holds the coordinates of a * x^j.
    Mat<Q> mul_matrix(const Elem& a) const {
        Mat<Q> m(n_);
        Elem xj = one();
        const Elem x = generator();
        for (unsigned j = 0; j < n_; ++j) {
            m.v += mul(a, xj).v.shifted(j * n_);
            xj = mul(xj, x);
        }
        return m;
    }

private:
    Elem reduce(const Poly<Q>& p) const {
        const Poly<Q> r = p.mod(mod_);
        Elem e(n_);
        for (std::size_t i = 0; i < r.c.size(); ++i) e.set(static_cast<unsigned>(i), r.c[i]);
        return e;
    }

    Poly<Q> mod_;
    unsigned n_ = 0;
};

template <unsigned Q>
Mat<Q> ext_mul_matrix(const ExtField<Q>& f, const Vec<Q>& a) {
    return f.mul_matrix(a);
}

}  // namespace semirank
