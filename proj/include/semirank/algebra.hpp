#pragma once

#include <optional>
#include <vector>

#include "equivalence.hpp"
#include "extfield.hpp"
#include "tensor.hpp"

namespace semirank {

/// c[i][j][k] = (M_i)_{jk}; the slot-0 contraction by e_i is the i-th basis matrix.
template <unsigned Q>
Hypercube<Q> hypercube_from_spreadset(const std::vector<Mat<Q>>& basis) {
    if (basis.empty()) throw DimensionMismatch("empty basis");
    const unsigned n = basis.front().n;
    if (basis.size() != n)
        throw DimensionMismatch("spread-set basis has " + std::to_string(basis.size()) + " matrices, expected " +
                                std::to_string(n));
    Hypercube<Q> h(n);
    for (unsigned i = 0; i < n; ++i) {
        if (basis[i].n != n) throw DimensionMismatch("basis matrices of different sizes");
        for (unsigned j = 0; j < n; ++j)
            for (unsigned k = 0; k < n; ++k) h.set(i, j, k, basis[i].at(j, k));
    }
    return h;
}

template <unsigned Q>
Hypercube<Q> hypercube_from_spreadset(const MatSpace<Q>& s) {
    return hypercube_from_spreadset(s.basis());
}

/// The matrices L_{e_i}, in order.
template <unsigned Q>
std::vector<Mat<Q>> left_matrices(const Hypercube<Q>& h) {
    std::vector<Mat<Q>> out;
    for (unsigned i = 0; i < h.n(); ++i) out.push_back(h.left_matrix(Vec<Q>::unit(h.n(), i)));
    return out;
}

template <unsigned Q>
MatSpace<Q> spreadset_from_hypercube(const Hypercube<Q>& h) {
    return MatSpace<Q>::span(h.n(), left_matrices(h));
}

template <unsigned Q>
bool is_nonsingular(const MatSpace<Q>& s) {
    bool ok = true;
    s.for_each_projective([&](const Mat<Q>& m) {
        if (ok && !m.is_invertible()) ok = false;
    });
    return ok;
}

/// A spread set is a nonsingular space of dimension n.
template <unsigned Q>
bool is_spreadset(const MatSpace<Q>& s) {
    return s.dim() == s.n() && is_nonsingular(s);
}

/// Matrices of multiplication by 1, x, ..., x^{n-1}.
template <unsigned Q>
std::vector<Mat<Q>> field_basis(const ExtField<Q>& f) {
    std::vector<Mat<Q>> out;
    for (unsigned i = 0; i < f.degree(); ++i) out.push_back(f.mul_matrix(f.x_pow(i)));
    return out;
}

template <unsigned Q>
MatSpace<Q> field_construct(const std::vector<unsigned>& modulus) {
    const ExtField<Q> f(modulus);
    return MatSpace<Q>::span(f.degree(), field_basis(f));
}

/// Presemifield x o y = x*y - c * x^(q^i) * y^(q^j); basis L_{x^0}, ..., L_{x^{n-1}}.
template <unsigned Q>
std::vector<Mat<Q>> gtf_basis(const ExtField<Q>& f, unsigned i, unsigned j, const Vec<Q>& c) {
    const unsigned n = f.degree();
    if (i == j) throw BadParameters("generalised twisted field needs i != j");
    if (i == 0 || j == 0 || i >= n || j >= n) throw BadParameters("exponents must lie in 1..n-1");
    const std::uint64_t norm_exp = (f.order() - 1) / (Q - 1);
    if (f.pow(c, norm_exp) == f.one()) throw NotNonsingular("c^((q^n-1)/(q-1)) = 1");
    std::vector<Mat<Q>> out;
    for (unsigned a = 0; a < n; ++a) {
        const Vec<Q> x = f.x_pow(a);
        const Vec<Q> xf = f.frobenius(x, i);
        Mat<Q> m(n);
        for (unsigned b = 0; b < n; ++b) {
            const Vec<Q> y = f.x_pow(b);
            const Vec<Q> prod = f.mul(x, y) - f.mul(c, f.mul(xf, f.frobenius(y, j)));
            m.v += prod.v.shifted(b * n);
        }
        out.push_back(m);
    }
    return out;
}

template <unsigned Q>
MatSpace<Q> gtf_construct(const ExtField<Q>& f, unsigned i, unsigned j, const Vec<Q>& c) {
    return MatSpace<Q>::span(f.degree(), gtf_basis(f, i, j, c));
}

/// Isotope of a nonsingular space that contains the identity.
template <unsigned Q>
MatSpace<Q> kaplansky_normalize(const MatSpace<Q>& p) {
    if (p.dim() == 0 || !is_nonsingular(p)) throw NotNonsingular("input has a singular nonzero element");
    if (p.contains(Mat<Q>::identity(p.n()))) return p;
    const Mat<Q> ai = Mat<Q>(p.n(), p.rref().front()).inverse();
    return act_unchecked(Isotopism<Q>{ai, Mat<Q>::identity(p.n())}, p);
}

/// For a spread set containing I: the basis M_1..M_n whose first rows are
/// e_1..e_n. Its hypercube has two-sided identity e_1.
template <unsigned Q>
std::vector<Mat<Q>> semifield_basis(const MatSpace<Q>& s) {
    if (!is_spreadset(s)) throw NotNonsingular("not a spread set");
    if (!s.contains(Mat<Q>::identity(s.n()))) throw BadParameters("spread set does not contain the identity");
    const unsigned n = s.n();
    std::vector<Mat<Q>> out(n);
    s.for_each_element([&](const Mat<Q>& m) {
        const auto r = m.row(0);
        if (weight(r) == 1 && r.get(static_cast<unsigned>(lowest_nonzero(r))) == 1)
            out[lowest_nonzero(r)] = m;
    });
    return out;
}

/// Kaplansky-normalized slot-0 contraction spaces of the six S_3 images,
/// one per isotopism class.
template <unsigned Q>
std::vector<MatSpace<Q>> knuth_orbit(const MatSpace<Q>& c) {
    if (!is_spreadset(c)) throw NotNonsingular("knuth_orbit needs a spread set");
    const Hypercube<Q> h = hypercube_from_spreadset(c);
    std::vector<MatSpace<Q>> out;
    for (const auto& sigma : all_s3()) {
        const auto img = kaplansky_normalize(spreadset_from_hypercube(knuth_act(h, sigma)));
        bool fresh = true;
        for (const auto& o : out)
            if (are_equivalent(o, img)) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(img);
    }
    return out;
}

}  // namespace semirank
