#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "matspace.hpp"
#include "parallel.hpp"

namespace semirank {

// ---------------------------------------------------------------------------
// Isotopisms in spread-set form: the pair (A, B) acts by X -> A * X * B.
// Acting with g1 and then g2 equals acting with (A2*A1, B1*B2).
// ---------------------------------------------------------------------------

template <unsigned Q>
struct Isotopism {
    Mat<Q> A;
    Mat<Q> B;

    static Isotopism identity(unsigned n) { return {Mat<Q>::identity(n), Mat<Q>::identity(n)}; }
    Mat<Q> apply(const Mat<Q>& x) const { return A * x * B; }
    Isotopism inverse() const { return {A.inverse(), B.inverse()}; }
    friend bool operator==(const Isotopism&, const Isotopism&) = default;
};

/// g2 after g1.
template <unsigned Q>
Isotopism<Q> then(const Isotopism<Q>& g1, const Isotopism<Q>& g2) {
    return {g2.A * g1.A, g1.B * g2.B};
}

template <unsigned Q>
struct IsotopismHash {
    std::size_t operator()(const Isotopism<Q>& g) const { return g.A.v.hash() * 31 ^ g.B.v.hash(); }
};

template <unsigned Q>
MatSpace<Q> act(const Isotopism<Q>& g, const MatSpace<Q>& s) {
    if (!g.A.is_invertible() || !g.B.is_invertible()) throw NotInvertible("isotopism with a singular factor");
    return act_unchecked(g, s);
}

template <unsigned Q>
MatSpace<Q> act_unchecked(const Isotopism<Q>& g, const MatSpace<Q>& s) {
    std::vector<PackedVec<Q>> rows;
    rows.reserve(s.dim());
    for (const auto& b : s.rref()) rows.push_back((g.A * Mat<Q>(s.n(), b) * g.B).v);
    reduce_rows(rows);
    return MatSpace<Q>::from_rref(s.n(), std::move(rows));
}

// True iff g maps s onto itself (cheaper than building the image space).
template <unsigned Q>
bool stabilizes(const Isotopism<Q>& g, const MatSpace<Q>& s) {
    for (const auto& b : s.rref())
        if (!s.contains(g.apply(Mat<Q>(s.n(), b)))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

/// Characteristic polynomial det(xI - M), coefficients from x^n down to x^0
/// (division-free Samuelson-Berkowitz recursion).
template <unsigned Q>
std::vector<unsigned> char_poly(const Mat<Q>& m) {
    const unsigned n = m.n;
    std::vector<unsigned> p{1};
    for (unsigned k = 1; k <= n; ++k) {
        // Leading (k-1)x(k-1) block A, column c above and row r left of entry (k-1,k-1).
        const unsigned km = k - 1;
        std::vector<unsigned> t(k + 1, 0);
        t[0] = 1;
        t[1] = (Q - m.at(km, km)) % Q;
        std::vector<unsigned> v(km);  // A^j c
        for (unsigned i = 0; i < km; ++i) v[i] = m.at(i, km);
        for (unsigned j = 2; j <= k; ++j) {
            unsigned s = 0;
            for (unsigned i = 0; i < km; ++i) s += m.at(km, i) * v[i];
            t[j] = (Q - s % Q) % Q;
            std::vector<unsigned> nv(km, 0);
            for (unsigned a = 0; a < km; ++a) {
                unsigned acc = 0;
                for (unsigned b = 0; b < km; ++b) acc += m.at(a, b) * v[b];
                nv[a] = acc % Q;
            }
            v.swap(nv);
        }
        std::vector<unsigned> np(k + 1, 0);
        for (unsigned i = 0; i <= k; ++i) {
            unsigned acc = 0;
            for (unsigned j = 0; j <= std::min(i, k - 1); ++j) acc += t[i - j] * p[j];
            np[i] = acc % Q;
        }
        p.swap(np);
    }
    return p;
}

inline std::uint64_t mix64(std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ull;
    return h ^ (h >> 31);
}

/// Similarity-class invariant: characteristic polynomial together with the
/// ranks of (M - l*I) and (M - l*I)^2 for every scalar l.
template <unsigned Q>
std::uint64_t similarity_invariant(const Mat<Q>& m) {
    std::uint64_t h = 0x1234567ull;
    for (unsigned c : char_poly(m)) h = mix64(h, c);
    const Mat<Q> id = Mat<Q>::identity(m.n);
    for (unsigned l = 0; l < Q; ++l) {
        const Mat<Q> d = m - id.scaled(l);
        h = mix64(h, d.rank());
        h = mix64(h, (d * d).rank());
    }
    return h;
}

/// Cheap invariants of a space under X -> A X B.
struct Fingerprint {
    unsigned dim = 0;
    std::vector<std::uint64_t> rank_counts;  // index r: nonzero elements of rank r
    std::uint64_t rank_one_points = 0;
    unsigned rank_one_span = 0;
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

template <unsigned Q>
Fingerprint fingerprint(const MatSpace<Q>& s) {
    Fingerprint f;
    f.dim = s.dim();
    f.rank_counts.assign(s.n() + 1, 0);
    std::vector<PackedVec<Q>> ones;
    s.for_each_element([&](const Mat<Q>& m) {
        const unsigned r = m.rank();
        ++f.rank_counts[r];
        if (r == 1) ones.push_back(m.v);
    });
    f.rank_one_points = f.rank_counts[1] / (Q - 1);
    f.rank_one_span = static_cast<unsigned>(reduce_rows(ones));
    return f;
}

namespace detail {

inline constexpr std::uint64_t kAnchorBudget = std::uint64_t{1} << 17;

template <unsigned Q>
bool anchors_affordable(const MatSpace<Q>& s) {
    const std::uint64_t sz = s.size();
    return sz * sz <= kAnchorBudget;
}

// Invariant of the pair (S, X) for invertible X in S: the conjugacy class of
// S * X^{-1}, summarized by the sorted similarity invariants of its elements.
template <unsigned Q>
std::uint64_t anchor_invariant(const MatSpace<Q>& s, const Mat<Q>& x) {
    const Mat<Q> xi = x.inverse();
    std::vector<std::uint64_t> inv;
    inv.reserve(s.size());
    s.for_each_element([&](const Mat<Q>& m) { inv.push_back(similarity_invariant(m * xi)); });
    std::sort(inv.begin(), inv.end());
    std::uint64_t h = 0xABCDEFull;
    for (auto v : inv) h = mix64(h, v);
    return h;
}

template <unsigned Q>
std::vector<Mat<Q>> projective_invertibles(const MatSpace<Q>& s) {
    std::vector<Mat<Q>> out;
    s.for_each_projective([&](const Mat<Q>& m) {
        if (m.is_invertible()) out.push_back(m);
    });
    return out;
}

// Linear equations in the n^2 entries of A expressing A*u == w*A.
template <unsigned Q>
void intertwiner_equations(const Mat<Q>& u, const Mat<Q>& w, std::vector<PackedVec<Q>>& eqs) {
    const unsigned n = u.n;
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
            PackedVec<Q> row;
            for (unsigned k = 0; k < n; ++k) {
                const unsigned a = i * n + k;  // A_ik * u_kj
                row.set(a, (row.get(a) + u.at(k, j)) % Q);
                const unsigned b = k * n + j;  // - w_ik * A_kj
                row.set(b, (row.get(b) + (Q - w.at(i, k))) % Q);
            }
            if (!row.is_zero()) eqs.push_back(row);
        }
}

// Basis of the null space of an RREF system in `nvars` unknowns.
template <unsigned Q>
std::vector<PackedVec<Q>> kernel_basis(const std::vector<PackedVec<Q>>& rref, unsigned nvars) {
    std::uint64_t pivots = 0;
    for (const auto& r : rref) pivots |= std::uint64_t{1} << lowest_nonzero(r);
    std::vector<PackedVec<Q>> out;
    for (unsigned f = 0; f < nvars; ++f) {
        if (pivots >> f & 1u) continue;
        PackedVec<Q> v;
        v.set(f, 1);
        for (const auto& r : rref) {
            const unsigned c = r.get(f);
            if (c) v.set(static_cast<unsigned>(lowest_nonzero(r)), (Q - c) % Q);
        }
        out.push_back(v);
    }
    return out;
}

// Finds matrices A in GL_n with A * U1 * A^{-1} == U2 for unital spaces U1, U2.
template <unsigned Q>
class ConjugacySolver {
public:
    explicit ConjugacySolver(const MatSpace<Q>& u1) : u1_(u1), n_(u1.n()) {
        const Mat<Q> id = Mat<Q>::identity(n_);
        std::vector<PackedVec<Q>> eqs;
        std::vector<PackedVec<Q>> used{id.v};
        reduce_rows(used);
        unsigned cur = n_ * n_;
        std::unordered_map<std::uint64_t, unsigned> inv_count;
        u1_.for_each_element([&](const Mat<Q>& m) { ++inv_count[similarity_invariant(m)]; });
        for (;;) {
            if (pow_q(cur) <= 81) break;
            std::optional<Mat<Q>> best;
            unsigned best_dim = cur;
            unsigned best_count = ~0u;
            u1_.for_each_projective([&](const Mat<Q>& m) {
                if (residue<Q>(m.v, used).is_zero()) return;
                auto e = eqs;
                intertwiner_equations(m, m, e);
                const unsigned kd = n_ * n_ - static_cast<unsigned>(reduce_rows(e));
                const unsigned cnt = inv_count[similarity_invariant(m)];
                if (kd < best_dim || (kd == best_dim && best && cnt < best_count)) {
                    best = m;
                    best_dim = kd;
                    best_count = cnt;
                }
            });
            if (!best || best_dim == cur) break;
            chain_.push_back(*best);
            chain_inv_.push_back(similarity_invariant(*best));
            intertwiner_equations(*best, *best, eqs);
            reduce_rows(eqs);
            used.push_back(best->v);
            reduce_rows(used);
            cur = best_dim;
        }
        basis_ = u1_.basis();
    }

    /// Calls on_solution(A) for each solution; it returns false to stop early.
    /// Returns false if stopped early.
    template <class F>
    bool solve(const MatSpace<Q>& u2, F&& on_solution) const {
        if (u2.dim() != u1_.dim()) return true;
        std::unordered_map<std::uint64_t, std::vector<Mat<Q>>> by_inv;
        u2.for_each_element([&](const Mat<Q>& m) { by_inv[similarity_invariant(m)].push_back(m); });
        std::vector<std::vector<const Mat<Q>*>> cands(chain_.size());
        for (std::size_t k = 0; k < chain_.size(); ++k) {
            auto it = by_inv.find(chain_inv_[k]);
            if (it == by_inv.end()) return true;
            for (const auto& m : it->second) cands[k].push_back(&m);
        }
        std::vector<PackedVec<Q>> images{Mat<Q>::identity(n_).v};
        return descend(0, {}, images, cands, u2, on_solution);
    }

    std::size_t chain_length() const { return chain_.size(); }

private:
    static std::uint64_t pow_q(unsigned e) {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < e; ++i) r *= Q;
        return r;
    }

    template <class F>
    bool descend(std::size_t k, std::vector<PackedVec<Q>> eqs, std::vector<PackedVec<Q>> images,
                 const std::vector<std::vector<const Mat<Q>*>>& cands, const MatSpace<Q>& u2, F& on_solution) const {
        if (k == chain_.size()) return enumerate(eqs, u2, on_solution);
        reduce_rows(images);
        for (const Mat<Q>* w : cands[k]) {
            if (residue<Q>(w->v, images).is_zero()) continue;
            auto e = eqs;
            intertwiner_equations(chain_[k], *w, e);
            if (reduce_rows(e) == n_ * n_) continue;
            auto im = images;
            im.push_back(w->v);
            if (!descend(k + 1, std::move(e), std::move(im), cands, u2, on_solution)) return false;
        }
        return true;
    }

    template <class F>
    bool enumerate(const std::vector<PackedVec<Q>>& eqs, const MatSpace<Q>& u2, F& on_solution) const {
        const auto ker = kernel_basis(eqs, n_ * n_);
        const unsigned d = static_cast<unsigned>(ker.size());
        std::vector<unsigned> digit(d, 0);
        PackedVec<Q> sum;
        for (;;) {
            unsigned i = 0;
            while (i < d && digit[i] == Q - 1) {
                digit[i] = 0;
                sum += ker[i];
                ++i;
            }
            if (i == d) return true;
            ++digit[i];
            sum += ker[i];
            const Mat<Q> a(n_, sum);
            if (!a.is_invertible()) continue;
            const Mat<Q> ai = a.inverse();
            bool ok = true;
            for (const auto& b : basis_)
                if (!u2.contains(a * b * ai)) {
                    ok = false;
                    break;
                }
            if (ok && !on_solution(a)) return false;
        }
    }

    MatSpace<Q> u1_;
    unsigned n_;
    std::vector<Mat<Q>> chain_;
    std::vector<std::uint64_t> chain_inv_;
    std::vector<Mat<Q>> basis_;
};

template <unsigned Q>
std::vector<Mat<Q>> general_linear_group(unsigned n) {
    std::uint64_t total = 0;
    if (!checked_pow(Q, n * n, total) || total > (std::uint64_t{1} << 24))
        throw TooLarge("GL_n(q) enumeration too large");
    std::vector<Mat<Q>> out;
    for (std::uint64_t v = 0; v < total; ++v) {
        Mat<Q> m(n);
        std::uint64_t t = v;
        for (unsigned p = 0; p < n * n; ++p) {
            m.v.set(p, static_cast<unsigned>(t % Q));
            t /= Q;
        }
        if (m.is_invertible()) out.push_back(m);
    }
    return out;
}

// Exhaustive search over GL x GL; only for spaces without invertible elements.
template <unsigned Q, class F>
bool brute_force_isotopisms(const MatSpace<Q>& s1, const MatSpace<Q>& s2, F&& on_solution) {
    const auto gl = general_linear_group<Q>(s1.n());
    if (gl.size() * gl.size() > 5'000'000) throw TooLarge("brute-force isotopism search beyond budget");
    const auto basis = s1.basis();
    for (const auto& a : gl)
        for (const auto& b : gl) {
            bool ok = true;
            for (const auto& x : basis)
                if (!s2.contains(a * x * b)) {
                    ok = false;
                    break;
                }
            if (ok && !on_solution(Isotopism<Q>{a, b})) return false;
        }
    return true;
}

}  // namespace detail

/// Enumerates isotopisms g with act(g, s1) == s2. The callback returns false to
/// stop. Returns false if stopped early.
template <unsigned Q, class F>
bool for_each_isotopism(const MatSpace<Q>& s1, const MatSpace<Q>& s2, F&& on_solution) {
    if (s1.n() != s2.n()) throw DimensionMismatch("spaces over different matrix sizes");
    if (s1.dim() != s2.dim()) return true;
    const unsigned n = s1.n();
    if (s1.dim() == 0) {
        // Every pair stabilizes the zero space.
        return detail::brute_force_isotopisms(s1, s2, on_solution);
    }
    auto inv1 = detail::projective_invertibles(s1);
    auto inv2 = detail::projective_invertibles(s2);
    if (inv1.size() != inv2.size()) return true;
    if (inv1.empty()) return detail::brute_force_isotopisms(s1, s2, on_solution);

    // Anchor X1 in s1 drawn from its rarest anchor class; images Y in s2 must match.
    Mat<Q> x1 = inv1.front();
    std::optional<std::uint64_t> anchor_key;
    if (detail::anchors_affordable(s1)) {
        std::map<std::uint64_t, std::vector<Mat<Q>>> cls;
        for (const auto& x : inv1) cls[detail::anchor_invariant(s1, x)].push_back(x);
        auto best = cls.begin();
        for (auto it = cls.begin(); it != cls.end(); ++it)
            if (it->second.size() < best->second.size()) best = it;
        x1 = best->second.front();
        anchor_key = best->first;
    }
    const Mat<Q> x1i = x1.inverse();
    std::vector<Mat<Q>> u1b;
    for (const auto& b : s1.basis()) u1b.push_back(b * x1i);
    const detail::ConjugacySolver<Q> solver(MatSpace<Q>::span(n, u1b));

    for (const auto& y : inv2) {
        if (anchor_key && detail::anchor_invariant(s2, y) != *anchor_key) continue;
        const Mat<Q> yi = y.inverse();
        std::vector<Mat<Q>> u2b;
        for (const auto& b : s2.basis()) u2b.push_back(b * yi);
        const auto u2 = MatSpace<Q>::span(n, u2b);
        bool keep_going = solver.solve(u2, [&](const Mat<Q>& a) {
            // A X1 B = Y  =>  B = X1^{-1} A^{-1} Y; all scalar multiples of Y follow.
            const Mat<Q> b = x1i * a.inverse() * y;
            for (unsigned l = 1; l < Q; ++l)
                if (!on_solution(Isotopism<Q>{a, b.scaled(l)})) return false;
            return true;
        });
        if (!keep_going) return false;
    }
    return true;
}

template <unsigned Q>
std::optional<Isotopism<Q>> are_equivalent(const MatSpace<Q>& s1, const MatSpace<Q>& s2) {
    if (s1.n() != s2.n()) throw DimensionMismatch("spaces over different matrix sizes");
    if (s1.dim() != s2.dim()) return std::nullopt;
    if (s1 == s2) return Isotopism<Q>::identity(s1.n());
    std::optional<Isotopism<Q>> found;
    for_each_isotopism(s1, s2, [&](const Isotopism<Q>& g) {
        found = g;
        return false;
    });
    return found;
}

// ---------------------------------------------------------------------------
// Stabilizers
// ---------------------------------------------------------------------------

template <unsigned Q>
struct StabilizerGroup {
    MatSpace<Q> space;
    std::vector<Isotopism<Q>> elements;    // every element, identity first
    std::vector<Isotopism<Q>> generators;  // generates `elements`
    std::uint64_t order() const { return elements.size(); }
};

namespace detail {

// Greedy generating set: an element becomes a generator if the group
// generated so far does not contain it.
template <unsigned Q>
std::vector<Isotopism<Q>> generating_set(const std::vector<Isotopism<Q>>& elements) {
    std::vector<Isotopism<Q>> gens;
    if (elements.empty()) return gens;
    const unsigned n = elements.front().A.n;
    std::unordered_set<Isotopism<Q>, IsotopismHash<Q>> closure{Isotopism<Q>::identity(n)};
    std::vector<Isotopism<Q>> members{Isotopism<Q>::identity(n)};
    for (const auto& g : elements) {
        if (closure.count(g)) continue;
        gens.push_back(g);
        // Breadth-first closure of the enlarged group.
        std::vector<Isotopism<Q>> frontier = members;
        while (!frontier.empty()) {
            std::vector<Isotopism<Q>> next;
            for (const auto& h : frontier)
                for (const auto& s : gens) {
                    auto p = then(h, s);
                    if (closure.insert(p).second) {
                        members.push_back(p);
                        next.push_back(p);
                    }
                }
            frontier.swap(next);
        }
        if (members.size() == elements.size()) break;
    }
    return gens;
}

}  // namespace detail

template <unsigned Q>
StabilizerGroup<Q> make_group(const MatSpace<Q>& space, std::vector<Isotopism<Q>> elements) {
    const unsigned n = space.n();
    auto id = Isotopism<Q>::identity(n);
    auto it = std::find(elements.begin(), elements.end(), id);
    if (it == elements.end()) elements.insert(elements.begin(), id);
    else std::iter_swap(elements.begin(), it);
    StabilizerGroup<Q> g;
    g.space = space;
    g.generators = detail::generating_set(elements);
    g.elements = std::move(elements);
    return g;
}

template <unsigned Q>
StabilizerGroup<Q> automorphism_group(const MatSpace<Q>& s) {
    std::vector<Isotopism<Q>> elements;
    for_each_isotopism(s, s, [&](const Isotopism<Q>& g) {
        elements.push_back(g);
        return true;
    });
    return make_group(s, std::move(elements));
}

/// Elements of `group` that also stabilize `sub`.
template <unsigned Q>
StabilizerGroup<Q> subgroup_stabilizing(const StabilizerGroup<Q>& group, const MatSpace<Q>& sub) {
    std::vector<Isotopism<Q>> keep;
    for (const auto& g : group.elements)
        if (stabilizes(g, sub)) keep.push_back(g);
    return make_group(sub, std::move(keep));
}

template <unsigned Q>
StabilizerGroup<Q> trivial_group(const MatSpace<Q>& s) {
    return make_group(s, {Isotopism<Q>::identity(s.n())});
}

// ---------------------------------------------------------------------------
// Rank-one matrices and their orbits
// ---------------------------------------------------------------------------

/// All rank-one matrices of M_n(F_Q), ordered by encoding.
template <unsigned Q>
std::vector<Mat<Q>> rank_one_elements(unsigned n) {
    std::vector<Mat<Q>> out;
    std::uint64_t qn = 1;
    for (unsigned i = 0; i < n; ++i) qn *= Q;
    for (std::uint64_t a = 1; a < qn; ++a) {
        Vec<Q> u(n);
        std::uint64_t t = a;
        for (unsigned i = 0; i < n; ++i, t /= Q) u.set(i, static_cast<unsigned>(t % Q));
        for (std::uint64_t b = 1; b < qn; ++b) {
            Vec<Q> w(n);
            std::uint64_t s = b;
            for (unsigned i = 0; i < n; ++i, s /= Q) w.set(i, static_cast<unsigned>(s % Q));
            if (projective_normal(w.v) != w.v) continue;
            out.push_back(Mat<Q>::outer(u, w));
        }
    }
    std::sort(out.begin(), out.end(), [](const Mat<Q>& x, const Mat<Q>& y) { return encode(x) < encode(y); });
    return out;
}

/// One rank-one matrix per projective point (the one whose lowest nonzero entry is 1).
template <unsigned Q>
std::vector<Mat<Q>> rank_one_points(unsigned n) {
    std::vector<Mat<Q>> out;
    for (const auto& m : rank_one_elements<Q>(n))
        if (projective_normal(m.v) == m.v) out.push_back(m);
    return out;
}

struct Orbit {
    std::uint64_t representative;  // least encoding in the orbit
    std::uint64_t size;
};

/// Partition of `points` (closed under the group) into orbits; orbit of i is labels[i].
template <unsigned Q>
std::vector<std::size_t> orbit_labels(const std::vector<Isotopism<Q>>& generators, const std::vector<Mat<Q>>& points,
                                      bool projective) {
    std::unordered_map<PackedVec<Q>, std::size_t, PackedVecHash<Q>> index;
    for (std::size_t i = 0; i < points.size(); ++i) index.emplace(points[i].v, i);
    std::vector<std::size_t> parent(points.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : generators)
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto img = g.apply(points[i]).v;
            if (projective) img = projective_normal(img);
            auto it = index.find(img);
            if (it == index.end()) throw BadParameters("point set is not closed under the group");
            const std::size_t a = find(i), b = find(it->second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<std::size_t> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels[i] = find(i);
    return labels;
}

template <unsigned Q>
std::vector<Orbit> rank_one_orbits(const StabilizerGroup<Q>& group, unsigned n) {
    const auto ones = rank_one_elements<Q>(n);
    const auto labels = orbit_labels(group.generators, ones, false);
    std::map<std::size_t, Orbit> by_root;
    for (std::size_t i = 0; i < ones.size(); ++i) {
        auto [it, fresh] = by_root.try_emplace(labels[i], Orbit{encode(ones[i]), 0});
        ++it->second.size;
        it->second.representative = std::min(it->second.representative, encode(ones[i]));
    }
    std::vector<Orbit> out;
    for (auto& [_, o] : by_root) out.push_back(o);
    std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
    return out;
}

// ---------------------------------------------------------------------------
// Equivalence classes
// ---------------------------------------------------------------------------

/// Canonical image of s under an explicit finite group: the least reduced basis
/// (compared vector by vector) over all images g(s).
template <unsigned Q>
std::vector<PackedVec<Q>> canonical_under(const std::vector<Isotopism<Q>>& group, const MatSpace<Q>& s) {
    std::vector<PackedVec<Q>> best;
    bool have = false;
    const auto basis = s.basis();
    std::vector<PackedVec<Q>> rows(basis.size());
    for (const auto& g : group) {
        for (std::size_t i = 0; i < basis.size(); ++i) rows[i] = g.apply(basis[i]).v;
        auto r = rows;
        reduce_rows(r);
        if (!have || r < best) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

/// Strong G-invariant used to bucket spaces before pairwise testing.
template <unsigned Q>
std::uint64_t class_invariant(const MatSpace<Q>& s) {
    const Fingerprint f = fingerprint(s);
    std::uint64_t h = mix64(f.dim, f.rank_one_points);
    h = mix64(h, f.rank_one_span);
    for (auto c : f.rank_counts) h = mix64(h, c);
    if (detail::anchors_affordable(s)) {
        std::vector<std::uint64_t> a;
        for (const auto& x : detail::projective_invertibles(s)) a.push_back(detail::anchor_invariant(s, x));
        std::sort(a.begin(), a.end());
        for (auto v : a) h = mix64(h, v);
    }
    return h;
}

struct ClassOptions {
    unsigned workers = 1;
};

/// One representative per orbit of the input spaces, under the full group
/// (group == nullptr) or under an explicit subgroup. The representative of a
/// class is its member with the least key(), so the result depends only on
/// the input set. Output is sorted by key.
template <unsigned Q>
std::vector<MatSpace<Q>> equivalence_classes(std::vector<MatSpace<Q>> spaces,
                                             const StabilizerGroup<Q>* group = nullptr, ClassOptions opt = {}) {
    // Identical spaces first, then key order.
    std::vector<std::pair<std::vector<std::uint64_t>, MatSpace<Q>>> keyed;
    keyed.reserve(spaces.size());
    for (auto& s : spaces) keyed.emplace_back(s.key(), std::move(s));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    const std::size_t m = keyed.size();

    std::vector<char> is_rep(m, 0);
    if (group) {
        std::vector<std::vector<PackedVec<Q>>> canon(m);
        parallel_for(m, opt.workers, [&](std::size_t i) { canon[i] = canonical_under(group->elements, keyed[i].second); });
        std::set<std::vector<PackedVec<Q>>> seen;
        for (std::size_t i = 0; i < m; ++i)
            if (seen.insert(canon[i]).second) is_rep[i] = 1;
    } else {
        std::vector<std::uint64_t> inv(m);
        parallel_for(m, opt.workers, [&](std::size_t i) { inv[i] = class_invariant(keyed[i].second); });
        std::map<std::uint64_t, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < m; ++i) buckets[inv[i]].push_back(i);
        std::vector<const std::vector<std::size_t>*> bl;
        for (const auto& [_, b] : buckets) bl.push_back(&b);
        parallel_for(bl.size(), opt.workers, [&](std::size_t bi) {
            std::vector<std::size_t> reps;
            for (std::size_t i : *bl[bi]) {
                bool found = false;
                for (std::size_t r : reps)
                    if (are_equivalent(keyed[r].second, keyed[i].second)) {
                        found = true;
                        break;
                    }
                if (!found) {
                    reps.push_back(i);
                    is_rep[i] = 1;
                }
            }
        });
    }
    std::vector<MatSpace<Q>> out;
    for (std::size_t i = 0; i < m; ++i)
        if (is_rep[i]) out.push_back(std::move(keyed[i].second));
    return out;
}

}  // namespace semirank
