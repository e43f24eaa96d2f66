#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "algebra.hpp"
#include "tensor.hpp"

namespace semirank {

// ---------------------------------------------------------------------------
// Pure decompositions
// ---------------------------------------------------------------------------

/// T = sum_j factors[j][0] (x) factors[j][1] (x) ... (x) factors[j][t-1].
template <unsigned Q>
struct PureDecomposition {
    std::vector<unsigned> dims;
    std::vector<std::vector<Vec<Q>>> summands;

    std::size_t rank() const { return summands.size(); }
    GeneralTensor<Q> tensor() const {
        GeneralTensor<Q> t(dims);
        for (const auto& s : summands) t += GeneralTensor<Q>::pure(s);
        return t;
    }
};

/// Summand j is (f_j, u_j, w_j) with A_j = u_j w_j^T and f_j(e_i) the coefficient
/// of A_j when the i-th basis matrix is written in terms of A.
template <unsigned Q>
PureDecomposition<Q> decomposition_from_rank_ones(const std::vector<Mat<Q>>& basis, const std::vector<Mat<Q>>& ones) {
    if (basis.empty()) throw DimensionMismatch("empty basis");
    const unsigned n = basis.front().n;
    std::vector<PackedVec<Q>> gens;
    for (const auto& a : ones) {
        if (a.n != n) throw DimensionMismatch("rank-one matrix of wrong size");
        if (a.rank() != 1) throw NotRankOne("generator of rank " + std::to_string(a.rank()));
        gens.push_back(a.v);
    }
    if (rank_of(gens) != gens.size()) throw DependentGenerators("rank-one generators are linearly dependent");
    const std::size_t r = ones.size();
    std::vector<Vec<Q>> f(r, Vec<Q>(static_cast<unsigned>(basis.size())));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto c = express<Q>(gens, basis[i].v);
        if (!c) throw NotContained("basis matrix " + std::to_string(i) + " is outside the span");
        for (std::size_t j = 0; j < r; ++j) f[j].set(static_cast<unsigned>(i), (*c)[j]);
    }
    PureDecomposition<Q> d;
    d.dims = {static_cast<unsigned>(basis.size()), n, n};
    for (std::size_t j = 0; j < r; ++j) {
        auto [u, w] = rank_one_factor(ones[j]);
        d.summands.push_back({f[j], u, w});
    }
    return d;
}

// ---------------------------------------------------------------------------
// Generator matrices
// ---------------------------------------------------------------------------

template <unsigned Q>
struct GenMatrix {
    unsigned length = 0;
    std::vector<PackedVec<Q>> rows;

    unsigned k() const { return static_cast<unsigned>(rows.size()); }
    unsigned at(unsigned i, unsigned j) const { return rows[i].get(j); }

    /// Rows as digit strings, e.g. {"110110101", ...}.
    static GenMatrix from_strings(const std::vector<std::string>& text) {
        GenMatrix g;
        for (const auto& s : text) {
            if (g.rows.empty()) g.length = static_cast<unsigned>(s.size());
            if (s.size() != g.length) throw DimensionMismatch("generator rows of different lengths");
            if (g.length > kPackedCapacity) throw TooLarge("code length above 64");
            PackedVec<Q> v;
            for (unsigned j = 0; j < g.length; ++j) {
                const int d = s[j] - '0';
                if (d < 0 || d >= static_cast<int>(Q)) throw BadParameters("digit out of range in '" + s + "'");
                v.set(j, static_cast<unsigned>(d));
            }
            g.rows.push_back(v);
        }
        return g;
    }
    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        for (const auto& r : rows) {
            std::string s;
            for (unsigned j = 0; j < length; ++j) s += static_cast<char>('0' + r.get(j));
            out.push_back(s);
        }
        return out;
    }
    /// Row j as a base-Q integer, coordinate 0 least significant.
    std::vector<std::uint64_t> row_values() const {
        std::vector<std::uint64_t> out;
        for (const auto& r : rows) out.push_back(encode_row<Q>(r, length));
        return out;
    }
    static GenMatrix from_row_values(const std::vector<std::uint64_t>& values, unsigned length) {
        GenMatrix g;
        g.length = length;
        for (auto v : values) g.rows.push_back(decode_row<Q>(v, length));
        return g;
    }
    unsigned row_rank() const { return static_cast<unsigned>(rank_of(rows)); }
    friend bool operator==(const GenMatrix&, const GenMatrix&) = default;
};

/// G_s has column j equal to factor s of summand j.
template <unsigned Q>
std::vector<GenMatrix<Q>> codes_from_decomposition(const PureDecomposition<Q>& d) {
    std::vector<GenMatrix<Q>> out;
    const unsigned r = static_cast<unsigned>(d.rank());
    if (r > kPackedCapacity) throw TooLarge("more than 64 summands");
    for (unsigned s = 0; s < d.dims.size(); ++s) {
        GenMatrix<Q> g;
        g.length = r;
        g.rows.assign(d.dims[s], PackedVec<Q>{});
        for (unsigned j = 0; j < r; ++j)
            for (unsigned i = 0; i < d.dims[s]; ++i) g.rows[i].set(j, d.summands[j][s][i]);
        out.push_back(g);
    }
    return out;
}

namespace detail {

inline constexpr std::uint64_t kCodewordBudget = std::uint64_t{1} << 24;

template <unsigned Q, class F>
void for_each_codeword(const GenMatrix<Q>& g, F&& f) {
    std::uint64_t total = 0;
    if (!checked_pow(Q, g.k(), total) || total > kCodewordBudget) throw TooLarge("too many codewords to enumerate");
    const unsigned k = g.k();
    std::vector<unsigned> digit(k, 0);
    PackedVec<Q> sum;
    f(sum);
    for (;;) {
        unsigned i = 0;
        while (i < k && digit[i] == Q - 1) {
            digit[i] = 0;
            sum += g.rows[i];
            ++i;
        }
        if (i == k) return;
        ++digit[i];
        sum += g.rows[i];
        f(sum);
    }
}

}  // namespace detail

/// Number of combinations of the rows with each Hamming weight 0..length.
template <unsigned Q>
std::vector<std::uint64_t> weight_distribution(const GenMatrix<Q>& g) {
    std::vector<std::uint64_t> dist(g.length + 1, 0);
    detail::for_each_codeword(g, [&](const PackedVec<Q>& c) { ++dist[weight(c)]; });
    return dist;
}

/// Least positive weight of a codeword (0 for the zero code).
template <unsigned Q>
unsigned min_distance(const GenMatrix<Q>& g) {
    const auto dist = weight_distribution(g);
    for (unsigned w = 1; w < dist.size(); ++w)
        if (dist[w]) return w;
    return 0;
}

namespace detail {

// Columns of g as (projective point, multiplicity) with zero columns kept apart.
template <unsigned Q>
std::map<PackedVec<Q>, unsigned> column_points(const std::vector<PackedVec<Q>>& rows, unsigned length) {
    std::map<PackedVec<Q>, unsigned> pts;
    for (unsigned j = 0; j < length; ++j) {
        PackedVec<Q> col;
        for (unsigned i = 0; i < rows.size(); ++i) col.set(i, rows[i].get(j));
        if (!col.is_zero()) col = projective_normal(col);
        ++pts[col];
    }
    return pts;
}

template <unsigned Q>
PackedVec<Q> column(const std::vector<PackedVec<Q>>& rows, unsigned j) {
    PackedVec<Q> col;
    for (unsigned i = 0; i < rows.size(); ++i) col.set(i, rows[i].get(j));
    return col;
}

}  // namespace detail

/// Monomial equivalence of the row spaces: some A in GL_k maps the multiset of
/// projective columns of one basis onto the other's.
template <unsigned Q>
bool code_equivalent(const GenMatrix<Q>& g1, const GenMatrix<Q>& g2) {
    if (g1.length != g2.length) return false;
    auto r1 = g1.rows, r2 = g2.rows;
    reduce_rows(r1);
    reduce_rows(r2);
    if (r1.size() != r2.size()) return false;
    if (weight_distribution(GenMatrix<Q>{g1.length, r1}) != weight_distribution(GenMatrix<Q>{g2.length, r2}))
        return false;
    const unsigned k = static_cast<unsigned>(r1.size());
    const unsigned len = g1.length;
    if (k == 0) return true;
    const auto target = detail::column_points(r2, len);

    // Information set of g1: k independent columns.
    std::vector<unsigned> info;
    std::vector<PackedVec<Q>> span;
    for (unsigned j = 0; j < len && info.size() < k; ++j) {
        auto s = span;
        s.push_back(detail::column(r1, j));
        if (reduce_rows(s) > span.size()) {
            span = s;
            info.push_back(j);
        }
    }
    // Express every column of g1 in the information-set columns.
    std::vector<PackedVec<Q>> info_cols;
    for (unsigned j : info) info_cols.push_back(detail::column(r1, j));
    std::vector<std::vector<unsigned>> coeff(len);
    for (unsigned j = 0; j < len; ++j) coeff[j] = *express<Q>(info_cols, detail::column(r1, j));

    std::vector<PackedVec<Q>> images(k);
    std::vector<PackedVec<Q>> cols2;
    for (unsigned j = 0; j < len; ++j) cols2.push_back(detail::column(r2, j));
    std::function<bool(unsigned)> assign = [&](unsigned t) -> bool {
        if (t == k) {
            std::vector<PackedVec<Q>> cols(len);
            for (unsigned j = 0; j < len; ++j) {
                PackedVec<Q> c;
                for (unsigned i = 0; i < k; ++i)
                    if (coeff[j][i]) c.axpy(coeff[j][i], images[i]);
                cols[j] = c;
            }
            std::map<PackedVec<Q>, unsigned> pts;
            for (auto& c : cols) ++pts[c.is_zero() ? c : projective_normal(c)];
            return pts == target;
        }
        for (unsigned j = 0; j < len; ++j) {
            if (cols2[j].is_zero()) continue;
            // The first image only matters up to scalar.
            for (unsigned l = 1; l < (t == 0 ? 2u : Q); ++l) {
                images[t] = cols2[j].scaled(l);
                std::vector<PackedVec<Q>> s(images.begin(), images.begin() + t + 1);
                if (rank_of(s) != t + 1) continue;
                if (assign(t + 1)) return true;
            }
        }
        return false;
    };
    return assign(0);
}

// ---------------------------------------------------------------------------
// Existence of codes and the N_q(k,d) table
// ---------------------------------------------------------------------------

enum class Existence { No, Yes, Unknown };

inline const char* to_string(Existence e) {
    switch (e) {
        case Existence::No: return "false";
        case Existence::Yes: return "true";
        default: return "unknown";
    }
}

struct BoundEntry {
    unsigned q, k, d, length;
    const char* note;
};

/// Literal values; everything else is computed.
inline const std::vector<BoundEntry>& bound_table() {
    static const std::vector<BoundEntry> t = {
        {2, 4, 4, 8, "N_2(4,4) = 8"},
        {3, 4, 4, 8, "N_3(4,4) = 8"},
    };
    return t;
}

struct NonexistenceEntry {
    unsigned q, length, k, d;
    const char* note;
};

inline const std::vector<NonexistenceEntry>& nonexistence_table() {
    static const std::vector<NonexistenceEntry> t = {
        {3, 8, 4, 5, "no [8,4,5] code over F_3"},
    };
    return t;
}

/// Griesmer length sum_{i<k} ceil(d / q^i); a lower bound on the length.
inline unsigned griesmer_length(unsigned q, unsigned k, unsigned d) {
    unsigned total = 0;
    unsigned long long qi = 1;
    for (unsigned i = 0; i < k; ++i, qi *= q) total += static_cast<unsigned>((d + qi - 1) / qi);
    return total;
}

namespace detail {

inline constexpr std::uint64_t kSearchNodeBudget = 400'000'000;

// Backtracking over systematic generator matrices [I | P]. Columns of P are
// kept scaled (leading nonzero 1) and sorted, rows are added one at a time and
// every combination of the rows so far must reach weight d.
template <unsigned Q>
class SystematicSearch {
public:
    SystematicSearch(unsigned length, unsigned k, unsigned d) : len_(length), k_(k), d_(d), r_(length - k) {}

    Existence run() {
        if (k_ == 0) return Existence::Yes;
        if (r_ == 0) return d_ <= 1 ? Existence::Yes : Existence::No;
        rows_.clear();
        combos_.assign(1, PackedVec<Q>{});
        combo_support_.assign(1, 0);
        nodes_ = 0;
        try {
            return extend() ? Existence::Yes : Existence::No;
        } catch (const TooLarge&) {
            return Existence::Unknown;
        }
    }

private:
    bool extend() {
        if (rows_.size() == k_) return true;
        const unsigned row = static_cast<unsigned>(rows_.size());
        std::uint64_t total = 1;
        for (unsigned i = 0; i < r_; ++i) total *= Q;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            if (++nodes_ > kSearchNodeBudget) throw TooLarge("search budget");
            PackedVec<Q> p;
            std::uint64_t t = idx;
            for (unsigned j = 0; j < r_; ++j, t /= Q) p.set(j, static_cast<unsigned>(t % Q));
            if (weight(p) + 1 < d_) continue;
            if (!columns_ok(p)) continue;
            // New combinations: old + c * p for c != 0; weight adds 1 for the identity part.
            bool ok = true;
            std::vector<PackedVec<Q>> fresh;
            std::vector<unsigned> fresh_support;
            for (std::size_t i = 0; i < combos_.size() && ok; ++i)
                for (unsigned c = 1; c < Q; ++c) {
                    PackedVec<Q> v = combos_[i];
                    v.axpy(c, p);
                    if (combo_support_[i] + 1 + weight(v) < d_) {
                        ok = false;
                        break;
                    }
                    fresh.push_back(v);
                    fresh_support.push_back(combo_support_[i] + 1);
                }
            if (!ok) continue;
            const std::size_t old = combos_.size();
            combos_.insert(combos_.end(), fresh.begin(), fresh.end());
            combo_support_.insert(combo_support_.end(), fresh_support.begin(), fresh_support.end());
            rows_.push_back(p);
            (void)row;
            if (extend()) return true;
            rows_.pop_back();
            combos_.resize(old);
            combo_support_.resize(old);
        }
        return false;
    }

    // Column j of P restricted to the rows so far plus the candidate row.
    bool columns_ok(const PackedVec<Q>& p) const {
        for (unsigned j = 0; j < r_; ++j) {
            bool zero_so_far = true;
            for (const auto& r : rows_)
                if (r.get(j)) {
                    zero_so_far = false;
                    break;
                }
            if (zero_so_far && p.get(j) > 1) return false;
        }
        for (unsigned j = 0; j + 1 < r_; ++j) {
            bool tied = true;
            for (const auto& r : rows_)
                if (r.get(j) != r.get(j + 1)) {
                    tied = false;
                    break;
                }
            if (tied && p.get(j) > p.get(j + 1)) return false;
        }
        return true;
    }

    unsigned len_, k_, d_, r_;
    std::vector<PackedVec<Q>> rows_;
    std::vector<PackedVec<Q>> combos_;
    std::vector<unsigned> combo_support_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Whether an [length, k, >= d] code over F_q exists (exhaustive when affordable).
inline Existence code_exists(unsigned q, unsigned length, unsigned k, unsigned d) {
    if (!is_supported_prime(q)) throw UnsupportedField("q=" + std::to_string(q));
    if (k == 0 || d == 0) return Existence::Yes;
    if (k > length || d > length - k + 1) return Existence::No;
    if (length < griesmer_length(q, k, d)) return Existence::No;
    for (const auto& e : nonexistence_table())
        if (e.q == q && e.k == k && e.d <= d && e.length >= length) return Existence::No;
    for (const auto& e : bound_table())
        if (e.q == q && e.k == k && e.d >= d && e.length <= length) return Existence::Yes;
    if (length - k > kPackedCapacity) return Existence::Unknown;
    return with_field(q, [&]<unsigned Q>() { return detail::SystematicSearch<Q>(length, k, d).run(); });
}

/// Shortest length of a k-dimensional code with minimum distance >= d.
inline unsigned nq_lookup(unsigned q, unsigned k, unsigned d) {
    for (const auto& e : bound_table())
        if (e.q == q && e.k == k && e.d == d) return e.length;
    for (unsigned len = std::max(k + d - 1, griesmer_length(q, k, d));; ++len) {
        const Existence ex = code_exists(q, len, k, d);
        if (ex == Existence::Yes) return len;
        if (ex == Existence::Unknown)
            throw Unknown("N_" + std::to_string(q) + "(" + std::to_string(k) + "," + std::to_string(d) +
                          ") undecided at length " + std::to_string(len));
    }
}

// ---------------------------------------------------------------------------
// Tensor-rank lower bounds
// ---------------------------------------------------------------------------

template <unsigned Q>
unsigned min_rank_in_space(const MatSpace<Q>& s) {
    unsigned best = s.n() + 1;
    s.for_each_projective([&](const Mat<Q>& m) { best = std::min(best, m.rank()); });
    return s.dim() == 0 ? 0 : best;
}

/// Exact tensor rank by search over sets of projective pure tensors, or nullopt
/// when the rank exceeds cap.
template <unsigned Q>
std::optional<unsigned> brute_force_tensor_rank(const GeneralTensor<Q>& t, unsigned cap);

template <unsigned Q>
unsigned matrix_rank(const GeneralTensor<Q>& t) {
    if (t.order() != 2) throw BadParameters("matrix_rank needs an order-2 tensor");
    std::vector<PackedVec<Q>> rows(t.dims()[0]);
    for (unsigned i = 0; i < t.dims()[0]; ++i)
        for (unsigned j = 0; j < t.dims()[1]; ++j) rows[i].set(j, t.at({i, j}));
    return static_cast<unsigned>(reduce_rows(rows));
}

struct GenBound {
    unsigned bound = 0;
    bool partial = false;              // some slot had no decided table entry
    std::vector<unsigned> slot_dims;   // dim C_i
    std::vector<unsigned> slot_dists;  // d_i
};

/// max over slots of N_q(dim C_i, d_i), d_i the least tensor rank of a nonzero
/// slot-i contraction.
template <unsigned Q>
GenBound genbound(const GeneralTensor<Q>& t) {
    GenBound g;
    for (unsigned s = 0; s < t.order(); ++s) {
        std::vector<unsigned> rest;
        for (unsigned r = 0; r < t.order(); ++r)
            if (r != s) rest.push_back(t.dims()[r]);
        const auto basis = contraction_space(t, s);
        const unsigned k = static_cast<unsigned>(basis.size());
        unsigned d = ~0u;
        std::vector<unsigned> digit(k, 0);
        PackedVec<Q> sum;
        // Projective enumeration of the contraction space.
        for (;;) {
            unsigned i = 0;
            while (i < k && digit[i] == Q - 1) {
                digit[i] = 0;
                sum += basis[i];
                ++i;
            }
            if (i == k) break;
            ++digit[i];
            sum += basis[i];
            unsigned top = k;
            while (top > 0 && digit[top - 1] == 0) --top;
            if (digit[top - 1] != 1) continue;
            const auto c = GeneralTensor<Q>::from_flat(rest, sum);
            unsigned r;
            if (c.order() == 2) r = matrix_rank(c);
            else if (c.order() == 1) r = 1;
            else r = brute_force_tensor_rank(c, c.volume() > 0 ? static_cast<unsigned>(c.volume()) : 1).value();
            d = std::min(d, r);
        }
        if (k == 0) d = 0;
        g.slot_dims.push_back(k);
        g.slot_dists.push_back(d);
        if (k == 0) continue;
        try {
            g.bound = std::max(g.bound, nq_lookup(Q, k, d));
        } catch (const Unknown&) {
            g.partial = true;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Brute-force tensor rank
// ---------------------------------------------------------------------------

namespace detail {

template <unsigned Q>
std::vector<Vec<Q>> projective_points(unsigned len) {
    std::vector<Vec<Q>> out;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < len; ++i) total *= Q;
    for (std::uint64_t v = 1; v < total; ++v) {
        Vec<Q> x(len);
        std::uint64_t t = v;
        for (unsigned i = 0; i < len; ++i, t /= Q) x.set(i, static_cast<unsigned>(t % Q));
        if (projective_normal(x.v) == x.v) out.push_back(x);
    }
    return out;
}

template <unsigned Q>
std::vector<PackedVec<Q>> pure_tensors(const std::vector<unsigned>& dims) {
    std::vector<std::vector<Vec<Q>>> pts;
    for (unsigned d : dims) pts.push_back(projective_points<Q>(d));
    std::vector<PackedVec<Q>> out;
    std::vector<std::size_t> idx(dims.size(), 0);
    for (;;) {
        std::vector<Vec<Q>> f;
        for (std::size_t s = 0; s < dims.size(); ++s) f.push_back(pts[s][idx[s]]);
        out.push_back(GeneralTensor<Q>::pure(f).flat());
        std::size_t s = 0;
        while (s < dims.size() && ++idx[s] == pts[s].size()) idx[s++] = 0;
        if (s == dims.size()) break;
    }
    return out;
}

// Largest contraction-space dimension: a lower bound for the rank.
template <unsigned Q>
unsigned flattening_bound(const std::vector<unsigned>& dims, const PackedVec<Q>& flat) {
    const auto t = GeneralTensor<Q>::from_flat(dims, flat);
    unsigned b = 0;
    for (unsigned s = 0; s < t.order(); ++s) b = std::max(b, static_cast<unsigned>(contraction_space(t, s).size()));
    return b;
}

}  // namespace detail

template <unsigned Q>
std::optional<unsigned> brute_force_tensor_rank(const GeneralTensor<Q>& t, unsigned cap) {
    if (t.volume() > kPackedCapacity) throw TooLarge("tensor volume above 64");
    const PackedVec<Q> target = t.flat();
    if (target.is_zero()) return 0u;
    const auto pure = detail::pure_tensors<Q>(t.dims());
    // Size guard on the unpruned search: sum over r <= cap of C(|pure|, r) * (Q-1)^r.
    long double est = 0, term = 1;
    for (unsigned r = 1; r <= cap; ++r) {
        term = term * static_cast<long double>(pure.size() - r + 1) / r * (Q - 1);
        est += term;
    }
    if (est > 2e10L) throw TooLarge("pure-tensor search beyond budget");
    const std::vector<unsigned> dims = t.dims();
    // rank(T) <= r iff T == c*P or rank(T - c*P) <= r-1 for some pure P (indices increasing).
    std::function<bool(const PackedVec<Q>&, unsigned, std::size_t)> within = [&](const PackedVec<Q>& x, unsigned r,
                                                                              std::size_t from) -> bool {
        if (x.is_zero()) return true;
        if (r == 0) return false;
        if (detail::flattening_bound<Q>(dims, x) > r) return false;
        for (std::size_t i = from; i < pure.size(); ++i)
            for (unsigned c = 1; c < Q; ++c) {
                PackedVec<Q> y = x;
                y.axpy(Q - c, pure[i]);
                if (within(y, r - 1, i + 1)) return true;
            }
        return false;
    };
    for (unsigned r = detail::flattening_bound<Q>(dims, target); r <= cap; ++r)
        if (within(target, r, 0)) return r;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Codewords against contractions
// ---------------------------------------------------------------------------

template <unsigned Q>
struct SupportCheck {
    PackedVec<Q> codeword;
    unsigned weight = 0;
    GeneralTensor<Q> contraction;
    std::optional<unsigned> contraction_rank;  // absent when the oracle was infeasible
    bool verified = false;                     // rank <= weight confirmed
};

/// The codeword of C_slot for covector f, the contraction f(T), and the check
/// that the contraction's tensor rank is at most the codeword weight.
template <unsigned Q>
SupportCheck<Q> codeword_support_check(const PureDecomposition<Q>& d, const Vec<Q>& f, unsigned slot) {
    if (slot >= d.dims.size()) throw BadSlot("slot out of range");
    if (f.n != d.dims[slot]) throw DimensionMismatch("covector length");
    SupportCheck<Q> out;
    for (unsigned j = 0; j < d.rank(); ++j) out.codeword.set(j, dot(f, d.summands[j][slot]));
    out.weight = weight(out.codeword);
    out.contraction = d.tensor().contract(slot, f);
    try {
        if (out.contraction.order() == 2) out.contraction_rank = matrix_rank(out.contraction);
        else out.contraction_rank = brute_force_tensor_rank(out.contraction, out.weight);
        out.verified = out.contraction_rank.has_value() && *out.contraction_rank <= out.weight;
    } catch (const TooLarge&) {
        out.contraction_rank.reset();
    }
    return out;
}

}  // namespace semirank
