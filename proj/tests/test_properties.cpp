#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "semirank.hpp"

using namespace semirank;

namespace {

template <unsigned Q>
Mat<Q> random_mat(std::mt19937_64& rng, unsigned n) {
    Mat<Q> m(n);
    for (unsigned i = 0; i < n * n; ++i) m.v.set(i, static_cast<unsigned>(rng() % Q));
    return m;
}

template <unsigned Q>
Mat<Q> random_invertible(std::mt19937_64& rng, unsigned n) {
    for (;;)
        if (auto m = random_mat<Q>(rng, n); m.is_invertible()) return m;
}

template <unsigned Q>
Isotopism<Q> random_isotopism(std::mt19937_64& rng, unsigned n) {
    return {random_invertible<Q>(rng, n), random_invertible<Q>(rng, n)};
}

template <unsigned Q>
MatSpace<Q> random_space(std::mt19937_64& rng, unsigned n, unsigned k) {
    for (;;) {
        std::vector<Mat<Q>> b;
        for (unsigned i = 0; i < k; ++i) b.push_back(random_mat<Q>(rng, n));
        auto s = MatSpace<Q>::span(n, b);
        if (s.dim() == k) return s;
    }
}

std::uint64_t gl_order(unsigned q, unsigned n) {
    std::uint64_t qn = 1, r = 1;
    for (unsigned i = 0; i < n; ++i) qn *= q;
    for (std::uint64_t qi = 1, i = 0; i < n; ++i, qi *= q) r *= qn - qi;
    return r;
}

}  // namespace

TEST(Properties, RankOneCountFormula) {
    for (unsigned n = 1; n <= 4; ++n) {
        const std::uint64_t a = (std::uint64_t{1} << n) - 1;
        EXPECT_EQ(rank_one_elements<2>(n).size(), a * a) << n;
        std::uint64_t b = 1;
        for (unsigned i = 0; i < n; ++i) b *= 3;
        EXPECT_EQ(rank_one_elements<3>(n).size(), (b - 1) * (b - 1) / 2) << n;
    }
}

TEST(Properties, FingerprintIsInvariant) {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 1000; ++t) {
        const auto s = random_space<2>(rng, 3, 1 + t % 4);
        EXPECT_EQ(fingerprint(act(random_isotopism<2>(rng, 3), s)), fingerprint(s));
    }
    const auto c = atlas_space<3>(atlas_get("III"));
    const auto f = fingerprint(c);
    for (int t = 0; t < 100; ++t) EXPECT_EQ(fingerprint(act(random_isotopism<3>(rng, 4), c)), f);
}

TEST(Properties, ClassesAreScheduleIndependent) {
    std::mt19937_64 rng(52);
    std::vector<MatSpace<2>> spaces;
    for (int t = 0; t < 30; ++t) {
        const auto s = random_space<2>(rng, 3, 2);
        spaces.push_back(s);
        spaces.push_back(act(random_isotopism<2>(rng, 3), s));
    }
    const auto base = equivalence_classes(spaces);
    for (unsigned w : {1u, 2u, 4u}) {
        auto shuffled = spaces;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(equivalence_classes(shuffled, static_cast<const StabilizerGroup<2>*>(nullptr), ClassOptions{w}), base);
    }
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j) EXPECT_FALSE(are_equivalent(base[i], base[j]).has_value());
}

TEST(Properties, ClassesMergeExactlyEquivalentPairs) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 60; ++t) {
        const auto a = random_space<2>(rng, 3, 3), b = random_space<2>(rng, 3, 3);
        const auto img = act(random_isotopism<2>(rng, 3), a);
        const bool eq = are_equivalent(a, b).has_value();
        EXPECT_EQ(equivalence_classes(std::vector<MatSpace<2>>{a, img, b}).size(), eq ? 1u : 2u);
    }
}

TEST(Properties, AutomorphismGroupsDivideGroupOrder) {
    std::mt19937_64 rng(54);
    const std::uint64_t gl2 = gl_order(2, 3) * gl_order(2, 3);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_space<2>(rng, 3, 1 + t % 3);
        const auto g = automorphism_group(s);
        EXPECT_EQ(gl2 % g.order(), 0u);
        for (const auto& h : g.generators) EXPECT_EQ(act(h, s), s);
    }
}

TEST(Properties, NonsingularImpliesConcise) {
    for (const auto& e : atlas_entries())
        with_field(e.q, [&]<unsigned Q>() {
            const auto h = hypercube_from_spreadset(atlas_space<Q>(e));
            EXPECT_TRUE(is_concise(h.tensor())) << e.name;
        });
}

TEST(Properties, TransposeKeepsSpreadSets) {
    for (const auto& e : atlas_entries())
        with_field(e.q, [&]<unsigned Q>() {
            std::vector<Mat<Q>> t;
            for (const auto& m : atlas_space<Q>(e).basis()) t.push_back(m.transpose());
            EXPECT_TRUE(is_spreadset(MatSpace<Q>::span(e.n, t))) << e.name;
        });
}

TEST(Properties, DecompositionsReconstructTheTensor) {
    for (const auto& e : atlas_entries())
        with_field(e.q, [&]<unsigned Q>() {
            const auto c = atlas_space<Q>(e);
            const auto d = decomposition_from_rank_ones(c.basis(), atlas_decomposition<Q>(e));
            EXPECT_EQ(d.tensor(), hypercube_from_spreadset(c).tensor()) << e.name;
        });
}

TEST(Properties, SubspacesOfSmallerRank) {
    // dim(C meet span(A_1..A_{R-k})) >= n - k for every ordering of a decomposition.
    std::mt19937_64 rng(55);
    for (const auto& e : atlas_entries())
        with_field(e.q, [&]<unsigned Q>() {
            const auto c = atlas_space<Q>(e);
            auto ones = atlas_decomposition<Q>(e);
            const unsigned r = static_cast<unsigned>(ones.size());
            for (int t = 0; t < 10; ++t) {
                std::shuffle(ones.begin(), ones.end(), rng);
                for (unsigned k = 0; k <= e.n; ++k) {
                    const auto part = MatSpace<Q>::span(e.n, std::vector<Mat<Q>>(ones.begin(), ones.begin() + (r - k)));
                    EXPECT_GE(intersection_dim(c, part), e.n - k) << e.name << " k=" << k;
                }
            }
        });
}

TEST(Properties, CodewordWeightBoundsContractionRank) {
    std::mt19937_64 rng(56);
    std::vector<PureDecomposition<2>> decomps;
    for (const auto& s : {field_construct<2>({1, 1, 1}), field_construct<2>({1, 1, 0, 1})}) {
        decomps.push_back(decomposition_from_rank_ones(s.basis(), tensor_rank(s, automorphism_group(s), 8).witness));
    }
    // Decompositions from rank-one bases of random spaces containing C.
    const auto pts3 = rank_one_points<2>(3);
    for (int t = 0; t < 10; ++t) {
        const auto c = random_space<2>(rng, 3, 2);
        auto ones = rank_one_basis(MatSpace<2>::span(3, rank_one_elements<2>(3)), pts3).value();
        std::shuffle(ones.begin(), ones.end(), rng);
        decomps.push_back(decomposition_from_rank_ones(c.basis(), ones));
    }
    for (const auto& d : decomps)
        for (unsigned slot = 0; slot < 3; ++slot) {
            const unsigned k = d.dims[slot];
            for (unsigned a = 1; a < (1u << k); ++a) {
                Vec<2> f(k);
                for (unsigned i = 0; i < k; ++i) f.set(i, (a >> i) & 1);
                const auto s = codeword_support_check(d, f, slot);
                ASSERT_TRUE(s.contraction_rank.has_value());
                EXPECT_LE(*s.contraction_rank, s.weight);
                EXPECT_TRUE(s.verified);
            }
        }
}

TEST(Properties, MinDistanceAtLeastMaxContractionDims) {
    // Order-4 tensors: the slot-0 code has distance at least the least, over nonzero f,
    // of the largest image dimension of f(T) in the remaining slots.
    std::mt19937_64 rng(57);
    for (int t = 0; t < 40; ++t) {
        const std::vector<unsigned> dims{2 + static_cast<unsigned>(rng() % 2), 2, 2 + static_cast<unsigned>(rng() % 2), 2};
        PureDecomposition<2> d;
        d.dims = dims;
        const unsigned r = 2 + static_cast<unsigned>(rng() % 5);
        for (unsigned j = 0; j < r; ++j) {
            std::vector<Vec<2>> s;
            for (unsigned x : dims) {
                Vec<2> v(x);
                while (v.is_zero())
                    for (unsigned i = 0; i < x; ++i) v.set(i, static_cast<unsigned>(rng() % 2));
                s.push_back(v);
            }
            d.summands.push_back(s);
        }
        const auto code = codes_from_decomposition(d)[0];
        const auto t0 = d.tensor();
        unsigned bound = ~0u;
        for (unsigned a = 1; a < (1u << dims[0]); ++a) {
            Vec<2> f(dims[0]);
            for (unsigned i = 0; i < dims[0]; ++i) f.set(i, (a >> i) & 1);
            const auto c = t0.contract(0, f);
            unsigned best = 0;
            for (unsigned slot = 0; slot < c.order(); ++slot)
                best = std::max(best, static_cast<unsigned>(contraction_space(c, slot).size()));
            bound = std::min(bound, best);
        }
        // Codewords of weight zero come from covectors killing every summand.
        if (code.row_rank() == dims[0]) {
            EXPECT_GE(min_distance(code), bound);
        }
    }
}

TEST(Properties, TensorRankInvariantUnderIsotopism) {
    std::mt19937_64 rng(58);
    for (int t = 0; t < 6; ++t) {
        const auto c = random_space<2>(rng, 3, 3);
        const auto r = tensor_rank(c, automorphism_group(c), 9).rank;
        const auto img = act(random_isotopism<2>(rng, 3), c);
        EXPECT_EQ(tensor_rank(img, automorphism_group(img), 9).rank, r);
    }
}

TEST(Properties, TensorRankInvariantAcrossKnuthOrbit) {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 4; ++t) {
        const auto c = random_space<2>(rng, 3, 3);
        const auto h = hypercube_from_spreadset(c);
        if (!is_concise(h.tensor())) continue;
        const auto r = tensor_rank(c, automorphism_group(c), 9).rank;
        for (const auto& s : all_s3()) {
            const auto k = spreadset_from_hypercube(knuth_act(h, s));
            EXPECT_EQ(tensor_rank(k, automorphism_group(k), 9).rank, r);
        }
    }
    const auto f8 = field_construct<2>({1, 1, 0, 1});
    for (const auto& k : knuth_orbit(f8)) EXPECT_EQ(tensor_rank(k, automorphism_group(k), 8).rank, 6u);
}
