#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "semirank.hpp"

using namespace semirank;

namespace {

// Largest minimum distance of any rank-k code of the given length, over every k x len matrix.
template <unsigned Q>
unsigned best_distance(unsigned len, unsigned k) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < len * k; ++i) total *= Q;
    unsigned best = 0;
    for (std::uint64_t t = 0; t < total; ++t) {
        GenMatrix<Q> g;
        g.length = len;
        g.rows.assign(k, PackedVec<Q>{});
        std::uint64_t x = t;
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < len; ++j, x /= Q) g.rows[i].set(j, static_cast<unsigned>(x % Q));
        if (g.row_rank() != k) continue;
        best = std::max(best, min_distance(g));
    }
    return best;
}

// Least weight by enumerating all coefficient vectors directly.
template <unsigned Q>
unsigned naive_min_distance(const GenMatrix<Q>& g) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < g.k(); ++i) total *= Q;
    unsigned best = 0;
    for (std::uint64_t t = 1; t < total; ++t) {
        std::uint64_t x = t;
        unsigned w = 0;
        std::vector<unsigned> c(g.k());
        for (unsigned i = 0; i < g.k(); ++i, x /= Q) c[i] = static_cast<unsigned>(x % Q);
        for (unsigned j = 0; j < g.length; ++j) {
            unsigned s = 0;
            for (unsigned i = 0; i < g.k(); ++i) s = (s + c[i] * g.at(i, j)) % Q;
            w += s != 0;
        }
        if (w && (!best || w < best)) best = w;
    }
    return best;
}

std::vector<std::vector<std::uint64_t>> sorted_weights(const std::vector<GenMatrix<3>>& codes) {
    std::vector<std::vector<std::uint64_t>> out;
    for (const auto& g : codes) out.push_back(weight_distribution(g));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Codes, WeightDistributionsOfDisplayedGenerators) {
    const auto g1 = GenMatrix<3>::from_strings(atlas_g1());
    const auto g2 = GenMatrix<3>::from_strings(atlas_g2());
    const auto g3 = GenMatrix<3>::from_strings(atlas_g3());
    EXPECT_EQ(weight_distribution(g1), atlas_weights_g1());
    EXPECT_EQ(weight_distribution(g2), atlas_weights_g1());
    EXPECT_EQ(weight_distribution(g3), atlas_weights_g3());
    EXPECT_EQ(min_distance(g1), 4u);
    EXPECT_TRUE(code_equivalent(g1, g2));
    EXPECT_FALSE(code_equivalent(g1, g3));
    EXPECT_FALSE(code_equivalent(g2, g3));
    EXPECT_EQ(g1.to_strings(), atlas_g1());
}

TEST(Codes, DecompositionCodesMatchDisplayedOnes) {
    const auto& e = atlas_get("F81");
    const auto d = decomposition_from_rank_ones(atlas_space<3>(e).basis(), atlas_decomposition<3>(e));
    const auto ours = codes_from_decomposition(d);
    ASSERT_EQ(ours.size(), 3u);
    std::vector<GenMatrix<3>> shown{GenMatrix<3>::from_strings(atlas_g1()), GenMatrix<3>::from_strings(atlas_g2()),
                                    GenMatrix<3>::from_strings(atlas_g3())};
    EXPECT_EQ(sorted_weights(ours), sorted_weights(shown));
    for (const auto& g : shown)
        EXPECT_TRUE(std::any_of(ours.begin(), ours.end(), [&](const auto& h) { return code_equivalent(g, h); }));
    for (const auto& g : ours) {
        EXPECT_EQ(g.length, 9u);
        EXPECT_EQ(g.row_rank(), 4u);
        EXPECT_GE(min_distance(g), 4u);
    }
}

TEST(Codes, MinDistanceAgreesWithNaiveEnumeration) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t) {
        GenMatrix<3> g;
        g.length = 3 + static_cast<unsigned>(rng() % 6);
        g.rows.assign(1 + rng() % 4, PackedVec<3>{});
        for (auto& r : g.rows)
            for (unsigned j = 0; j < g.length; ++j) r.set(j, static_cast<unsigned>(rng() % 3));
        EXPECT_EQ(min_distance(g), naive_min_distance(g));
        const auto w = weight_distribution(g);
        std::uint64_t sum = 0;
        for (auto x : w) sum += x;
        std::uint64_t size = 1;
        for (unsigned i = 0; i < g.k(); ++i) size *= 3;
        EXPECT_EQ(sum, size);
    }
}

TEST(Codes, EquivalenceUnderMonomialMaps) {
    std::mt19937_64 rng(42);
    auto g = GenMatrix<3>::from_strings(atlas_g3());
    for (int t = 0; t < 20; ++t) {
        std::vector<unsigned> perm(g.length);
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);
        GenMatrix<3> h{g.length, std::vector<PackedVec<3>>(g.k())};
        for (unsigned j = 0; j < g.length; ++j) {
            const unsigned s = 1 + static_cast<unsigned>(rng() % 2);
            for (unsigned i = 0; i < g.k(); ++i) h.rows[i].set(perm[j], g.at(i, j) * s % 3);
        }
        std::swap(h.rows[0], h.rows[1 + rng() % 3]);
        h.rows[0] += h.rows[1];
        EXPECT_TRUE(code_equivalent(g, h));
    }
}

TEST(Existence, AgreesWithExhaustiveSearch) {
    for (unsigned len = 1; len <= 6; ++len)
        for (unsigned k = 1; k <= std::min(3u, len); ++k) {
            const unsigned best = best_distance<2>(len, k);
            for (unsigned d = 1; d <= len; ++d)
                EXPECT_EQ(code_exists(2, len, k, d), d <= best ? Existence::Yes : Existence::No)
                    << "q=2 len=" << len << " k=" << k << " d=" << d;
        }
    for (unsigned len = 1; len <= 5; ++len)
        for (unsigned k = 1; k <= std::min(2u, len); ++k) {
            const unsigned best = best_distance<3>(len, k);
            for (unsigned d = 1; d <= len; ++d)
                EXPECT_EQ(code_exists(3, len, k, d), d <= best ? Existence::Yes : Existence::No)
                    << "q=3 len=" << len << " k=" << k << " d=" << d;
        }
}

TEST(Existence, KnownFacts) {
    EXPECT_EQ(code_exists(3, 8, 4, 5), Existence::No);
    EXPECT_EQ(code_exists(3, 8, 4, 4), Existence::Yes);
    EXPECT_EQ(code_exists(2, 8, 4, 4), Existence::Yes);
    EXPECT_EQ(code_exists(2, 7, 4, 4), Existence::No);
    EXPECT_EQ(code_exists(2, 7, 4, 3), Existence::Yes);
    EXPECT_EQ(nq_lookup(2, 4, 4), 8u);
    EXPECT_EQ(nq_lookup(3, 4, 4), 8u);
    EXPECT_EQ(nq_lookup(2, 4, 3), 7u);
    EXPECT_EQ(griesmer_length(2, 4, 4), 8u);
    EXPECT_EQ(griesmer_length(3, 4, 4), 8u);
    EXPECT_EQ(griesmer_length(3, 4, 5), 9u);
    EXPECT_THROW(code_exists(4, 8, 4, 4), UnsupportedField);
}

TEST(Genbound, AtlasEntriesGiveEight) {
    for (const auto& e : atlas_entries()) {
        const auto b = with_field(e.q, [&]<unsigned Q>() {
            return genbound(hypercube_from_spreadset(atlas_space<Q>(e)).tensor());
        });
        EXPECT_EQ(b.bound, 8u) << e.name;
        EXPECT_FALSE(b.partial) << e.name;
        EXPECT_EQ(b.slot_dists, (std::vector<unsigned>{4, 4, 4})) << e.name;
    }
}

TEST(BruteRank, SmallTensors) {
    const auto f4 = hypercube_from_spreadset(field_construct<2>({1, 1, 1})).tensor();
    EXPECT_EQ(brute_force_tensor_rank(f4, 6), 3u);
    EXPECT_EQ(brute_force_tensor_rank(f4, 2), std::nullopt);
    std::mt19937_64 rng(43);
    for (int t = 0; t < 30; ++t) {
        GeneralTensor<3> m({3, 3});
        for (std::size_t i = 0; i < m.volume(); ++i) m.set_flat(i, static_cast<unsigned>(rng() % 3));
        EXPECT_EQ(brute_force_tensor_rank(m, 3), matrix_rank(m));
    }
    GeneralTensor<2> zero({2, 2, 2});
    EXPECT_EQ(brute_force_tensor_rank(zero, 1), 0u);
}

TEST(SupportCheck, CodewordsBoundContractionRank) {
    const auto c = field_construct<2>({1, 1, 1});
    const auto w = tensor_rank(c, automorphism_group(c), 4).witness;
    ASSERT_EQ(w.size(), 3u);
    const auto d = decomposition_from_rank_ones(c.basis(), w);
    EXPECT_EQ(d.tensor(), hypercube_from_spreadset(c).tensor());
    for (unsigned slot = 0; slot < 3; ++slot)
        for (unsigned a = 0; a < 4; ++a) {
            Vec<2> f(2);
            f.set(0, a & 1);
            f.set(1, a >> 1);
            const auto s = codeword_support_check(d, f, slot);
            EXPECT_TRUE(s.verified);
            EXPECT_EQ(s.weight == 0, f.is_zero());
        }
    EXPECT_THROW(codeword_support_check(d, Vec<2>(2), 3), BadSlot);
}
