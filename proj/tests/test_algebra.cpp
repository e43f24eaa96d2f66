#include <gtest/gtest.h>

#include <random>

#include "semirank.hpp"

using namespace semirank;

namespace {

template <unsigned Q>
Vec<Q> random_vec(std::mt19937_64& rng, unsigned n) {
    Vec<Q> v(n);
    for (unsigned i = 0; i < n; ++i) v.set(i, static_cast<unsigned>(rng() % Q));
    return v;
}

}  // namespace

TEST(Hypercube, SpreadSetRoundTrip) {
    const auto c = atlas_space<3>(atlas_get("F81"));
    const auto h = hypercube_from_spreadset(c);
    EXPECT_EQ(left_matrices(h), c.basis());
    EXPECT_EQ(spreadset_from_hypercube(h), c);
    EXPECT_THROW(hypercube_from_spreadset(std::vector<Mat<3>>{Mat<3>::identity(4)}), DimensionMismatch);
}

TEST(Hypercube, MultiplicationIsBilinear) {
    const auto h = hypercube_from_spreadset(atlas_space<2>(atlas_get("S1")));
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        const auto x = random_vec<2>(rng, 4), y = random_vec<2>(rng, 4), z = random_vec<2>(rng, 4);
        EXPECT_EQ(multiply(h, x + z, y), multiply(h, x, y) + multiply(h, z, y));
        EXPECT_EQ(multiply(h, x, y + z), multiply(h, x, y) + multiply(h, x, z));
        if (!x.is_zero() && !y.is_zero()) {
            EXPECT_FALSE(multiply(h, x, y).is_zero());
        }
    }
}

TEST(Hypercube, KnuthActionComposes) {
    std::mt19937_64 rng(22);
    Hypercube<3> h(3);
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j)
            for (unsigned k = 0; k < 3; ++k) h.set(i, j, k, static_cast<unsigned>(rng() % 3));
    for (const auto& s : all_s3())
        for (const auto& t : all_s3()) EXPECT_EQ(knuth_act(knuth_act(h, s), t), knuth_act(h, compose(t, s)));
}

TEST(Hypercube, ContractionsOfSemifieldAreNonsingular) {
    for (const char* name : {"F16", "S1", "S2"}) {
        const auto h = hypercube_from_spreadset(atlas_space<2>(atlas_get(name)));
        for (const auto& s : all_s3()) EXPECT_TRUE(is_spreadset(spreadset_from_hypercube(knuth_act(h, s)))) << name;
    }
}

TEST(Construct, FieldSpreadSets) {
    const auto f4 = field_construct<2>({1, 1, 1});
    EXPECT_TRUE(is_spreadset(f4));
    EXPECT_TRUE(f4.contains(Mat<2>::identity(2)));
    const auto f16 = field_construct<2>({1, 1, 0, 0, 1});
    EXPECT_TRUE(is_spreadset(f16));
    EXPECT_TRUE(are_equivalent(f16, atlas_space<2>(atlas_get("F16"))).has_value());
    const auto f81 = field_construct<3>({2, 0, 0, 1, 1});
    EXPECT_TRUE(are_equivalent(f81, atlas_space<3>(atlas_get("F81"))).has_value());
    EXPECT_FALSE(are_equivalent(f16, atlas_space<2>(atlas_get("S1"))).has_value());
}

TEST(Construct, GeneralisedTwistedField) {
    const ExtField<3> f({2, 0, 0, 1, 1});
    const auto x = f.generator();
    const auto g = gtf_construct(f, 1, 2, x);
    EXPECT_TRUE(is_spreadset(g));
    EXPECT_TRUE(are_equivalent(kaplansky_normalize(g), atlas_space<3>(atlas_get("IX"))).has_value());
    EXPECT_FALSE(are_equivalent(g, atlas_space<3>(atlas_get("F81"))).has_value());
    EXPECT_THROW(gtf_construct(f, 1, 1, x), BadParameters);
    EXPECT_THROW(gtf_construct(f, 0, 2, x), BadParameters);
    EXPECT_THROW(gtf_construct(f, 1, 2, f.one()), NotNonsingular);
}

TEST(Construct, GtfMultiplicationFormula) {
    const ExtField<3> f({2, 0, 0, 1, 1});
    const auto c = f.generator();
    const auto basis = gtf_basis(f, 1, 3, c);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const auto a = f.element(rng() % 81), b = f.element(rng() % 81);
        Mat<3> la(4);
        for (unsigned i = 0; i < 4; ++i) la = la + basis[i].scaled(a[i]);
        const auto want = f.mul(a, b) - f.mul(c, f.mul(f.frobenius(a, 1), f.frobenius(b, 3)));
        EXPECT_EQ(b * la, want);
    }
}

TEST(Normalize, KaplanskyContainsIdentity) {
    const auto g = gtf_construct(ExtField<3>({2, 0, 0, 1, 1}), 1, 2, ExtField<3>({2, 0, 0, 1, 1}).generator());
    const auto k = kaplansky_normalize(g);
    EXPECT_TRUE(k.contains(Mat<3>::identity(4)));
    EXPECT_TRUE(are_equivalent(g, k).has_value());
    EXPECT_THROW(kaplansky_normalize(MatSpace<2>::diag(2)), NotNonsingular);
}

TEST(Normalize, SemifieldBasisGivesIdentity) {
    for (const char* name : {"F16", "S1", "S2"}) {
        const auto c = atlas_space<2>(atlas_get(name));
        const auto b = semifield_basis(c);
        const auto h = hypercube_from_spreadset(b);
        const auto e1 = Vec<2>::unit(4, 0);
        for (std::uint64_t t = 0; t < 16; ++t) {
            Vec<2> y(4);
            for (unsigned i = 0; i < 4; ++i) y.set(i, (t >> i) & 1);
            EXPECT_EQ(multiply(h, e1, y), y) << name;
            EXPECT_EQ(multiply(h, y, e1), y) << name;
        }
    }
}

TEST(Knuth, OrbitSizes) {
    EXPECT_EQ(knuth_orbit(atlas_space<2>(atlas_get("F16"))).size(), 1u);
    EXPECT_EQ(knuth_orbit(field_construct<2>({1, 1, 0, 1})).size(), 1u);
    const auto k = knuth_orbit(atlas_space<3>(atlas_get("II")));
    EXPECT_EQ(k.size(), 6u);
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j) EXPECT_FALSE(are_equivalent(k[i], k[j]).has_value());
}

TEST(Knuth, OrderSixteenSpreadSets) {
    // S1 and S2 lie in one Knuth orbit or separate ones; each orbit member is a spread set.
    for (const char* name : {"S1", "S2"})
        for (const auto& m : knuth_orbit(atlas_space<2>(atlas_get(name)))) EXPECT_TRUE(is_spreadset(m));
}
