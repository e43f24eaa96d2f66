#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "semirank.hpp"

using namespace semirank;

namespace {

MatSpace<2> full_m2() {
    std::vector<Mat<2>> all;
    for (std::uint64_t e = 1; e < 16; ++e) all.push_back(decode<2>(e, 2));
    return MatSpace<2>::span(2, all);
}

std::vector<std::uint64_t> spaces_of(const SearchReport& r) {
    std::vector<std::uint64_t> out;
    for (const auto& l : r.levels) out.push_back(l.spaces);
    return out;
}

}  // namespace

TEST(RankOnes, IndependentCountAndBasis) {
    const auto c = field_construct<2>({1, 1, 1});
    const auto pts = rank_one_points<2>(2);
    EXPECT_EQ(rank_ones_in(c, pts).size(), 0u);
    const auto full = full_m2();
    EXPECT_EQ(rank_ones_in(full, pts).size(), 9u);
    EXPECT_EQ(independent_count(rank_ones_in(full, pts)), 4u);
    const auto b = rank_one_basis(full, pts);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->size(), 4u);
    EXPECT_FALSE(rank_one_basis(c, pts).has_value());
}

TEST(RankOnes, ExtensionsPartitionOutsidePoints) {
    const auto c = atlas_space<2>(atlas_get("S1"));
    const auto pts = rank_one_points<2>(4);
    const auto w = c.extended(pts[3]);
    const auto e = detail::extensions(w, pts);
    std::size_t members = 0;
    for (std::size_t i = 0; i < e.keys.size(); ++i) {
        members += e.members[i].size();
        const auto s = w.extended(pts[e.members[i].front()]);
        for (auto m : e.members[i]) EXPECT_EQ(w.extended(pts[m]), s);
        EXPECT_EQ(detail::independent_count(pts, e.inside, e.members[i]), independent_count(rank_ones_in(s, pts)));
    }
    EXPECT_EQ(members + e.inside.size(), pts.size());
    EXPECT_EQ(e.inside.size(), rank_ones_in(w, pts).size());
}

TEST(SpreadSets, InsideSmallSpaces) {
    EXPECT_EQ(find_spread_sets(full_m2(), 2).size(), 1u);
    EXPECT_TRUE(find_spread_sets(MatSpace<2>::diag(2), 2).empty());
    EXPECT_TRUE(contains_partial_spread(full_m2(), 2));
    EXPECT_FALSE(contains_partial_spread(MatSpace<2>::diag(2), 2));
    const auto f16 = atlas_space<2>(atlas_get("F16"));
    EXPECT_TRUE(contains_partial_spread(f16, 4));
}

TEST(SpreadSets, ByRank) {
    const auto r3 = spread_sets_by_rank<2>(2, 3);
    ASSERT_EQ(r3.spread_sets.size(), 1u);
    EXPECT_TRUE(are_equivalent(r3.spread_sets.front(), field_construct<2>({1, 1, 1})).has_value());
    EXPECT_TRUE(spread_sets_by_rank<2>(2, 2).spread_sets.empty());
    EXPECT_TRUE(spread_sets_by_rank<2>(3, 5).spread_sets.empty());
    const auto r6 = spread_sets_by_rank<2>(3, 6);
    ASSERT_EQ(r6.spread_sets.size(), 1u);
    EXPECT_TRUE(are_equivalent(r6.spread_sets.front(), field_construct<2>({1, 1, 0, 1})).has_value());
}

TEST(Verify, Decompositions) {
    const auto& e = atlas_get("F81");
    const auto c = atlas_space<3>(e);
    auto ones = atlas_decomposition<3>(e);
    EXPECT_TRUE(verify_decomposition(c, ones).ok);
    auto fewer = ones;
    fewer.erase(fewer.begin() + 4);
    const auto v = verify_decomposition(c, fewer);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, VerifyReason::NotContained);
    ones[2] = Mat<3>::identity(4);
    const auto w = verify_decomposition(c, ones);
    EXPECT_EQ(w.reason, VerifyReason::NotRankOne);
    EXPECT_EQ(w.index, 2u);
    EXPECT_EQ(verify_decomposition(c, {Mat<3>::unit(3, 0, 0)}).reason, VerifyReason::WrongSize);
}

TEST(TensorRank, SmallFields) {
    const auto f4 = field_construct<2>({1, 1, 1});
    const auto r4 = tensor_rank(f4, automorphism_group(f4), 6);
    EXPECT_EQ(r4.rank, 3u);
    EXPECT_TRUE(verify_decomposition(f4, r4.witness).ok);
    const auto f8 = field_construct<2>({1, 1, 0, 1});
    const auto r8 = tensor_rank(f8, automorphism_group(f8), 8);
    EXPECT_EQ(r8.rank, 6u);
    EXPECT_TRUE(verify_decomposition(f8, r8.witness).ok);
    EXPECT_THROW(tensor_rank(f8, automorphism_group(f8), 5), RankExceedsCap);
    const auto f9 = field_construct<3>({1, 0, 1});
    EXPECT_EQ(tensor_rank(f9, automorphism_group(f9), 5).rank, 3u);
}

TEST(TensorRank, RejectsForeignGroup) {
    const auto f8 = field_construct<2>({1, 1, 0, 1});
    const auto other = field_construct<2>({1, 0, 1, 1});
    const auto g = automorphism_group(MatSpace<2>::diag(3));
    EXPECT_THROW(tensor_rank(f8, g, 8), BadParameters);
    EXPECT_EQ(tensor_rank(other, automorphism_group(other), 8).rank, 6u);
}

TEST(Pruning, Limits) {
    EXPECT_EQ(sub2_limit(2, 4, 12), 10u);
    EXPECT_EQ(sub2_limit(3, 4, 12), 8u);
    EXPECT_EQ(sub2_limit(2, 3, 8), 6u);
    EXPECT_EQ(sub2_limit(2, 2, 8), 4u);
    EXPECT_EQ(sub2_limit(3, 2, 8), 3u);
    EXPECT_EQ(sub2_limit(2, 4, 9), 9u);
}

TEST(Disprove, FirstLevelsOfF81) {
    const auto& e = atlas_get("F81");
    const auto c = atlas_space<3>(e);
    const auto aut = automorphism_group(c);
    DisproveOptions opt;
    opt.stop_after_level = 2;
    const auto r = disprove_rank(c, 8, aut, opt);
    ASSERT_EQ(r.levels.size(), 2u);
    EXPECT_EQ(r.outcome, "stopped");
    EXPECT_EQ(r.levels[0].dim, 5u);
    EXPECT_EQ(r.levels[0].spaces, 1600u);
    EXPECT_EQ(r.levels[0].classes, 1u);
    EXPECT_EQ(r.levels[1].spaces, 1547u);
    EXPECT_EQ(r.levels[1].classes, 403u);
}

TEST(Disprove, RequiresPruning) {
    const auto f4 = field_construct<2>({1, 1, 1});
    // A [5, 2, 3] binary code exists, so sizes from 5 on give no pruning.
    EXPECT_THROW(disprove_rank(f4, 5, automorphism_group(f4)), PruningUnavailable);
    DisproveOptions opt;
    opt.allow_unpruned = true;
    const auto r = disprove_rank(f4, 5, automorphism_group(f4), opt);
    EXPECT_EQ(r.outcome, "witness");
    EXPECT_TRUE(verify_decomposition(f4, decode_all<2>(r.witness, 2)).ok);
    const auto rr = disprove_rank(f4, 5, automorphism_group(f4), opt);
    EXPECT_EQ(rr.witness, r.witness);
    EXPECT_THROW(disprove_rank(f4, 2, automorphism_group(f4), opt), BadParameters);
}

TEST(Disprove, FieldOfOrderEightHasRankSix) {
    const auto f8 = field_construct<2>({1, 1, 0, 1});
    const auto aut = automorphism_group(f8);
    EXPECT_EQ(disprove_rank(f8, 5, aut).outcome, "exhausted");
    const auto w = disprove_rank(f8, 6, aut);
    EXPECT_EQ(w.outcome, "witness");
    EXPECT_TRUE(verify_decomposition(f8, decode_all<2>(w.witness, 3)).ok);
}

TEST(Disprove, CheckpointResumeMatchesDirectRun) {
    const auto f16 = atlas_space<2>(atlas_get("F16"));
    const auto aut = automorphism_group(f16);
    const auto direct = disprove_rank(f16, 8, aut);
    EXPECT_EQ(direct.outcome, "exhausted");

    const auto path = (std::filesystem::temp_directory_path() / "semirank_resume_test.json").string();
    std::filesystem::remove(path);
    DisproveOptions opt;
    opt.checkpoint = path;
    opt.stop_after_level = 2;
    const auto part = disprove_rank(f16, 8, aut, opt);
    EXPECT_EQ(part.outcome, "stopped");
    ASSERT_TRUE(std::filesystem::exists(path));
    opt.stop_after_level = ~0u;
    const auto resumed = disprove_rank(f16, 8, aut, opt);
    EXPECT_EQ(resumed.outcome, "exhausted");
    EXPECT_EQ(spaces_of(resumed), spaces_of(direct));
    for (std::size_t i = 0; i < direct.levels.size(); ++i) {
        EXPECT_EQ(resumed.levels[i].classes, direct.levels[i].classes);
        EXPECT_EQ(resumed.levels[i].survivors, direct.levels[i].survivors);
    }
    std::filesystem::remove(path);
}

TEST(Reports, JsonRoundTrip) {
    LevelStat l{7, 1234, 99, std::nullopt, 12, 0};
    const auto j = to_json(l);
    const auto back = level_from_json(j);
    EXPECT_EQ(back.dim, 7u);
    EXPECT_EQ(back.spaces, 1234u);
    EXPECT_EQ(back.distinct, 99u);
    EXPECT_EQ(back.classes, std::nullopt);
    EXPECT_EQ(back.survivors, 12u);
    EXPECT_EQ(back.spread_sets, 0u);
}
