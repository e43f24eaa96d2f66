#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "semirank.hpp"

using namespace semirank;

TEST(Atlas, ListAndLookup) {
    const auto names = atlas_list();
    EXPECT_EQ(names.size(), 15u);
    for (const char* n : {"F16", "S1", "S2", "F81", "GTF81", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "X", "XI"})
        EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
    EXPECT_EQ(atlas_get("IX").name, "GTF81");
    EXPECT_EQ(atlas_get("XII").name, "F81");
    EXPECT_THROW(atlas_get("XIII"), NotFound);
    EXPECT_THROW(atlas_space<2>(atlas_get("F81")), DimensionMismatch);
}

TEST(Atlas, SelfcheckPasses) {
    const auto r = atlas_selfcheck();
    for (const auto& f : r.failures()) ADD_FAILURE() << f.entry << ": " << f.check << " " << f.detail;
    EXPECT_TRUE(r.all_passed());
    const auto j = to_json(r);
    EXPECT_TRUE(j["all_passed"].get<bool>());
    EXPECT_EQ(j["checks"].size(), r.checks.size());
}

TEST(Atlas, SelfcheckNamesCorruptedEntries) {
    auto entries = atlas_entries();
    auto& f81 = *std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.name == "F81"; });
    f81.decomposition[3] += 1;
    auto r = atlas_selfcheck(entries);
    EXPECT_FALSE(r.all_passed());
    std::vector<std::string> failed;
    for (const auto& c : r.failures()) failed.push_back(c.entry + ": " + c.check);
    EXPECT_NE(std::find(failed.begin(), failed.end(), "F81: displayed decomposition matches encodings"), failed.end());
    EXPECT_NE(std::find(failed.begin(), failed.end(), "F81: decomposition verifies"), failed.end());

    entries = atlas_entries();
    entries[0].basis[1] = 0;
    r = atlas_selfcheck(entries);
    ASSERT_FALSE(r.failures().empty());
    EXPECT_EQ(r.failures().front().entry, "F16");
}

TEST(Atlas, PrintedErratum) {
    const auto& g = atlas_get("GTF81");
    EXPECT_EQ(g.decomposition.back(), 76u);
    EXPECT_EQ(g.printed_decomposition.back(), 7676u);
    EXPECT_EQ(encode(parse_displayed<3>(g.displayed_decomposition.back(), 4)), 76u);
    EXPECT_FALSE(verify_decomposition(atlas_space<3>(g), decode_all<3>(g.printed_decomposition, 4)).ok);
}

TEST(Atlas, DisplayedMatrices) {
    EXPECT_EQ(parse_displayed<2>("1000/0100/0010/0001", 4), Mat<2>::identity(4));
    EXPECT_THROW(parse_displayed<2>("100/010", 4), ParseError);
    EXPECT_THROW(parse_displayed<2>("10/01/11", 2), ParseError);
}

TEST(Atlas, DecompositionsVerifyAndAreIndependent) {
    for (const auto& e : atlas_entries())
        with_field(e.q, [&]<unsigned Q>() {
            const auto c = atlas_space<Q>(e);
            const auto ones = atlas_decomposition<Q>(e);
            EXPECT_TRUE(verify_decomposition(c, ones).ok) << e.name;
            EXPECT_EQ(independent_count(ones), ones.size()) << e.name;
            EXPECT_EQ(ones.size(), e.expected_rank) << e.name;
            EXPECT_TRUE(is_spreadset(c)) << e.name;
        });
}

TEST(Atlas, OrderEightyOneEntriesAreInequivalent) {
    std::vector<MatSpace<3>> spaces;
    std::vector<std::string> names;
    for (const auto& e : atlas_entries())
        if (e.q == 3) {
            spaces.push_back(atlas_space<3>(e));
            names.push_back(e.name);
        }
    ASSERT_EQ(spaces.size(), 12u);
    for (std::size_t i = 0; i < spaces.size(); ++i)
        for (std::size_t j = i + 1; j < spaces.size(); ++j)
            EXPECT_FALSE(are_equivalent(spaces[i], spaces[j]).has_value()) << names[i] << " ~ " << names[j];
}

TEST(Atlas, KnuthOrbitsCoverTwentySevenClasses) {
    const std::map<std::string, std::size_t> want{{"F81", 1}, {"GTF81", 3}, {"I", 1},  {"II", 6},   {"III", 3}, {"IV", 1},
                                                  {"V", 3},   {"VI", 1},    {"VII", 3}, {"VIII", 3}, {"X", 1},   {"XI", 1}};
    std::size_t total = 0;
    for (const auto& [name, size] : want) {
        const auto k = knuth_orbit(atlas_space<3>(atlas_get(name)));
        EXPECT_EQ(k.size(), size) << name;
        total += k.size();
    }
    EXPECT_EQ(total, 27u);
}

TEST(Atlas, ExportedFilesParseBack) {
    for (const auto& e : atlas_entries()) {
        std::istringstream s(format_spreadset(atlas_spreadset_file(e)));
        EXPECT_EQ(parse_spreadset(s).encodings, e.basis) << e.name;
        std::istringstream d(format_decomposition(atlas_decomposition_file(e)));
        EXPECT_EQ(parse_decomposition(d).encodings, e.decomposition) << e.name;
    }
}
