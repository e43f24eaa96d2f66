#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "codec.hpp"
#include "codes.hpp"
#include "search.hpp"

namespace semirank {

struct AtlasEntry {
    std::string name;
    unsigned q = 0;
    unsigned n = 0;
    std::vector<std::uint64_t> basis;
    std::vector<std::uint64_t> decomposition;  // empty if none
    unsigned expected_rank = 0;
    // Matrices as printed: rows of digits separated by '/'.
    std::vector<std::string> displayed_basis;
    std::vector<std::string> displayed_decomposition;
    // The concise table as printed, where it differs from `decomposition`.
    std::vector<std::uint64_t> printed_decomposition;
};

namespace detail {

inline std::vector<std::uint64_t> diag81_plus(std::vector<std::uint64_t> extra) {
    std::vector<std::uint64_t> out{1, 243, 59049, 14348907};
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

inline std::vector<AtlasEntry> build_atlas() {
    std::vector<AtlasEntry> a;
    a.push_back({"F16", 2, 4, {33825, 14402, 25476, 50744},
                 {85, 8738, 57582, 32896, 1632, 3072, 30576, 53261, 4096}, 9,
                 {"1000/0100/0010/0001", "0100/0010/0001/1100", "0010/0001/1100/0110", "0001/1100/0110/0011"},
                 {"1010/1010/0000/0000", "0100/0100/0100/0100", "0111/0111/0000/0111", "0000/0001/0000/0001",
                  "0000/0110/0110/0000", "0000/0000/0011/0000", "0000/1110/1110/1110", "1011/0000/0000/1011",
                  "0000/0000/0000/1000"},
                 {}});
    a.push_back({"S1", 2, 4, {33825, 51250, 63940, 24136},
                 {4112, 238, 80, 53469, 4353, 2304, 13059, 2570, 26112}, 9,
                 {"1000/0100/0010/0001", "0100/1100/0001/0011", "0010/0011/1001/1111", "0001/0010/0111/1010"},
                 {"0000/1000/0000/1000", "0111/0111/0000/0000", "0000/1010/0000/0000", "1011/1011/0000/1011",
                  "1000/0000/1000/1000", "0000/0000/1001/0000", "1100/0000/1100/1100", "0101/0000/0101/0000",
                  "0000/0000/0110/0110"},
                 {}});
    a.push_back({"S2", 2, 4, {33825, 22594, 11684, 51864},
                 {1, 204, 53456, 39321, 4080, 2048, 43530, 47872, 57344}, 9,
                 {"1000/0100/0010/0001", "0100/0010/0001/1010", "0010/0101/1011/0100", "0001/1001/0101/0011"},
                 {"1000/0000/0000/0000", "0011/0011/0000/0000", "0000/1011/0000/1011", "1001/1001/1001/1001",
                  "0000/1111/1111/0000", "0000/0000/0001/0000", "0101/0000/0101/0101", "0000/0000/1101/1101",
                  "0000/0000/0000/0111"},
                 {}});
    a.push_back({"F81", 3, 4, {14408200, 15058227, 16660575, 21463326},
                 {363259, 5560, 38502864, 538084, 12328135, 21785760, 59787, 1614006, 221187}, 9,
                 {"1000/0100/0010/0001", "0100/0010/0001/1001", "0010/0001/1001/1101", "0001/1001/1101/1111"},
                 {"1002/2001/1002/0000", "1221/2112/0000/0000", "0000/0011/0011/0022", "1000/1000/1000/1000",
                  "1210/0000/1210/2120", "0000/1111/2222/1111", "0010/0010/0010/0000", "0000/0000/0100/0100",
                  "0102/0102/0201/0000"},
                 {}});
    a.push_back({"GTF81", 3, 4, {14408200, 37463637, 34827984, 8282925},
                 {14528241, 426511, 40395672, 23137612, 36673317, 34435999, 18069028, 10097379, 76}, 9,
                 {"1000/0100/0010/0001", "0100/1100/1111/1212", "0010/0001/1211/2012", "0001/0011/2021/0210"},
                 {"0000/0001/0001/0001", "1021/0000/2012/0000", "0000/1122/0000/1122", "1211/1211/1211/1211",
                  "0000/0121/0000/0212", "1012/2021/1012/1012", "1201/0000/0000/1201", "0000/0000/0000/1020",
                  "1122/0000/0000/0000"},
                 {14528241, 426511, 40395672, 23137612, 36673317, 34435999, 18069028, 10097379, 7676}});
    auto fam = [&](std::string name, std::vector<std::uint64_t> basis, std::vector<std::uint64_t> extra) {
        a.push_back({std::move(name), 3, 4, std::move(basis), diag81_plus(std::move(extra)), 8, {}, {}, {}});
    };
    fam("I", {5217375, 8168391, 10127682, 27851041}, {285649, 13819585, 25824144, 42259239});
    fam("II", {4604203, 15640965, 26024736, 26930970}, {18834768, 20729397, 25402879, 28081132});
    fam("III", {14467492, 14958678, 39188133, 42832017}, {325507, 7442224, 18834768, 20982117});
    fam("IV", {19878561, 24409758, 35533648, 42221016}, {9035896, 18981031, 39280132, 41711436});
    fam("V", {2025495, 2627829, 14408200, 33856140}, {285649, 13819585, 25824144, 42259239});
    fam("VI", {5157840, 10668294, 16374159, 28816156}, {285649, 13819585, 25824144, 42259239});
    fam("VII", {8817750, 14467492, 20037945, 31590270}, {325507, 18834768, 34325839, 41964195});
    // Printed with the label VII a second time.
    fam("VIII", {15093225, 30319137, 37030935, 37294588}, {12329415, 18981031, 39280132, 42518560});
    fam("X", {14408200, 16058439, 29914524, 37686954}, {423775, 13288075, 18834768, 21520120});
    fam("XI", {22027141, 22483740, 29332053, 33106104}, {9035896, 18981031, 23363440, 39280132});
    return a;
}

}  // namespace detail

inline const std::vector<AtlasEntry>& atlas_entries() {
    static const std::vector<AtlasEntry> entries = detail::build_atlas();
    return entries;
}

inline std::vector<std::string> atlas_list() {
    std::vector<std::string> out;
    for (const auto& e : atlas_entries()) out.push_back(e.name);
    return out;
}

/// "IX" and "XII" are the numbered names of GTF81 and F81.
inline const AtlasEntry& atlas_get(const std::string& name) {
    const std::string key = name == "IX" ? "GTF81" : name == "XII" ? "F81" : name;
    for (const auto& e : atlas_entries())
        if (e.name == key) return e;
    throw NotFound("no atlas entry named " + name);
}

template <unsigned Q>
MatSpace<Q> atlas_space(const AtlasEntry& e) {
    if (e.q != Q) throw DimensionMismatch("entry " + e.name + " is over F_" + std::to_string(e.q));
    return MatSpace<Q>::from_encodings(e.n, e.basis);
}

template <unsigned Q>
std::vector<Mat<Q>> atlas_decomposition(const AtlasEntry& e) {
    if (e.q != Q) throw DimensionMismatch("entry " + e.name + " is over F_" + std::to_string(e.q));
    return decode_all<Q>(e.decomposition, e.n);
}

inline MatrixListFile atlas_spreadset_file(const AtlasEntry& e) { return {e.q, e.n, e.basis}; }
inline MatrixListFile atlas_decomposition_file(const AtlasEntry& e) { return {e.q, e.n, e.decomposition}; }

// Generator matrices of the three codes of the F81 decomposition, and their
// weight distributions.
inline const std::vector<std::string>& atlas_g1() {
    static const std::vector<std::string> g{"110110101", "221101101", "101112112", "002121010"};
    return g;
}
inline const std::vector<std::string>& atlas_g2() {
    static const std::vector<std::string> g{"110111000", "020021011", "021011100", "211001002"};
    return g;
}
inline const std::vector<std::string>& atlas_g3() {
    static const std::vector<std::string> g{"221212100", "111012000", "201012011", "210001101"};
    return g;
}
inline const std::vector<std::uint64_t>& atlas_weights_g1() {
    static const std::vector<std::uint64_t> w{1, 0, 0, 0, 6, 24, 24, 12, 12, 2};
    return w;
}
inline const std::vector<std::uint64_t>& atlas_weights_g3() {
    static const std::vector<std::uint64_t> w{1, 0, 0, 0, 10, 22, 22, 8, 14, 4};
    return w;
}

/// Parses a displayed matrix "r0/r1/.../r{n-1}".
template <unsigned Q>
Mat<Q> parse_displayed(const std::string& s, unsigned n) {
    Mat<Q> m(n);
    unsigned row = 0, col = 0;
    for (char ch : s) {
        if (ch == '/') {
            if (col != n) throw ParseError(1, "row of wrong length in " + s);
            ++row;
            col = 0;
            continue;
        }
        if (ch < '0' || ch >= static_cast<char>('0' + Q) || row >= n || col >= n)
            throw ParseError(1, "bad displayed matrix " + s);
        m.v.set(row * n + col++, static_cast<unsigned>(ch - '0'));
    }
    if (row + 1 != n || col != n) throw ParseError(1, "bad displayed matrix " + s);
    return m;
}

struct AtlasCheck {
    std::string entry;
    std::string check;
    bool ok = false;
    std::string detail;
};

struct AtlasReport {
    std::vector<AtlasCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return !checks.empty();
    }
    std::vector<AtlasCheck> failures() const {
        std::vector<AtlasCheck> out;
        for (const auto& c : checks)
            if (!c.ok) out.push_back(c);
        return out;
    }
};

namespace detail {

template <unsigned Q>
void check_entry(const AtlasEntry& e, AtlasReport& r) {
    auto add = [&](std::string check, bool ok, std::string detail = {}) {
        r.checks.push_back({e.name, std::move(check), ok, std::move(detail)});
    };
    MatSpace<Q> c(e.n);
    try {
        c = atlas_space<Q>(e);
    } catch (const Error& ex) {
        add("basis decodes", false, ex.what());
        return;
    }
    add("basis decodes", c.dim() == e.n, "dimension " + std::to_string(c.dim()));
    add("nonsingular", is_spreadset(c));
    if (!e.displayed_basis.empty()) {
        bool same = e.displayed_basis.size() == e.basis.size();
        for (std::size_t i = 0; same && i < e.basis.size(); ++i)
            same = encode(parse_displayed<Q>(e.displayed_basis[i], e.n)) == e.basis[i];
        add("displayed basis matches encodings", same);
    }
    if (!e.displayed_decomposition.empty()) {
        bool same = e.displayed_decomposition.size() == e.decomposition.size();
        for (std::size_t i = 0; same && i < e.decomposition.size(); ++i)
            same = encode(parse_displayed<Q>(e.displayed_decomposition[i], e.n)) == e.decomposition[i];
        add("displayed decomposition matches encodings", same);
    }
    if (!e.printed_decomposition.empty()) {
        std::string diff;
        bool sized = e.printed_decomposition.size() == e.decomposition.size();
        for (std::size_t i = 0; sized && i < e.decomposition.size(); ++i)
            if (e.printed_decomposition[i] != e.decomposition[i])
                diff += (diff.empty() ? "" : ", ") + std::string("#") + std::to_string(i + 1) + " printed " +
                        std::to_string(e.printed_decomposition[i]) + ", displayed matrix encodes " +
                        std::to_string(e.decomposition[i]);
        add("printed table erratum recorded", sized && !diff.empty(), diff);
    }
    if (!e.decomposition.empty()) {
        std::vector<Mat<Q>> ones;
        try {
            ones = atlas_decomposition<Q>(e);
        } catch (const Error& ex) {
            add("decomposition verifies", false, ex.what());
            return;
        }
        const auto v = verify_decomposition(c, ones);
        add("decomposition verifies", v.ok, v.ok ? "" : std::string(to_string(v.reason)) + " at " + std::to_string(v.index));
        add("decomposition independent", independent_count(ones) == ones.size());
        add("expected rank matches decomposition size", e.decomposition.size() == e.expected_rank,
            std::to_string(e.decomposition.size()) + " vs " + std::to_string(e.expected_rank));
    }
    const unsigned want = e.q == 2 || e.name == "F81" || e.name == "GTF81" ? 9 : 8;
    add("expected rank matches known value", e.expected_rank == want,
        std::to_string(e.expected_rank) + " vs " + std::to_string(want));
}

}  // namespace detail

/// Consistency checks over the given entries (default: the built-in atlas).
inline AtlasReport atlas_selfcheck(const std::vector<AtlasEntry>& entries) {
    AtlasReport r;
    for (const auto& e : entries) {
        try {
            with_field(e.q, [&]<unsigned Q>() { detail::check_entry<Q>(e, r); });
        } catch (const Error& ex) {
            r.checks.push_back({e.name, "field supported", false, ex.what()});
        }
    }
    // The two eight-matrix decompositions printed under VII: which spread sets they contain.
    const AtlasEntry* vii = nullptr;
    const AtlasEntry* viii = nullptr;
    for (const auto& e : entries) {
        if (e.name == "VII") vii = &e;
        if (e.name == "VIII") viii = &e;
    }
    if (vii && viii && vii->q == 3 && viii->q == 3) {
        try {
            const auto s7 = atlas_space<3>(*vii), s8 = atlas_space<3>(*viii);
            const auto d7 = atlas_decomposition<3>(*vii), d8 = atlas_decomposition<3>(*viii);
            const bool a = verify_decomposition(s7, d7).ok, b = verify_decomposition(s8, d7).ok;
            const bool c = verify_decomposition(s7, d8).ok, d = verify_decomposition(s8, d8).ok;
            const auto yn = [](bool x) { return std::string(x ? "yes" : "no"); };
            r.checks.push_back({"VIII", "second VII decomposition belongs to VIII", d,
                                "first row contains VII: " + yn(a) + ", VIII: " + yn(b) +
                                    "; second row contains VII: " + yn(c) + ", VIII: " + yn(d)});
        } catch (const Error& ex) {
            r.checks.push_back({"VIII", "second VII decomposition belongs to VIII", false, ex.what()});
        }
    }
    return r;
}

inline AtlasReport atlas_selfcheck() { return atlas_selfcheck(atlas_entries()); }

inline nlohmann::json to_json(const AtlasReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"entry", c.entry}, {"check", c.check}, {"ok", c.ok}, {"detail", c.detail}});
    return {{"all_passed", r.all_passed()}, {"checks", checks}};
}

}  // namespace semirank
