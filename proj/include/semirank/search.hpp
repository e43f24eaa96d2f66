#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "codes.hpp"
#include "equivalence.hpp"

namespace semirank {

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct LevelStat {
    unsigned dim = 0;
    std::uint64_t spaces = 0;                 // spaces formed, summed over parents
    std::optional<std::uint64_t> distinct;    // spaces formed, globally distinct
    std::optional<std::uint64_t> classes;     // representatives kept
    std::optional<std::uint64_t> survivors;   // after pruning
    std::optional<std::uint64_t> spread_sets; // spread-set classes found at this level
};

struct SearchReport {
    std::string algorithm;
    std::vector<LevelStat> levels;
    std::string outcome;                  // "exhausted", "witness", "found" or "stopped"
    std::vector<std::uint64_t> witness;   // rank-one encodings
    std::vector<std::string> notes;
    double seconds = 0;
};

inline nlohmann::json to_json(const LevelStat& l) {
    nlohmann::json j{{"dim", l.dim}, {"spaces", l.spaces}};
    if (l.distinct) j["distinct"] = *l.distinct;
    if (l.classes) j["classes"] = *l.classes;
    if (l.survivors) j["survivors"] = *l.survivors;
    if (l.spread_sets) j["spread_sets"] = *l.spread_sets;
    return j;
}

inline LevelStat level_from_json(const nlohmann::json& j) {
    LevelStat l;
    l.dim = j.at("dim");
    l.spaces = j.at("spaces");
    if (j.contains("distinct")) l.distinct = j["distinct"].get<std::uint64_t>();
    if (j.contains("classes")) l.classes = j["classes"].get<std::uint64_t>();
    if (j.contains("survivors")) l.survivors = j["survivors"].get<std::uint64_t>();
    if (j.contains("spread_sets")) l.spread_sets = j["spread_sets"].get<std::uint64_t>();
    return l;
}

inline nlohmann::json to_json(const SearchReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels) levels.push_back(to_json(l));
    return {{"algorithm", r.algorithm}, {"levels", levels}, {"outcome", r.outcome},
            {"witness", r.witness},     {"notes", r.notes},   {"seconds", r.seconds}};
}

// ---------------------------------------------------------------------------
// Rank-one helpers
// ---------------------------------------------------------------------------

/// Rank-one elements of s, one per projective point.
template <unsigned Q>
std::vector<Mat<Q>> rank_ones_in(const MatSpace<Q>& s, const std::vector<Mat<Q>>& points) {
    std::vector<Mat<Q>> out;
    if (s.size() / (Q - 1) < points.size()) {
        s.for_each_projective([&](const Mat<Q>& m) {
            if (m.rank() == 1) out.push_back(Mat<Q>(s.n(), projective_normal(m.v)));
        });
        std::sort(out.begin(), out.end(), [](const Mat<Q>& a, const Mat<Q>& b) { return a.v < b.v; });
    } else {
        for (const auto& p : points)
            if (s.contains(p)) out.push_back(p);
    }
    return out;
}

template <unsigned Q>
unsigned independent_count(const std::vector<Mat<Q>>& mats) {
    std::vector<PackedVec<Q>> v;
    for (const auto& m : mats) v.push_back(m.v);
    return static_cast<unsigned>(reduce_rows(v));
}

/// A basis of s made of rank-one elements, if s is spanned by them.
template <unsigned Q>
std::optional<std::vector<Mat<Q>>> rank_one_basis(const MatSpace<Q>& s, const std::vector<Mat<Q>>& points) {
    std::vector<Mat<Q>> chosen;
    std::vector<PackedVec<Q>> span;
    for (const auto& m : rank_ones_in(s, points)) {
        if (!residue<Q>(m.v, span).is_zero()) {
            chosen.push_back(m);
            span.push_back(m.v);
            reduce_rows(span);
        }
        if (chosen.size() == s.dim()) return chosen;
    }
    if (chosen.size() == s.dim()) return chosen;
    return std::nullopt;
}

namespace detail {

// The distinct spaces <w, b> for rank-one points b outside w, keyed by the
// projective residue of b modulo w. members[i] lists the points giving space i.
template <unsigned Q>
struct Extensions {
    std::vector<PackedVec<Q>> keys;
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<std::uint32_t> inside;  // points already in w
};

template <unsigned Q>
Extensions<Q> extensions(const MatSpace<Q>& w, const std::vector<Mat<Q>>& points) {
    Extensions<Q> e;
    std::unordered_map<PackedVec<Q>, std::uint32_t, PackedVecHash<Q>> index;
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        const auto r = w.residue_of(points[i].v);
        if (r.is_zero()) {
            e.inside.push_back(i);
            continue;
        }
        const auto key = projective_normal(r);
        auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(e.keys.size()));
        if (fresh) {
            e.keys.push_back(key);
            e.members.emplace_back();
        }
        e.members[it->second].push_back(i);
    }
    return e;
}

template <unsigned Q>
unsigned independent_count(const std::vector<Mat<Q>>& points, const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b) {
    std::vector<PackedVec<Q>> v;
    for (auto i : a) v.push_back(points[i].v);
    for (auto i : b) v.push_back(points[i].v);
    return static_cast<unsigned>(reduce_rows(v));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Spread sets inside a space
// ---------------------------------------------------------------------------

namespace detail {

// All k-dimensional subspaces of F_Q^n as reduced bases.
template <unsigned Q>
std::vector<std::vector<PackedVec<Q>>> subspaces(unsigned n, unsigned k) {
    std::vector<std::vector<PackedVec<Q>>> out;
    std::vector<PackedVec<Q>> rows;
    std::function<void(unsigned)> pick = [&](unsigned start) {
        if (rows.size() == k) {
            out.push_back(rows);
            return;
        }
        // Next pivot column p >= start; free entries only in later non-pivot columns.
        for (unsigned p = start; p + (k - rows.size()) <= n; ++p) {
            std::vector<unsigned> free;
            for (unsigned c = p + 1; c < n; ++c) free.push_back(c);
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < free.size(); ++i) total *= Q;
            for (std::uint64_t t = 0; t < total; ++t) {
                PackedVec<Q> v;
                v.set(p, 1);
                std::uint64_t x = t;
                for (unsigned c : free) {
                    v.set(c, static_cast<unsigned>(x % Q));
                    x /= Q;
                }
                rows.push_back(v);
                pick(p + 1);
                rows.pop_back();
            }
        }
    };
    pick(0);
    // Keep only reduced bases (zero above later pivots).
    std::vector<std::vector<PackedVec<Q>>> reduced;
    for (auto& b : out) {
        bool ok = true;
        for (std::size_t i = 0; i < b.size() && ok; ++i)
            for (std::size_t j = i + 1; j < b.size(); ++j)
                if (b[i].get(static_cast<unsigned>(lowest_nonzero(b[j]))) != 0) {
                    ok = false;
                    break;
                }
        if (ok) reduced.push_back(std::move(b));
    }
    return reduced;
}

// For each k-dimensional first-row image W = <w_1..w_k>, picks a_i in s with
// first row w_i so that every nonzero combination is invertible. With k = n
// this is the first-row normalization a_1 = e_1, ..., a_n = e_n.
template <unsigned Q, class F>
bool for_each_partial_spread(const MatSpace<Q>& s, unsigned k, F&& emit) {
    const unsigned n = s.n();
    if (k == 0) return emit(MatSpace<Q>(n));
    if (k > n || k > s.dim()) return true;
    std::unordered_map<PackedVec<Q>, std::vector<Mat<Q>>, PackedVecHash<Q>> by_row;
    s.for_each_element([&](const Mat<Q>& m) {
        if (m.is_invertible()) by_row[m.row(0)].push_back(m);
    });
    for (const auto& w : subspaces<Q>(n, k)) {
        std::vector<const std::vector<Mat<Q>>*> cand;
        for (const auto& r : w) {
            auto it = by_row.find(r);
            if (it == by_row.end()) break;
            cand.push_back(&it->second);
        }
        if (cand.size() != k) continue;
        std::vector<Mat<Q>> chosen;
        std::vector<Mat<Q>> span_elems{Mat<Q>(n)};  // all elements of <chosen>
        std::function<bool(unsigned)> dfs = [&](unsigned i) -> bool {
            if (i == k) return emit(MatSpace<Q>::span(n, chosen));
            for (const auto& a : *cand[i]) {
                bool ok = true;
                for (const auto& x : span_elems)
                    if (!(x + a).is_invertible()) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                const std::size_t old = span_elems.size();
                for (unsigned c = 1; c < Q; ++c)
                    for (std::size_t j = 0; j < old; ++j) span_elems.push_back(span_elems[j] + a.scaled(c));
                chosen.push_back(a);
                const bool go_on = dfs(i + 1);
                chosen.pop_back();
                span_elems.resize(old);
                if (!go_on) return false;
            }
            return true;
        };
        if (!dfs(0)) return false;
    }
    return true;
}

template <unsigned Q>
struct BasisHash {
    std::size_t operator()(const std::vector<PackedVec<Q>>& b) const {
        std::size_t h = b.size();
        for (const auto& v : b) h = h * 0x9e3779b97f4a7c15ULL ^ PackedVecHash<Q>{}(v);
        return h;
    }
};

}  // namespace detail

/// Representatives of the k-dimensional nonsingular subspaces of s up to equivalence.
template <unsigned Q>
std::vector<MatSpace<Q>> find_spread_sets(const MatSpace<Q>& s, unsigned k, ClassOptions opt = {}) {
    std::vector<MatSpace<Q>> found;
    detail::for_each_partial_spread(s, k, [&](MatSpace<Q> p) {
        found.push_back(std::move(p));
        return true;
    });
    return equivalence_classes(std::move(found), static_cast<const StabilizerGroup<Q>*>(nullptr), opt);
}

template <unsigned Q>
bool contains_partial_spread(const MatSpace<Q>& s, unsigned k) {
    bool hit = false;
    detail::for_each_partial_spread(s, k, [&](const MatSpace<Q>&) {
        hit = true;
        return false;
    });
    return hit;
}

// ---------------------------------------------------------------------------
// Spread sets by rank (extension from the diagonal space)
// ---------------------------------------------------------------------------

struct ByRankOptions {
    std::map<unsigned, unsigned> pruning;  // dimension -> required partial-spread dimension
    unsigned workers = 1;
    std::function<void(const std::string&)> progress;
};

inline std::map<unsigned, unsigned> default_pruning(unsigned n) { return {{n + 2, 2}, {n + 3, 3}}; }

template <unsigned Q>
struct ByRankResult {
    SearchReport report;
    std::vector<MatSpace<Q>> spread_sets;
};

namespace detail {

// Globally distinct extensions <a, b> of every space in `parents`.
template <unsigned Q>
std::vector<MatSpace<Q>> extend_all(const std::vector<MatSpace<Q>>& parents, const std::vector<Mat<Q>>& points,
                                    unsigned workers, std::uint64_t& per_parent) {
    std::vector<std::vector<MatSpace<Q>>> local(parents.size());
    parallel_for(parents.size(), workers, [&](std::size_t i) {
        const auto e = extensions(parents[i], points);
        for (const auto& m : e.members) local[i].push_back(parents[i].extended(points[m.front()]));
    });
    per_parent = 0;
    std::unordered_set<MatSpace<Q>, MatSpaceHash<Q>> seen;
    std::vector<MatSpace<Q>> out;
    for (auto& l : local) {
        per_parent += l.size();
        for (auto& s : l)
            if (seen.insert(s).second) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace detail

template <unsigned Q>
ByRankResult<Q> spread_sets_by_rank(unsigned n, unsigned r, const ByRankOptions& opt = {}) {
    if (r < n) throw BadParameters("R must be at least n");
    const auto t0 = std::chrono::steady_clock::now();
    const auto points = rank_one_points<Q>(n);
    ByRankResult<Q> res;
    res.report.algorithm = "spread_sets_by_rank";
    std::vector<MatSpace<Q>> level{MatSpace<Q>::diag(n)};
    std::vector<MatSpace<Q>> found;
    const ClassOptions copt{opt.workers};
    auto collect_spreads = [&](const std::vector<MatSpace<Q>>& spaces, LevelStat& stat) {
        std::vector<std::vector<MatSpace<Q>>> local(spaces.size());
        parallel_for(spaces.size(), opt.workers, [&](std::size_t i) { local[i] = find_spread_sets(spaces[i], n); });
        std::vector<MatSpace<Q>> here;
        for (auto& l : local)
            for (auto& s : l) here.push_back(std::move(s));
        here = equivalence_classes(std::move(here), static_cast<const StabilizerGroup<Q>*>(nullptr), copt);
        stat.spread_sets = here.size();
        found.insert(found.end(), here.begin(), here.end());
    };
    {
        LevelStat s0;
        s0.dim = n;
        s0.spaces = 1;
        s0.classes = 1;
        collect_spreads(level, s0);
        res.report.levels.push_back(s0);
    }
    for (unsigned m = n + 1; m <= r; ++m) {
        LevelStat stat;
        stat.dim = m;
        auto next = detail::extend_all(level, points, opt.workers, stat.spaces);
        stat.distinct = next.size();
        level = equivalence_classes(std::move(next), static_cast<const StabilizerGroup<Q>*>(nullptr), copt);
        stat.classes = level.size();
        if (auto it = opt.pruning.find(m); it != opt.pruning.end()) {
            std::vector<char> keep(level.size(), 0);
            parallel_for(level.size(), opt.workers,
                         [&](std::size_t i) { keep[i] = contains_partial_spread(level[i], it->second); });
            std::vector<MatSpace<Q>> kept;
            for (std::size_t i = 0; i < level.size(); ++i)
                if (keep[i]) kept.push_back(std::move(level[i]));
            level = std::move(kept);
            stat.survivors = level.size();
        }
        collect_spreads(level, stat);
        res.report.levels.push_back(stat);
        if (opt.progress)
            opt.progress("dim " + std::to_string(m) + ": " + std::to_string(*stat.distinct) + " spaces, " +
                         std::to_string(*stat.classes) + " classes");
    }
    res.spread_sets = equivalence_classes(std::move(found), static_cast<const StabilizerGroup<Q>*>(nullptr), copt);
    res.report.outcome = res.spread_sets.empty() ? "exhausted" : "found";
    res.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// ---------------------------------------------------------------------------
// Verification of rank-one spanning sets
// ---------------------------------------------------------------------------

enum class VerifyReason { Ok, WrongSize, NotRankOne, NotContained };

inline const char* to_string(VerifyReason r) {
    switch (r) {
        case VerifyReason::Ok: return "ok";
        case VerifyReason::WrongSize: return "wrong matrix size";
        case VerifyReason::NotRankOne: return "a generator does not have rank one";
        default: return "spread set not contained in the span";
    }
}

struct VerifyResult {
    bool ok = false;
    VerifyReason reason = VerifyReason::Ok;
    std::size_t index = 0;  // offending generator or basis element
    explicit operator bool() const { return ok; }
};

template <unsigned Q>
VerifyResult verify_decomposition(const MatSpace<Q>& c, const std::vector<Mat<Q>>& ones) {
    for (std::size_t i = 0; i < ones.size(); ++i) {
        if (ones[i].n != c.n()) return {false, VerifyReason::WrongSize, i};
        if (ones[i].rank() != 1) return {false, VerifyReason::NotRankOne, i};
    }
    const auto span = MatSpace<Q>::span(c.n(), ones);
    const auto basis = c.basis();
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!span.contains(basis[i])) return {false, VerifyReason::NotContained, i};
    return {true, VerifyReason::Ok, 0};
}

// ---------------------------------------------------------------------------
// Tensor rank of a given spread set
// ---------------------------------------------------------------------------

struct RankOptions {
    bool sub2_pruning = true;  // used only where no [m, n, n+1] code exists
    unsigned workers = 1;
    std::function<void(const std::string&)> progress;
};

template <unsigned Q>
struct RankResult {
    unsigned rank = 0;
    std::vector<Mat<Q>> witness;
    SearchReport report;
};

/// Group elements up to the scalar pairs (l*A, m*B), which fix every space.
template <unsigned Q>
std::vector<Isotopism<Q>> effective_elements(const std::vector<Isotopism<Q>>& elements) {
    std::vector<Isotopism<Q>> out;
    for (const auto& g : elements)
        if (g.A.v.get(static_cast<unsigned>(lowest_nonzero(g.A.v))) == 1 &&
            g.B.v.get(static_cast<unsigned>(lowest_nonzero(g.B.v))) == 1)
            out.push_back(g);
    return out;
}

/// Largest R' >= 2n-1 such that no [m, n, n+1] code exists for every m in [2n-1, R'],
/// or nullopt if even [2n-1, n, n+1] may exist.
inline std::optional<unsigned> sub2_limit(unsigned q, unsigned n, unsigned cap) {
    std::optional<unsigned> lim;
    for (unsigned m = 2 * n - 1; m <= cap; ++m) {
        if (code_exists(q, m, n, n + 1) != Existence::No) break;
        lim = m;
    }
    return lim;
}

template <unsigned Q>
RankResult<Q> tensor_rank(const MatSpace<Q>& c, const StabilizerGroup<Q>& aut, unsigned max_r,
                          const RankOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned n = c.n();
    for (const auto& g : aut.generators)
        if (!stabilizes(g, c)) throw BadParameters("group does not stabilize the spread set");
    const auto points = rank_one_points<Q>(n);
    const auto group = effective_elements(aut.elements);
    RankResult<Q> res;
    res.report.algorithm = "tensor_rank";
    auto finish = [&](unsigned m, std::vector<Mat<Q>> w) {
        res.rank = m;
        res.witness = std::move(w);
        res.report.outcome = "witness";
        res.report.witness = encode_all(res.witness);
        res.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };
    if (auto w = rank_one_basis(c, points)) return finish(c.dim(), *w);

    // The pruned search is complete only for ranks up to `limit`.
    std::optional<unsigned> limit;
    if (opt.sub2_pruning && n >= 2) limit = sub2_limit(Q, n, max_r);
    bool pruned = limit.has_value();
    if (pruned) res.report.notes.push_back("sub2 pruning valid up to rank " + std::to_string(*limit));

    for (;;) {
        std::vector<MatSpace<Q>> level{c};
        res.report.levels.clear();
        for (unsigned m = c.dim() + 1; m <= max_r; ++m) {
            if (pruned && m > *limit) break;
            LevelStat stat;
            stat.dim = m;
            const bool filter = pruned && m == 2 * n - 1;
            const bool last = m == max_r || (pruned && m == *limit);
            std::unordered_set<std::vector<PackedVec<Q>>, detail::BasisHash<Q>> reps;
            std::optional<std::vector<Mat<Q>>> witness;
            constexpr std::size_t kChunk = 256;
            for (std::size_t begin = 0; begin < level.size() && !witness; begin += kChunk) {
                const std::size_t cnt = std::min(kChunk, level.size() - begin);
                std::vector<std::uint64_t> formed(cnt, 0);
                std::vector<std::vector<std::vector<PackedVec<Q>>>> canon(cnt);
                std::vector<std::optional<std::vector<Mat<Q>>>> found(cnt);
                std::vector<std::uint64_t> kept(cnt, 0);
                parallel_for(cnt, opt.workers, [&](std::size_t k) {
                    const auto& w = level[begin + k];
                    const auto e = detail::extensions(w, points);
                    formed[k] = e.keys.size();
                    for (std::size_t i = 0; i < e.keys.size(); ++i) {
                        const unsigned ind = detail::independent_count(points, e.inside, e.members[i]);
                        const auto s = w.extended(points[e.members[i].front()]);
                        if (ind == m) {
                            found[k] = rank_one_basis(s, points);
                            return;
                        }
                        if (last || (filter && ind < n)) continue;
                        ++kept[k];
                        canon[k].push_back(canonical_under(group, s));
                    }
                });
                for (std::size_t k = 0; k < cnt; ++k) {
                    stat.spaces += formed[k];
                    if (found[k] && !witness) witness = std::move(found[k]);
                    if (filter) stat.survivors = stat.survivors.value_or(0) + kept[k];
                    for (auto& key : canon[k]) reps.insert(std::move(key));
                }
            }
            if (witness) {
                res.report.levels.push_back(stat);
                return finish(m, *witness);
            }
            level.clear();
            for (const auto& key : reps) level.push_back(MatSpace<Q>::from_rref(n, key));
            std::sort(level.begin(), level.end(), [](const MatSpace<Q>& a, const MatSpace<Q>& b) { return key_less(a, b); });
            stat.classes = level.size();
            res.report.levels.push_back(stat);
            if (opt.progress)
                opt.progress("dim " + std::to_string(m) + ": " + std::to_string(stat.spaces) + " spaces, " +
                             std::to_string(level.size()) + " classes");
        }
        if (pruned && *limit < max_r) {
            res.report.notes.push_back("no witness up to rank " + std::to_string(*limit) + ", restarting unpruned");
            pruned = false;
            continue;
        }
        throw RankExceedsCap("tensor rank exceeds " + std::to_string(max_r));
    }
}

// ---------------------------------------------------------------------------
// Lower-bound search: extension of a spread set by rank-one matrices
// ---------------------------------------------------------------------------

struct DisproveOptions {
    unsigned workers = 1;
    std::string checkpoint;                    // empty: none
    double checkpoint_interval = 600;          // seconds
    unsigned stop_after_level = ~0u;           // 1-based level count to run
    bool allow_unpruned = false;
    bool classify_second_level = false;        // also count classes under the full automorphism group
    bool global_distinct = false;              // also count globally distinct spaces at later levels
    std::function<void(const std::string&)> progress;
};

namespace detail {

template <unsigned Q>
nlohmann::json spaces_to_json(const std::vector<MatSpace<Q>>& spaces) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : spaces) {
        std::vector<std::uint64_t> e;
        for (const auto& b : s.rref()) e.push_back(encode(Mat<Q>(s.n(), b)));
        a.push_back(e);
    }
    return a;
}

template <unsigned Q>
std::vector<MatSpace<Q>> spaces_from_json(const nlohmann::json& a, unsigned n) {
    std::vector<MatSpace<Q>> out;
    for (const auto& e : a) out.push_back(MatSpace<Q>::from_encodings(n, e.get<std::vector<std::uint64_t>>()));
    return out;
}

// Search state between parents; enough to resume a run.
template <unsigned Q>
struct DisproveState {
    unsigned level = 0;            // index of the level in progress
    std::size_t parent = 0;        // parents of that level already processed
    std::vector<MatSpace<Q>> frontier;
    std::vector<MatSpace<Q>> next;
    SearchReport report;
};

template <unsigned Q>
void save_state(const std::string& path, const DisproveState<Q>& st, unsigned q, unsigned n,
                const std::vector<std::uint64_t>& target) {
    nlohmann::json j{{"version", 1},
                     {"q", q},
                     {"n", n},
                     {"target", target},
                     {"level", st.level},
                     {"parent", st.parent},
                     {"frontier", spaces_to_json(st.frontier)},
                     {"next", spaces_to_json(st.next)},
                     {"report", to_json(st.report)}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump();
    }
    std::filesystem::rename(tmp, path);
}

template <unsigned Q>
std::optional<DisproveState<Q>> load_state(const std::string& path, unsigned n, const std::vector<std::uint64_t>& target) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    const auto j = nlohmann::json::parse(in);
    if (j.at("version") != 1 || j.at("q") != Q || j.at("n") != n ||
        j.at("target").get<std::vector<std::uint64_t>>() != target)
        throw BadParameters("checkpoint belongs to a different search");
    DisproveState<Q> st;
    st.level = j.at("level");
    st.parent = j.at("parent");
    st.frontier = spaces_from_json<Q>(j.at("frontier"), n);
    st.next = spaces_from_json<Q>(j.at("next"), n);
    const auto& r = j.at("report");
    st.report.algorithm = r.at("algorithm");
    for (const auto& l : r.at("levels")) st.report.levels.push_back(level_from_json(l));
    st.report.notes = r.at("notes").get<std::vector<std::string>>();
    st.report.seconds = r.at("seconds");
    return st;
}

}  // namespace detail

/// Exhausts the spaces <C, A_1, ..., A_k> (A_i of rank one, k <= R - n) that
/// could contain a rank-R decomposition, using orbit representatives under the
/// automorphism group for the first two extensions and, when no [R, n, n+1]
/// code exists, keeping only (2n-1)-dimensional spaces with n independent
/// rank-one elements. Levels after the second are counted per parent.
template <unsigned Q>
SearchReport disprove_rank(const MatSpace<Q>& c, unsigned r, const StabilizerGroup<Q>& aut,
                           const DisproveOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned n = c.n();
    if (r <= c.dim()) throw BadParameters("R must exceed dim C");
    const auto target = c.key();
    const auto points = rank_one_points<Q>(n);

    bool pruning = true;
    for (unsigned m = 2 * n - 1; m <= r && pruning; ++m)
        if (code_exists(Q, m, n, n + 1) != Existence::No) pruning = false;
    if (!pruning && !opt.allow_unpruned)
        throw PruningUnavailable("an [R, n, n+1] code may exist for some length in [2n-1, R]");

    detail::DisproveState<Q> st;
    bool resumed = false;
    if (!opt.checkpoint.empty())
        if (auto s = detail::load_state<Q>(opt.checkpoint, n, target)) {
            st = std::move(*s);
            resumed = true;
        }
    if (!resumed) {
        st.report.algorithm = "disprove_rank";
        st.report.notes.push_back(pruning ? "sub2 pruning at dimension " + std::to_string(2 * n - 1)
                                          : "unpruned: [R, n, n+1] codes not excluded");
        st.frontier = {c};
    }
    const double base_seconds = st.report.seconds;
    auto elapsed = [&] { return base_seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    auto last_save = std::chrono::steady_clock::now();
    auto save = [&] {
        if (opt.checkpoint.empty()) return;
        st.report.seconds = elapsed();
        detail::save_state(opt.checkpoint, st, Q, n, target);
        last_save = std::chrono::steady_clock::now();
    };
    auto say = [&](const std::string& s) {
        if (opt.progress) opt.progress(s);
    };

    const unsigned levels = r - c.dim();
    for (; st.level < levels && st.level < opt.stop_after_level; ++st.level) {
        const unsigned dim = c.dim() + st.level + 1;
        if (st.report.levels.size() <= st.level) st.report.levels.push_back(LevelStat{dim, 0, {}, {}, {}, {}});
        LevelStat& stat = st.report.levels[st.level];
        const bool filter = pruning && dim == 2 * n - 1;
        const bool last = dim == r;

        if (st.level == 0) {
            // Orbits of rank-one points under the automorphism group.
            std::vector<Mat<Q>> outside;
            for (const auto& p : points)
                if (!c.contains(p)) outside.push_back(p);
            const auto e = detail::extensions(c, outside);
            const auto labels = orbit_labels(aut.generators, points, true);
            std::unordered_map<PackedVec<Q>, std::size_t, PackedVecHash<Q>> point_index;
            for (std::size_t i = 0; i < points.size(); ++i) point_index.emplace(points[i].v, i);
            std::map<std::size_t, std::uint64_t> orbit_min;  // orbit label -> least member encoding
            for (const auto& p : outside) {
                const std::size_t lab = labels[point_index.at(p.v)];
                const auto enc = encode(p);
                auto [it, fresh] = orbit_min.try_emplace(lab, enc);
                if (!fresh) it->second = std::min(it->second, enc);
            }
            stat.spaces = e.keys.size();
            std::vector<MatSpace<Q>> reps;
            for (const auto& [_, enc] : orbit_min) reps.push_back(c.extended(decode<Q>(enc, n)));
            // Distinct orbits of points can still give the same space.
            std::unordered_set<MatSpace<Q>, MatSpaceHash<Q>> seen;
            st.next.clear();
            for (auto& s : reps)
                if (seen.insert(s).second) st.next.push_back(std::move(s));
            stat.classes = st.next.size();
        } else if (st.level == 1) {
            // Orbits of extensions of each representative under its stabilizer.
            std::vector<std::vector<MatSpace<Q>>> local(st.frontier.size());
            std::vector<std::uint64_t> formed(st.frontier.size(), 0);
            parallel_for(st.frontier.size(), opt.workers, [&](std::size_t pi) {
                const auto& w = st.frontier[pi];
                const auto stab = subgroup_stabilizing(aut, w);
                const auto e = detail::extensions(w, points);
                formed[pi] = e.keys.size();
                std::unordered_map<PackedVec<Q>, std::size_t, PackedVecHash<Q>> key_index;
                for (std::size_t i = 0; i < e.keys.size(); ++i) key_index.emplace(e.keys[i], i);
                std::vector<std::size_t> parent(e.keys.size());
                std::iota(parent.begin(), parent.end(), 0);
                auto find = [&](std::size_t x) {
                    while (parent[x] != x) x = parent[x] = parent[parent[x]];
                    return x;
                };
                for (const auto& g : stab.generators)
                    for (std::size_t i = 0; i < e.keys.size(); ++i) {
                        const auto img = projective_normal(w.residue_of(g.apply(points[e.members[i].front()]).v));
                        const std::size_t a = find(i), b = find(key_index.at(img));
                        if (a != b) parent[std::max(a, b)] = std::min(a, b);
                    }
                std::map<std::size_t, std::uint64_t> orbit_min;
                for (std::size_t i = 0; i < e.keys.size(); ++i) {
                    std::uint64_t enc = ~std::uint64_t{0};
                    for (auto m : e.members[i]) enc = std::min(enc, encode(points[m]));
                    auto [it, fresh] = orbit_min.try_emplace(find(i), enc);
                    if (!fresh) it->second = std::min(it->second, enc);
                }
                for (const auto& [_, enc] : orbit_min) local[pi].push_back(w.extended(decode<Q>(enc, n)));
            });
            stat.spaces = 0;
            st.next.clear();
            for (std::size_t i = 0; i < local.size(); ++i) {
                stat.spaces += formed[i];
                for (auto& s : local[i]) st.next.push_back(std::move(s));
            }
            stat.classes = st.next.size();
            if (opt.classify_second_level) {
                const auto group = effective_elements(aut.elements);
                std::vector<std::vector<PackedVec<Q>>> canon(st.next.size());
                parallel_for(st.next.size(), opt.workers,
                             [&](std::size_t i) { canon[i] = canonical_under(group, st.next[i]); });
                std::set<std::vector<PackedVec<Q>>> distinct(canon.begin(), canon.end());
                stat.distinct = distinct.size();
                st.report.notes.push_back("level " + std::to_string(dim) + ": " + std::to_string(distinct.size()) +
                                          " classes under the automorphism group");
            }
        } else {
            // Every extension of every parent; only survivors are kept.
            constexpr std::size_t kChunk = 64;
            std::optional<std::unordered_set<MatSpace<Q>, MatSpaceHash<Q>>> seen;
            if (opt.global_distinct) seen.emplace();
            while (st.parent < st.frontier.size()) {
                const std::size_t end = std::min(st.frontier.size(), st.parent + kChunk * std::max(1u, opt.workers));
                const std::size_t cnt = end - st.parent;
                std::vector<std::uint64_t> formed(cnt, 0);
                std::vector<std::vector<MatSpace<Q>>> kept(cnt);
                std::vector<std::vector<MatSpace<Q>>> all(cnt);
                std::vector<std::optional<std::vector<Mat<Q>>>> found(cnt);
                parallel_for(cnt, opt.workers, [&](std::size_t k) {
                    const auto& w = st.frontier[st.parent + k];
                    const auto e = detail::extensions(w, points);
                    formed[k] = e.keys.size();
                    for (std::size_t i = 0; i < e.keys.size(); ++i) {
                        const unsigned ind = detail::independent_count(points, e.inside, e.members[i]);
                        if (ind == dim && !found[k]) {
                            std::vector<Mat<Q>> ones;
                            for (auto m : e.inside) ones.push_back(points[m]);
                            for (auto m : e.members[i]) ones.push_back(points[m]);
                            found[k] = rank_one_basis(w.extended(points[e.members[i].front()]), points);
                        }
                        if (opt.global_distinct) all[k].push_back(w.extended(points[e.members[i].front()]));
                        if (last) continue;
                        if (filter && ind < n) continue;
                        kept[k].push_back(w.extended(points[e.members[i].front()]));
                    }
                });
                for (std::size_t k = 0; k < cnt; ++k) {
                    stat.spaces += formed[k];
                    for (auto& s : kept[k]) st.next.push_back(std::move(s));
                    if (seen)
                        for (auto& s : all[k]) seen->insert(std::move(s));
                    if (found[k] && st.report.witness.empty()) st.report.witness = encode_all(*found[k]);
                }
                st.parent = end;
                if (!st.report.witness.empty()) break;
                if (!opt.global_distinct &&
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - last_save).count() >=
                        opt.checkpoint_interval) {
                    save();
                    say("level " + std::to_string(dim) + ": " + std::to_string(st.parent) + "/" +
                        std::to_string(st.frontier.size()) + " parents");
                }
            }
            if (seen) stat.distinct = seen->size();
            if (filter) stat.survivors = st.next.size();
        }

        // Rank-one spanned spaces at the first two levels.
        if (st.level <= 1 && st.report.witness.empty())
            for (const auto& s : st.next)
                if (auto w = rank_one_basis(s, points)) {
                    st.report.witness = encode_all(*w);
                    break;
                }
        if (st.level <= 1 && filter) {
            std::vector<MatSpace<Q>> kept;
            for (auto& s : st.next)
                if (independent_count(rank_ones_in(s, points)) >= n) kept.push_back(std::move(s));
            st.next = std::move(kept);
            stat.survivors = st.next.size();
        }

        say("level " + std::to_string(dim) + ": " + std::to_string(stat.spaces) + " spaces" +
            (stat.classes ? ", " + std::to_string(*stat.classes) + " representatives" : "") +
            (stat.survivors ? ", " + std::to_string(*stat.survivors) + " kept" : ""));
        if (!st.report.witness.empty()) {
            st.report.outcome = "witness";
            st.report.seconds = elapsed();
            ++st.level;
            save();
            return st.report;
        }
        st.frontier = std::move(st.next);
        st.next.clear();
        st.parent = 0;
        if (st.level + 1 < levels) {
            ++st.level;
            save();
            --st.level;
        }
    }
    st.report.outcome = st.level >= levels ? "exhausted" : "stopped";
    st.report.seconds = elapsed();
    save();
    return st.report;
}

}  // namespace semirank
