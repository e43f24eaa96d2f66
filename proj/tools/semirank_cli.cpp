#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semirank.hpp"

using namespace semirank;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kUsage = 2;

struct Config {
    unsigned q = 0;
    unsigned n = 0;
    std::vector<std::string> atlas;
    std::vector<std::string> spreadset;
    std::string decomp;
    unsigned max_r = 0;
    unsigned workers = 1;
    std::string checkpoint;
    double checkpoint_interval = 600;
    bool as_json = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One spread set given by --atlas or --spreadset (index picks among repeats).
MatrixListFile load_spreadset(const Config& c, std::size_t index = 0) {
    const std::size_t na = c.atlas.size(), ns = c.spreadset.size();
    if (index < na) return atlas_spreadset_file(atlas_get(c.atlas[index]));
    if (index - na < ns) return read_spreadset_file(c.spreadset[index - na]);
    throw UsageError("need a spread set: --atlas NAME or --spreadset PATH");
}

MatrixListFile load_decomposition(const Config& c) {
    if (!c.decomp.empty()) return read_decomposition_file(c.decomp);
    if (!c.atlas.empty()) {
        const auto& e = atlas_get(c.atlas.front());
        if (e.decomposition.empty()) throw UsageError("atlas entry " + e.name + " has no decomposition");
        return atlas_decomposition_file(e);
    }
    throw UsageError("need a decomposition: --decomp PATH or --atlas NAME");
}

template <unsigned Q>
std::string show(const Mat<Q>& m) {
    std::ostringstream os;
    for (unsigned i = 0; i < m.n; ++i) {
        for (unsigned j = 0; j < m.n; ++j) os << m.at(i, j);
        if (i + 1 < m.n) os << '/';
    }
    return os.str();
}

void progress(const std::string& s) { std::cerr << s << std::endl; }

void emit(const Config& c, const json& j, const std::string& text) {
    if (c.as_json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

std::string levels_text(const SearchReport& r) {
    std::ostringstream os;
    for (const auto& l : r.levels) {
        os << "dim " << l.dim << ": " << l.spaces << " spaces";
        if (l.distinct) os << ", " << *l.distinct << " distinct";
        if (l.classes) os << ", " << *l.classes << " classes";
        if (l.survivors) os << ", " << *l.survivors << " kept";
        if (l.spread_sets) os << ", " << *l.spread_sets << " spread sets";
        os << "\n";
    }
    for (const auto& note : r.notes) os << "note: " << note << "\n";
    os << "outcome: " << r.outcome << " (" << r.seconds << " s)\n";
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_decode(const Config& c, const std::vector<std::uint64_t>& values) {
    if (c.q == 0 || c.n == 0) throw UsageError("decode needs --q and --n");
    return with_field(c.q, [&]<unsigned Q>() {
        json j = json::array();
        std::string text;
        for (auto v : values) {
            const auto m = decode<Q>(v, c.n);
            j.push_back({{"encoding", v}, {"matrix", show(m)}, {"rank", m.rank()}});
            text += std::to_string(v) + " " + show(m) + "\n";
        }
        emit(c, j, text);
        return kOk;
    });
}

int cmd_encode(const Config& c, const std::vector<std::string>& mats) {
    if (c.q == 0 || c.n == 0) throw UsageError("encode needs --q and --n");
    return with_field(c.q, [&]<unsigned Q>() {
        json j = json::array();
        std::string text;
        for (const auto& s : mats) {
            const auto v = encode(parse_displayed<Q>(s, c.n));
            j.push_back(v);
            text += std::to_string(v) + "\n";
        }
        emit(c, j, text);
        return kOk;
    });
}

int cmd_verify(const Config& c) {
    const auto s = load_spreadset(c);
    const bool with_decomp = !c.decomp.empty() || (!c.atlas.empty() && !atlas_get(c.atlas.front()).decomposition.empty());
    return with_field(s.q, [&]<unsigned Q>() {
        const auto space = MatSpace<Q>::from_encodings(s.n, s.encodings);
        const bool spread = is_spreadset(space);
        json j{{"spread_set", spread}};
        std::string text = std::string("spread set: ") + (spread ? "nonsingular" : "NOT a spread set") + "\n";
        bool ok = spread;
        if (with_decomp) {
            const auto d = load_decomposition(c);
            if (d.q != s.q || d.n != s.n) throw UsageError("decomposition and spread set differ in q or n");
            const auto v = verify_decomposition(space, decode_all<Q>(d.encodings, d.n));
            j["decomposition"] = {{"ok", v.ok}, {"size", d.encodings.size()}, {"reason", to_string(v.reason)}};
            if (!v.ok) j["decomposition"]["index"] = v.index;
            text += "decomposition of " + std::to_string(d.encodings.size()) + ": " +
                    (v.ok ? std::string("verified") : std::string(to_string(v.reason)) + " (item " +
                                                          std::to_string(v.index + 1) + ")") + "\n";
            ok = ok && v.ok;
        }
        emit(c, j, text);
        return ok ? kOk : kRefuted;
    });
}

int cmd_rank(const Config& c, bool no_prune) {
    const auto s = load_spreadset(c);
    const unsigned cap = c.max_r ? c.max_r : 2 * s.n * s.n;
    if (cap < s.n) throw UsageError("--max must be at least n");
    return with_field(s.q, [&]<unsigned Q>() {
        const auto space = MatSpace<Q>::from_encodings(s.n, s.encodings);
        const auto aut = automorphism_group(space);
        RankOptions o;
        o.workers = c.workers;
        o.sub2_pruning = !no_prune;
        o.progress = progress;
        try {
            const auto r = tensor_rank(space, aut, cap, o);
            json j = to_json(r.report);
            j["rank"] = r.rank;
            j["automorphism_group_order"] = aut.order();
            std::string text = std::to_string(r.rank) + "\nwitness:";
            for (auto e : r.report.witness) text += " " + std::to_string(e);
            emit(c, j, text + "\n");
            return kOk;
        } catch (const RankExceedsCap& e) {
            emit(c, json{{"rank_exceeds", cap}}, "rank exceeds " + std::to_string(cap) + "\n");
            return kRefuted;
        }
    });
}

int cmd_search(const Config& c, const std::vector<std::string>& prune, bool no_prune) {
    if (c.q == 0 || c.n == 0 || c.max_r == 0) throw UsageError("search needs --q, --n and --max");
    ByRankOptions o;
    o.workers = c.workers;
    o.progress = progress;
    if (!no_prune) o.pruning = default_pruning(c.n);
    if (!prune.empty()) o.pruning.clear();
    for (const auto& p : prune) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw UsageError("--prune takes DIM:K");
        o.pruning[static_cast<unsigned>(std::stoul(p.substr(0, colon)))] =
            static_cast<unsigned>(std::stoul(p.substr(colon + 1)));
    }
    return with_field(c.q, [&]<unsigned Q>() {
        const auto r = spread_sets_by_rank<Q>(c.n, c.max_r, o);
        json j = to_json(r.report);
        json sets = json::array();
        std::string text = levels_text(r.report);
        for (const auto& s : r.spread_sets) {
            std::vector<std::uint64_t> enc;
            for (const auto& b : s.basis()) enc.push_back(encode(b));
            sets.push_back(enc);
            text += "spread set:";
            for (auto e : enc) text += " " + std::to_string(e);
            text += "\n";
        }
        j["spread_sets"] = sets;
        emit(c, j, text);
        return kOk;
    });
}

int cmd_disprove(const Config& c, unsigned levels, bool allow_unpruned) {
    const auto s = load_spreadset(c);
    if (c.max_r == 0) throw UsageError("disprove needs --max R");
    return with_field(s.q, [&]<unsigned Q>() {
        const auto space = MatSpace<Q>::from_encodings(s.n, s.encodings);
        const auto aut = automorphism_group(space);
        DisproveOptions o;
        o.workers = c.workers;
        o.checkpoint = c.checkpoint;
        o.checkpoint_interval = c.checkpoint_interval;
        o.allow_unpruned = allow_unpruned;
        if (levels) o.stop_after_level = levels;
        o.progress = progress;
        const auto r = disprove_rank(space, c.max_r, aut, o);
        std::string text = levels_text(r);
        if (r.outcome == "exhausted") text += "no decomposition of size " + std::to_string(c.max_r) + "\n";
        emit(c, to_json(r), text);
        return r.outcome == "witness" ? kRefuted : kOk;
    });
}

template <unsigned Q>
std::string code_text(const std::string& label, const GenMatrix<Q>& g) {
    std::ostringstream os;
    os << label << ": [" << g.length << ", " << g.rows.size() << ", " << min_distance(g) << "] weights [";
    const auto w = weight_distribution(g);
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << "]\n";
    for (const auto& r : g.to_strings()) os << "  " << r << "\n";
    return os.str();
}

template <unsigned Q>
json code_json(const GenMatrix<Q>& g) {
    return {{"length", g.length}, {"k", g.rows.size()}, {"min_distance", min_distance(g)},
            {"weights", weight_distribution(g)}, {"rows", g.to_strings()}};
}

int cmd_codes(const Config& c, bool g1_printed) {
    if (g1_printed) {
        const auto g = GenMatrix<3>::from_strings(atlas_g1());
        const auto w = weight_distribution(g);
        std::string text = "[";
        for (std::size_t i = 0; i < w.size(); ++i) text += (i ? "," : "") + std::to_string(w[i]);
        text += "]\nmin distance " + std::to_string(min_distance(g)) + "\n";
        emit(c, code_json(g), text);
        return kOk;
    }
    const auto s = load_spreadset(c);
    const auto d = load_decomposition(c);
    return with_field(s.q, [&]<unsigned Q>() {
        const auto space = MatSpace<Q>::from_encodings(s.n, s.encodings);
        const auto pd = decomposition_from_rank_ones(space.basis(), decode_all<Q>(d.encodings, d.n));
        const auto codes = codes_from_decomposition(pd);
        json j{{"codes", json::array()}, {"equivalent", json::array()}};
        std::string text;
        for (std::size_t i = 0; i < codes.size(); ++i) {
            j["codes"].push_back(code_json(codes[i]));
            text += code_text("G" + std::to_string(i + 1), codes[i]);
        }
        for (std::size_t a = 0; a < codes.size(); ++a)
            for (std::size_t b = a + 1; b < codes.size(); ++b) {
                const bool eq = code_equivalent(codes[a], codes[b]);
                j["equivalent"].push_back({{"a", a + 1}, {"b", b + 1}, {"equivalent", eq}});
                text += "G" + std::to_string(a + 1) + " ~ G" + std::to_string(b + 1) + ": " + (eq ? "yes" : "no") + "\n";
            }
        emit(c, j, text);
        return kOk;
    });
}

int cmd_knuth(const Config& c) {
    const auto s = load_spreadset(c);
    return with_field(s.q, [&]<unsigned Q>() {
        const auto orbit = knuth_orbit(MatSpace<Q>::from_encodings(s.n, s.encodings));
        json j = json::array();
        std::string text = std::to_string(orbit.size()) + " isotopism classes\n";
        for (const auto& m : orbit) {
            std::vector<std::uint64_t> enc;
            for (const auto& b : semifield_basis(m)) enc.push_back(encode(b));
            j.push_back(enc);
            for (auto e : enc) text += std::to_string(e) + " ";
            text += "\n";
        }
        emit(c, j, text);
        return kOk;
    });
}

int cmd_equiv(const Config& c) {
    const auto a = load_spreadset(c, 0);
    const auto b = load_spreadset(c, 1);
    if (a.q != b.q || a.n != b.n) {
        emit(c, json{{"equivalent", false}}, "not equivalent (different q or n)\n");
        return kRefuted;
    }
    return with_field(a.q, [&]<unsigned Q>() {
        const auto g = are_equivalent(MatSpace<Q>::from_encodings(a.n, a.encodings),
                                      MatSpace<Q>::from_encodings(b.n, b.encodings));
        if (!g) {
            emit(c, json{{"equivalent", false}}, "not equivalent\n");
            return kRefuted;
        }
        emit(c, json{{"equivalent", true}, {"A", encode(g->A)}, {"B", encode(g->B)}},
             "equivalent: A = " + show(g->A) + ", B = " + show(g->B) + "\n");
        return kOk;
    });
}

int cmd_atlas(const Config& c, const std::string& action, const std::string& name, const std::string& out_dir) {
    if (action == "list") {
        json j = json::array();
        std::string text;
        for (const auto& n : atlas_list()) {
            const auto& e = atlas_get(n);
            j.push_back({{"name", e.name}, {"q", e.q}, {"n", e.n}, {"expected_rank", e.expected_rank}});
            text += e.name + " q=" + std::to_string(e.q) + " n=" + std::to_string(e.n) +
                    " rank " + std::to_string(e.expected_rank) + "\n";
        }
        emit(c, j, text);
        return kOk;
    }
    if (action == "selfcheck") {
        const auto r = atlas_selfcheck();
        std::string text;
        for (const auto& ch : r.checks)
            text += std::string(ch.ok ? "pass " : "FAIL ") + ch.entry + ": " + ch.check +
                    (ch.detail.empty() ? "" : " (" + ch.detail + ")") + "\n";
        text += r.all_passed() ? "all checks passed\n" : "some checks failed\n";
        emit(c, to_json(r), text);
        return r.all_passed() ? kOk : kRefuted;
    }
    if (action == "export") {
        std::vector<std::string> names;
        if (name.empty()) names = atlas_list();
        else names.push_back(name);
        std::filesystem::create_directories(out_dir);
        json j = json::array();
        for (const auto& n : names) {
            const auto& e = atlas_get(n);
            const auto base = (std::filesystem::path(out_dir) / e.name).string();
            write_spreadset_file(base + ".spread", atlas_spreadset_file(e));
            j.push_back(base + ".spread");
            if (!e.decomposition.empty()) {
                write_decomposition_file(base + ".decomp", atlas_decomposition_file(e));
                j.push_back(base + ".decomp");
            }
        }
        std::string text;
        for (const auto& p : j) text += p.get<std::string>() + "\n";
        emit(c, j, text);
        return kOk;
    }
    throw UsageError("atlas action must be list, selfcheck or export");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor rank of finite semifields"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* sub, bool field, bool spread) {
        sub->add_flag("--json", c.as_json, "JSON output");
        if (field) {
            sub->add_option("--q", c.q, "field order (prime)");
            sub->add_option("--n", c.n, "matrix size");
        }
        if (spread) {
            sub->add_option("--atlas", c.atlas, "atlas entry name (repeatable)");
            sub->add_option("--spreadset", c.spreadset, "spread-set file (repeatable)");
            sub->add_option("--decomp", c.decomp, "decomposition file");
        }
    };
    auto search_opts = [&](CLI::App* sub) {
        sub->add_option("--max", c.max_r, "rank cap / target rank");
        sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    };

    std::vector<std::uint64_t> values;
    auto* decode_cmd = app.add_subcommand("decode", "encodings to matrices");
    common(decode_cmd, true, false);
    decode_cmd->add_option("values", values)->required();

    std::vector<std::string> mats;
    auto* encode_cmd = app.add_subcommand("encode", "matrices (rows separated by '/') to encodings");
    common(encode_cmd, true, false);
    encode_cmd->add_option("matrices", mats)->required();

    auto* verify_cmd = app.add_subcommand("verify", "check a spread set and optional decomposition");
    common(verify_cmd, false, true);

    bool no_prune = false;
    auto* rank_cmd = app.add_subcommand("rank", "tensor rank of a spread set");
    common(rank_cmd, false, true);
    search_opts(rank_cmd);
    rank_cmd->add_flag("--no-prune", no_prune, "disable code-based pruning");

    std::vector<std::string> prune;
    auto* search_cmd = app.add_subcommand("search", "spread sets of tensor rank at most --max");
    common(search_cmd, true, false);
    search_opts(search_cmd);
    search_cmd->add_option("--prune", prune, "pruning rule DIM:K (repeatable)");
    search_cmd->add_flag("--no-prune", no_prune, "no partial-spread pruning");

    unsigned levels = 0;
    bool allow_unpruned = false;
    auto* disprove_cmd = app.add_subcommand("disprove", "exhaust decompositions of size --max");
    common(disprove_cmd, false, true);
    search_opts(disprove_cmd);
    disprove_cmd->add_option("--checkpoint", c.checkpoint, "checkpoint file");
    disprove_cmd->add_option("--checkpoint-interval", c.checkpoint_interval, "seconds between checkpoints");
    disprove_cmd->add_option("--levels", levels, "stop after this many levels");
    disprove_cmd->add_flag("--allow-unpruned", allow_unpruned, "run without code-based pruning");

    bool g1_printed = false;
    auto* codes_cmd = app.add_subcommand("codes", "codes of a decomposition");
    common(codes_cmd, false, true);
    codes_cmd->add_flag("--g1-printed", g1_printed, "the printed G1 generator matrix");

    auto* knuth_cmd = app.add_subcommand("knuth", "Knuth orbit of a semifield");
    common(knuth_cmd, false, true);

    auto* equiv_cmd = app.add_subcommand("equiv", "equivalence of two spread sets");
    common(equiv_cmd, false, true);

    std::string action, name, out_dir = ".";
    auto* atlas_cmd = app.add_subcommand("atlas", "built-in data");
    atlas_cmd->add_flag("--json", c.as_json, "JSON output");
    atlas_cmd->add_option("action", action, "list | selfcheck | export")->required();
    atlas_cmd->add_option("name", name, "entry to export (default: all)");
    atlas_cmd->add_option("--out", out_dir, "export directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*decode_cmd) return cmd_decode(c, values);
        if (*encode_cmd) return cmd_encode(c, mats);
        if (*verify_cmd) return cmd_verify(c);
        if (*rank_cmd) return cmd_rank(c, no_prune);
        if (*search_cmd) return cmd_search(c, prune, no_prune);
        if (*disprove_cmd) return cmd_disprove(c, levels, allow_unpruned);
        if (*codes_cmd) return cmd_codes(c, g1_printed);
        if (*knuth_cmd) return cmd_knuth(c);
        if (*equiv_cmd) return cmd_equiv(c);
        if (*atlas_cmd) return cmd_atlas(c, action, name, out_dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const NotFound& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const UnsupportedField& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kRefuted;
    }
    return kUsage;
}
