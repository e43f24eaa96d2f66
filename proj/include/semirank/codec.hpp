#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace semirank {

// Compact integer form of a matrix: entry (i,j) (0-based) is the base-q digit
// at position i*n + j, so the (1,1) entry is the least significant digit.

inline std::uint64_t encoding_bound(unsigned q, unsigned n) {
    std::uint64_t b = 0;
    if (!checked_pow(q, n * n, b))
        throw EncodingOverflow("q^(n^2) does not fit in 64 bits for q=" + std::to_string(q) +
                               ", n=" + std::to_string(n));
    return b;
}

template <unsigned Q>
Mat<Q> decode(std::uint64_t value, unsigned n) {
    const std::uint64_t bound = encoding_bound(Q, n);
    if (value >= bound)
        throw EncodingOverflow(std::to_string(value) + " >= " + std::to_string(Q) + "^" + std::to_string(n * n));
    Mat<Q> m(n);
    for (unsigned pos = 0; pos < n * n; ++pos) {
        m.v.set(pos, static_cast<unsigned>(value % Q));
        value /= Q;
    }
    return m;
}

template <unsigned Q>
std::uint64_t encode(const Mat<Q>& m) {
    encoding_bound(Q, m.n);
    if constexpr (Q == 2) {
        return m.v.bits;
    } else {
        std::uint64_t value = 0;
        for (unsigned pos = m.n * m.n; pos-- > 0;) value = value * Q + m.v.get(pos);
        return value;
    }
}

/// Row vector of length `len` as a base-Q integer (coordinate j is digit j).
template <unsigned Q>
std::uint64_t encode_row(const PackedVec<Q>& v, unsigned len) {
    std::uint64_t value = 0;
    for (unsigned pos = len; pos-- > 0;) value = value * Q + v.get(pos);
    return value;
}

template <unsigned Q>
PackedVec<Q> decode_row(std::uint64_t value, unsigned len) {
    PackedVec<Q> v;
    for (unsigned pos = 0; pos < len; ++pos) {
        v.set(pos, static_cast<unsigned>(value % Q));
        value /= Q;
    }
    if (value != 0) throw EncodingOverflow("row value exceeds q^len");
    return v;
}

template <unsigned Q>
std::vector<Mat<Q>> decode_all(const std::vector<std::uint64_t>& values, unsigned n) {
    std::vector<Mat<Q>> out;
    out.reserve(values.size());
    for (auto v : values) out.push_back(decode<Q>(v, n));
    return out;
}

template <unsigned Q>
std::vector<std::uint64_t> encode_all(const std::vector<Mat<Q>>& mats) {
    std::vector<std::uint64_t> out;
    out.reserve(mats.size());
    for (const auto& m : mats) out.push_back(encode(m));
    return out;
}

// ---------------------------------------------------------------------------
// Text files
//
//   spread set:     "q n"     then n lines, one encoding per basis matrix
//   decomposition:  "q n R"   then R lines, one encoding per rank-one matrix
// ---------------------------------------------------------------------------

struct MatrixListFile {
    unsigned q = 0;
    unsigned n = 0;
    std::vector<std::uint64_t> encodings;
};

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

inline std::vector<std::uint64_t> parse_uints(const std::string& line, std::size_t lineno) {
    std::istringstream ss(line);
    std::vector<std::uint64_t> out;
    std::string tok;
    while (ss >> tok) {
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(lineno, "expected a nonnegative integer, got '" + tok + "'");
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::out_of_range&) {
            throw ParseError(lineno, "integer out of range: " + tok);
        }
    }
    return out;
}

// header_fields is 2 for spread sets ("q n") and 3 for decompositions ("q n R").
inline MatrixListFile parse_matrix_list(std::istream& in, std::size_t header_fields) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_content_line(in, line, lineno)) throw ParseError(1, "missing header");
    const auto header = parse_uints(line, lineno);
    if (header.size() != header_fields)
        throw ParseError(lineno, "header must have " + std::to_string(header_fields) + " fields");
    MatrixListFile f;
    f.q = static_cast<unsigned>(header[0]);
    f.n = static_cast<unsigned>(header[1]);
    if (!is_supported_prime(f.q)) throw ParseError(lineno, "unsupported modulus q=" + std::to_string(f.q));
    if (f.n == 0) throw ParseError(lineno, "n must be positive");
    std::uint64_t bound = 0;
    try {
        bound = encoding_bound(f.q, f.n);
    } catch (const EncodingOverflow& e) {
        throw ParseError(lineno, e.what());
    }
    const std::size_t expected = header_fields == 2 ? f.n : static_cast<std::size_t>(header[2]);
    while (f.encodings.size() < expected) {
        if (!next_content_line(in, line, lineno))
            throw ParseError(lineno + 1, "expected " + std::to_string(expected) + " matrices, found " +
                                             std::to_string(f.encodings.size()));
        const auto vals = parse_uints(line, lineno);
        if (vals.size() != 1) throw ParseError(lineno, "expected exactly one encoding per line");
        if (vals[0] >= bound) throw ParseError(lineno, "encoding exceeds q^(n^2)");
        f.encodings.push_back(vals[0]);
    }
    if (next_content_line(in, line, lineno)) throw ParseError(lineno, "unexpected trailing content");
    return f;
}

inline std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path);
    return in;
}

}  // namespace detail

inline MatrixListFile parse_spreadset(std::istream& in) { return detail::parse_matrix_list(in, 2); }
inline MatrixListFile parse_decomposition(std::istream& in) { return detail::parse_matrix_list(in, 3); }

inline MatrixListFile read_spreadset_file(const std::string& path) {
    auto in = detail::open_for_read(path);
    return parse_spreadset(in);
}
inline MatrixListFile read_decomposition_file(const std::string& path) {
    auto in = detail::open_for_read(path);
    return parse_decomposition(in);
}

inline std::string format_spreadset(const MatrixListFile& f) {
    std::ostringstream out;
    out << f.q << ' ' << f.n << '\n';
    for (auto e : f.encodings) out << e << '\n';
    return out.str();
}
inline std::string format_decomposition(const MatrixListFile& f) {
    std::ostringstream out;
    out << f.q << ' ' << f.n << ' ' << f.encodings.size() << '\n';
    for (auto e : f.encodings) out << e << '\n';
    return out.str();
}

inline void write_spreadset_file(const std::string& path, const MatrixListFile& f) {
    std::ofstream(path) << format_spreadset(f);
}
inline void write_decomposition_file(const std::string& path, const MatrixListFile& f) {
    std::ofstream(path) << format_decomposition(f);
}

}  // namespace semirank
