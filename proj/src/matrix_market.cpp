#include "solverkit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

// std::from_chars gives locale-independent parsing and catches trailing junk.
bool parse_u64(const std::string& s, std::uint64_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

bool parse_f64(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc{} && p == e;
}

} // namespace

CsrMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_ws(line);
    if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" ||
        lower(header[1]) != "matrix")
        throw ParseError("expected header '%%MatrixMarket matrix <format> <field> <symmetry>'",
                         lineno);

    const std::string format = lower(header[2]);
    const std::string field = lower(header[3]);
    const std::string symmetry = lower(header[4]);

    if (format != "coordinate")
        throw ParseError("unsupported format '" + format + "' (only coordinate)", lineno);
    if (field != "real" && field != "integer")
        throw ParseError("unsupported field '" + field + "' (only real or integer)", lineno);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw ParseError("unsupported symmetry '" + symmetry + "' (only general or symmetric)",
                         lineno);

    // size line: first non-comment, non-blank line after the header
    std::uint64_t n_rows = 0, n_cols = 0, n_entries = 0;
    for (;;) {
        if (!std::getline(in, line))
            throw ParseError("missing size line", lineno + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != 3 || !parse_u64(toks[0], n_rows) || !parse_u64(toks[1], n_cols) ||
            !parse_u64(toks[2], n_entries))
            throw ParseError("size line must be '<rows> <cols> <entries>'", lineno);
        break;
    }

    std::vector<Triplet> entries;
    entries.reserve(symmetric ? 2 * n_entries : n_entries);
    std::uint64_t seen = 0;
    while (seen < n_entries) {
        if (!std::getline(in, line))
            throw ParseError("file ends after " + std::to_string(seen) + " of " +
                                 std::to_string(n_entries) + " entries",
                             lineno + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        std::uint64_t i = 0, j = 0;
        double v = 0.0;
        if (toks.size() != 3 || !parse_u64(toks[0], i) || !parse_u64(toks[1], j) ||
            !parse_f64(toks[2], v))
            throw ParseError("entry must be '<row> <col> <value>'", lineno);
        if (i < 1 || i > n_rows || j < 1 || j > n_cols)
            throw ParseError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") outside " + std::to_string(n_rows) + "x" +
                                 std::to_string(n_cols),
                             lineno);
        entries.push_back({static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v});
        if (symmetric && i != j)
            entries.push_back({static_cast<index_t>(j - 1), static_cast<index_t>(i - 1), v});
        ++seen;
    }

    return from_triplets(n_rows, n_cols, std::move(entries));
}

CsrMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
    a.validate();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n_rows << " " << a.n_cols << " " << a.nnz() << "\n";
    char buf[64];
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        for (std::size_t v = a.row_pointers[i]; v < a.row_pointers[i + 1]; ++v) {
            // %.17g survives a text round trip for any finite double
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1,
                          static_cast<std::size_t>(a.col_indices[v]) + 1, a.values[v]);
            out << buf;
        }
    }
}

void write_matrix_market_file(const std::string& path, const CsrMatrix& a) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_matrix_market(out, a);
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace solverkit
