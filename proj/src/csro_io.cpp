#include "solverkit/csro_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "solverkit/error.hpp"

namespace solverkit {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'R', 'O'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        T out;
        auto* src = reinterpret_cast<const unsigned char*>(&v);
        auto* dst = reinterpret_cast<unsigned char*>(&out);
        for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
        return out;
    }
}

template <typename T>
void put(std::ostream& out, T v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("truncated CSRO data");
    return to_little(v);
}

template <typename T>
void put_array(std::ostream& out, const std::vector<T>& v) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(T)));
    } else {
        for (T x : v) put(out, x);
    }
}

template <typename T>
void get_array(std::istream& in, std::vector<T>& v, std::size_t count) {
    v.resize(count);
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(count * sizeof(T)));
        if (!in) throw IoError("truncated CSRO data");
    } else {
        for (std::size_t i = 0; i < count; ++i) v[i] = get<T>(in);
    }
}

// doubles travel as raw bit patterns so -0.0 and NaN payloads survive
std::uint64_t double_bits(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

double bits_double(std::uint64_t u) {
    double d;
    std::memcpy(&d, &u, sizeof d);
    return d;
}

} // namespace

void write_csro(std::ostream& out, const CsroMatrix& a) {
    a.validate();
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, a.n_rows);
    put<std::uint64_t>(out, a.n_cols);
    put<std::uint64_t>(out, a.nnz());
    if constexpr (std::endian::native == std::endian::little) {
        put_array(out, a.values);
    } else {
        for (double d : a.values) put(out, double_bits(d));
    }
    put_array(out, a.col_indices);
    put_array(out, a.new_row_offsets);
    if (!out) throw IoError("CSRO write failed");
}

CsroMatrix read_csro(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a CSRO file (bad magic)");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw IoError("unsupported CSRO version " + std::to_string(version));

    CsroMatrix a;
    a.n_rows = get<std::uint64_t>(in);
    a.n_cols = get<std::uint64_t>(in);
    const auto nnz = get<std::uint64_t>(in);
    if constexpr (std::endian::native == std::endian::little) {
        get_array(in, a.values, nnz);
    } else {
        a.values.resize(nnz);
        for (auto& d : a.values) d = bits_double(get<std::uint64_t>(in));
    }
    get_array(in, a.col_indices, nnz);
    get_array(in, a.new_row_offsets, nnz);
    a.validate();
    return a;
}

void write_csro_file(const std::string& path, const CsroMatrix& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_csro(out, a);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

CsroMatrix read_csro_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_csro(in);
}

bool looks_like_csro_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[4] = {};
    in.read(magic, 4);
    return in && std::memcmp(magic, kMagic, 4) == 0;
}

} // namespace solverkit
