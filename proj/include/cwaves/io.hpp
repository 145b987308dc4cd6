#pragma once

// File formats: RFC-4180 CSV, the "CWF1" binary field snapshot (magic bytes,
// grid descriptor, little-endian 64-bit floats), 17-significant-digit float
// text, and the FNV-1a digest used by run manifests.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cwaves/errors.hpp"
#include "cwaves/grid.hpp"

namespace cwaves {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_int(long long v) { return std::to_string(v); }

// ---- CSV ---------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
    bool needs = false;
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs = true;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw numerical_error("cannot open " + path.string() + " for writing");
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_quote(cells[i]);
        }
        out_ << "\r\n";
    }

private:
    std::ofstream out_;
};

// ---- CWF1 snapshots -------------------------------------------------------------

namespace detail {

inline void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64_le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64_le(out, bits);
}

inline std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

inline double get_f64_le(const unsigned char* p) {
    const std::uint64_t bits = get_u64_le(p);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace detail

inline void write_snapshot(const std::filesystem::path& path, const Field& u) {
    std::string buf = "CWF1";
    detail::put_u64_le(buf, u.grid->points());
    detail::put_f64_le(buf, u.grid->half_length());
    for (double v : u.values) detail::put_f64_le(buf, v);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numerical_error("cannot open " + path.string() + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline Field read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw numerical_error("cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 20 || buf.compare(0, 4, "CWF1") != 0)
        throw numerical_error(path.string() + ": not a CWF1 snapshot");
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const std::uint64_t m = detail::get_u64_le(p + 4);
    const double L = detail::get_f64_le(p + 12);
    if (buf.size() != 20 + 8 * m)
        throw numerical_error(path.string() + ": truncated CWF1 snapshot");
    auto grid = build_grid(L, m);
    std::vector<double> values(m);
    for (std::uint64_t i = 0; i < m; ++i) values[i] = detail::get_f64_le(p + 20 + 8 * i);
    return Field(grid, std::move(values));
}

// ---- digest -----------------------------------------------------------------------

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw numerical_error("cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a64(buf));
}

} // namespace cwaves
